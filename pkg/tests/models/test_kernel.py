"""Unit tests for kernels and their discrete stencils."""

from contextlib import AbstractContextManager, nullcontext

import numpy as np
import pytest

from ltn_lab.errors import HorizonNotResolved, KernelError, ZeroBond
from ltn_lab.models.kernel import Kernel, discrete_moments, eval_kernel, horizon_steps


@pytest.mark.parametrize(
    "family,delta,model,youngs_modulus,expectation",
    [
        ("constant", 0.05, "diffusion", 1.0, nullcontext()),
        ("inverse_distance", 0.05, "peridynamic", 2.0, nullcontext()),
        ("gaussian", 0.05, "diffusion", 1.0, pytest.raises(KernelError)),
        ("constant", 0.05, "elastic", 1.0, pytest.raises(KernelError)),
        ("constant", 0.0, "diffusion", 1.0, pytest.raises(KernelError)),
        ("constant", -0.1, "diffusion", 1.0, pytest.raises(KernelError)),
        ("constant", 0.05, "peridynamic", 0.0, pytest.raises(KernelError)),
    ],
)
def test_kernel_error_conditions(
    family: str, delta: float, model: str, youngs_modulus: float, expectation: AbstractContextManager
) -> None:
    """Test KernelError is raised for unknown families, models and non-positive parameters."""
    with expectation:
        Kernel(family, delta, model=model, youngs_modulus=youngs_modulus)


@pytest.mark.parametrize(
    "kernel,xi,expected",
    [
        (Kernel("constant", 0.2), 0.1, 375.0),
        (Kernel("constant", 0.2), -0.1, 375.0),
        (Kernel("constant", 0.2), 0.3, 0.0),
        (Kernel("inverse_distance", 0.2), 0.1, 500.0),
        (Kernel("constant", 0.2, model="peridynamic", youngs_modulus=2.0), 0.1, 31250.0),
    ],
)
def test_eval_kernel(kernel: Kernel, xi: float, expected: float) -> None:
    assert eval_kernel(kernel, xi) == pytest.approx(expected)


def test_inverse_distance_kernel_is_singular_at_zero() -> None:
    """Test ZeroBond is raised at zero bond length."""
    with pytest.raises(ZeroBond):
        eval_kernel(Kernel("inverse_distance", 0.1), 0.0)


@pytest.mark.parametrize(
    "delta,h,expectation",
    [
        (0.05, 0.0125, nullcontext(4)),
        (0.025, 0.0125, nullcontext(2)),
        (0.0125, 0.0125, pytest.raises(HorizonNotResolved)),
        (0.05, 0.015, pytest.raises(KernelError)),
    ],
)
def test_horizon_steps(delta: float, h: float, expectation: AbstractContextManager) -> None:
    """Test under-resolved and non-integer horizons are rejected."""
    with expectation as expected:
        assert horizon_steps(delta, h) == expected


@pytest.mark.parametrize(
    "kernel",
    [
        Kernel("constant", 0.05),
        Kernel("inverse_distance", 0.05),
        Kernel("constant", 0.05, model="peridynamic", youngs_modulus=2.0),
        Kernel("inverse_distance", 0.05, model="peridynamic", youngs_modulus=0.5),
    ],
)
@pytest.mark.parametrize("m", [2, 4, 8])
def test_discrete_moments_match_the_local_limit(kernel: Kernel, m: int) -> None:
    stencil = discrete_moments(kernel, kernel.delta / m)

    assert stencil.m == m
    assert stencil.moment(1) == 0.0
    assert stencil.moment(3) == 0.0
    assert 2.0 * np.sum(stencil.coefficients * stencil.xi**2) == pytest.approx(2.0 * kernel.local_coefficient, rel=1e-12)
    assert np.all(stencil.coefficients > 0.0)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_diffusion_second_moment_is_two(m: int) -> None:
    stencil = discrete_moments(Kernel("constant", 0.05), 0.05 / m)

    assert stencil.moment(2) == pytest.approx(2.0, rel=1e-12)
    assert set(stencil.moments()) == {0, 1, 2, 3, 4}


def test_kernel_with_delta_keeps_the_model() -> None:
    kernel = Kernel("inverse_distance", 0.05, model="peridynamic", youngs_modulus=3.0).with_delta(0.1)

    assert kernel.delta == 0.1
    assert kernel.build() == {"family": "inverse_distance", "model": "peridynamic", "delta": 0.1, "youngs_modulus": 3.0}
