"""Unit tests for the Arlequin saddle-point assembly."""

from contextlib import AbstractContextManager, nullcontext

import numpy as np
import pytest

from ltn_lab.errors import IllPosedCoupling, ModeMismatch, OverlapTooSmall, RankDeficientCoupling
from ltn_lab.models.decomposition import Decomposition, build_decomposition
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.operators.arlequin import assemble_arlequin_saddle, check_rank, coupling_matrix, overlap_nodes
from ltn_lab.registry import PolynomialFunction

DOMAIN = (-0.05, 1.0)


@pytest.fixture(name="overlap", scope="module")
def get_overlap() -> Decomposition:
    return build_decomposition("overlap", DOMAIN, 0.05, overlap=(0.4, 0.6))


def test_saddle_block_sizes(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    saddle = assemble_arlequin_saddle(grid, overlap, kernel)

    assert overlap_nodes(grid, overlap) == (36, 52)
    assert len(saddle.dofs1) == 49
    assert len(saddle.dofs2) == 53
    assert saddle.n_multipliers == 17
    matrix, rhs = saddle.kkt()
    assert matrix.shape == (119, 119)
    np.testing.assert_array_equal(matrix, matrix.T)
    assert rhs.shape == (119,)


def test_saddle_boundary_data(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    g = PolynomialFunction([1.0, 1.0])

    saddle = assemble_arlequin_saddle(grid, overlap, kernel, g=g)

    assert sorted(saddle.constrained2) == [0, 1, 2, 3]
    assert saddle.constrained1 == {48: pytest.approx(2.0)}


def test_blended_stiffness_keeps_rigid_motions_free(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    saddle = assemble_arlequin_saddle(grid, overlap, kernel)
    k1, k2, _, _ = saddle.blocks

    np.testing.assert_allclose(k1 @ np.ones(49), 0.0, atol=1e-9)
    np.testing.assert_allclose(k2 @ np.ones(53), 0.0, atol=1e-9)


@pytest.mark.parametrize(
    "kappa0,kappa1,expectation",
    [
        (1.0, 1.0, nullcontext()),
        (0.0, 1.0, nullcontext()),
        (1.0, 0.0, pytest.raises(IllPosedCoupling)),
        (-1.0, 1.0, pytest.raises(IllPosedCoupling)),
    ],
)
def test_coupling_parameter_error_conditions(
    grid: Grid1D, kernel: Kernel, overlap: Decomposition, kappa0: float, kappa1: float, expectation: AbstractContextManager
) -> None:
    """Test IllPosedCoupling is raised for kappa1 = 0 or negative parameters."""
    with expectation:
        assemble_arlequin_saddle(grid, overlap, kernel, kappa0=kappa0, kappa1=kappa1)


def test_overlap_must_span_two_horizons(grid: Grid1D, kernel: Kernel) -> None:
    """Test OverlapTooSmall is raised for an overlap narrower than 2 delta."""
    narrow = build_decomposition("overlap", DOMAIN, 0.05, overlap=(0.4, 0.475))

    with pytest.raises(OverlapTooSmall):
        assemble_arlequin_saddle(grid, narrow, kernel)


def test_arlequin_needs_an_overlap(grid: Grid1D, kernel: Kernel) -> None:
    """Test ModeMismatch is raised for a non-overlapping decomposition."""
    sharp = build_decomposition("sharp_interface", DOMAIN, 0.05, interface=0.5)

    with pytest.raises(ModeMismatch):
        assemble_arlequin_saddle(grid, sharp, kernel)


def test_coupling_matrix_rank(grid: Grid1D) -> None:
    assert check_rank(coupling_matrix(grid, 17, 1.0, 1.0)) == 17
    assert coupling_matrix(grid, 17, 0.0, 1.0).shape == (16, 17)
    assert check_rank(coupling_matrix(grid, 17, 0.0, 1.0)) == 16


def test_check_rank_rejects_dependent_rows() -> None:
    """Test RankDeficientCoupling is raised for linearly dependent multiplier rows."""
    with pytest.raises(RankDeficientCoupling):
        check_rank(np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]))


def test_blended_stiffnesses_cancel_on_linear_fields(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    saddle = assemble_arlequin_saddle(grid, overlap, kernel)
    k1, k2, _, _ = saddle.blocks
    force = np.zeros(grid.n_nodes)

    force[saddle.dofs1] += k1 @ grid.x[saddle.dofs1]
    force[saddle.dofs2] += k2 @ grid.x[saddle.dofs2]

    np.testing.assert_allclose(force[4:84], 0.0, atol=1e-9)


def test_local_weight_runs_from_zero_to_one(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    alpha1 = assemble_arlequin_saddle(grid, overlap, kernel).alpha1

    assert alpha1[10] == pytest.approx(0.0, abs=1e-12)
    assert alpha1[-1] == pytest.approx(1.0)
    assert np.all(alpha1 >= -1e-12)
    assert np.all(alpha1 <= 1.0 + 1e-12)
