"""Unit tests for the optimization-based coupling."""

import numpy as np
import pytest

from ltn_lab.errors import ModeMismatch
from ltn_lab.models.decomposition import Decomposition, build_decomposition
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.registry import ConstFunction, PolynomialFunction, SinFunction
from ltn_lab.solvers.optimization import evaluate_objective, solve_optimization_based
from ltn_lab.solvers.subproblems import OverlapSplit

LINEAR = PolynomialFunction([1.0, 1.0])


@pytest.fixture(name="overlap", scope="module")
def get_overlap() -> Decomposition:
    return build_decomposition("overlap", (-0.05, 1.0), 0.05, overlap=(0.4, 0.6))


def test_linear_data_is_matched_exactly(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    field = solve_optimization_based(grid, overlap, kernel, ConstFunction(0.0), LINEAR)

    np.testing.assert_allclose(field.values, LINEAR(grid.x), atol=1e-9)
    assert field.objective < 1e-16
    np.testing.assert_allclose(field.blocks["controls"], [1.6, 1.6125, 1.625, 1.6375, 1.4], atol=1e-6)


def test_optimum_is_a_minimum(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    f, g = SinFunction(5.0, 2.0), ConstFunction(0.0)
    field = solve_optimization_based(grid, overlap, kernel, f, g)
    controls = field.blocks["controls"]

    at_optimum = evaluate_objective(grid, overlap, kernel, f, g, controls)
    assert at_optimum == pytest.approx(field.objective, rel=1e-6, abs=1e-14)
    for direction in np.eye(len(controls)):
        assert evaluate_objective(grid, overlap, kernel, f, g, controls + 1e-3 * direction) >= field.objective


def test_glued_field_takes_each_side_from_its_subproblem(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    field = solve_optimization_based(grid, overlap, kernel, SinFunction(), ConstFunction(0.0))
    u_nonlocal, u_local = field.blocks["u_nonlocal"], field.blocks["u_local"]

    np.testing.assert_array_equal(field.values[:52], u_nonlocal[:52])
    np.testing.assert_array_equal(field.values[52:], u_local[16:])
    assert field.method == "obm"


def test_overlap_split_needs_an_overlap(grid: Grid1D, kernel: Kernel) -> None:
    """Test ModeMismatch is raised for a non-overlapping decomposition."""
    sharp = build_decomposition("sharp_interface", (-0.05, 1.0), 0.05, interface=0.5)

    with pytest.raises(ModeMismatch):
        OverlapSplit(grid, sharp, kernel, ConstFunction(0.0), LINEAR)


def test_overlap_split_geometry(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    split = OverlapSplit(grid, overlap, kernel, ConstFunction(0.0), LINEAR)

    assert (split.i_lo, split.i_hi, split.m) == (36, 52, 4)
    assert split.nonlocal_grid.n_nodes == 56
    assert split.local_grid.offset == 36
    np.testing.assert_array_equal(split.virtual_layer, [52, 53, 54, 55])
    np.testing.assert_allclose(split.overlap_weights().sum(), 0.2)
    np.testing.assert_array_equal(split.constrained(), [0, 1, 2, 3, 84])


def test_residual_of_the_exact_linear_field(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> None:
    split = OverlapSplit(grid, overlap, kernel, ConstFunction(0.0), LINEAR)

    residual = split.residual(LINEAR(grid.x))

    assert np.all(np.isnan(residual[[0, 1, 2, 3, 84]]))
    np.testing.assert_allclose(residual[4:84], 0.0, atol=1e-8)
