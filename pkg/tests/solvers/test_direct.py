"""Unit tests for direct solves of assembled systems."""

import numpy as np
import pytest

from ltn_lab.errors import SingularSystem
from ltn_lab.models.decomposition import build_decomposition
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.models.method_spec import MethodSpec
from ltn_lab.models.systems import LinearSystem
from ltn_lab.operators.coupled import assemble_problem
from ltn_lab.registry import PolynomialFunction, load_for
from ltn_lab.solvers.direct import ReducedSolver, check_residual, solve_linear_system

QUADRATIC = PolynomialFunction([1.0, -0.5, 2.0])


@pytest.mark.parametrize("method", ["local_only", "nonlocal_only", "splice"])
def test_quadratic_solutions_are_reproduced(grid: Grid1D, kernel: Kernel, method: str) -> None:
    decomposition = build_decomposition("sharp_interface", (-0.05, 1.0), 0.05, interface=0.5)
    system = assemble_problem(grid, decomposition, MethodSpec(method), kernel, load_for(QUADRATIC), QUADRATIC)

    field = solve_linear_system(system)

    np.testing.assert_allclose(field.values, QUADRATIC(grid.x), atol=1e-9)
    np.testing.assert_array_equal(field.values[system.constrained], system.values)
    assert field.method == method


def test_dense_path_on_a_small_system() -> None:
    grid = Grid1D(0.0, 1.0, 5)
    matrix = np.zeros((5, 5))
    matrix[0, 0] = matrix[4, 4] = 1.0
    for i in range(1, 4):
        matrix[i, i - 1 : i + 2] = [1.0, -2.0, 1.0]
    system = LinearSystem(grid, matrix, np.array([0.0, 0.0, 0.0, 0.0, 1.0]), np.array([0, 4]), np.array([0.0, 1.0]))

    field = solve_linear_system(system)

    np.testing.assert_allclose(field.values, grid.x, atol=1e-12)


def test_singular_system(grid: Grid1D) -> None:
    """Test SingularSystem is raised for a singular free block."""
    system = LinearSystem(grid, np.zeros((85, 85)), np.ones(85))

    with pytest.raises(SingularSystem):
        solve_linear_system(system)
    with pytest.raises(SingularSystem):
        ReducedSolver(system)


def test_check_residual_rejects_non_finite_values() -> None:
    """Test SingularSystem is raised for non-finite values."""
    with pytest.raises(SingularSystem):
        check_residual(np.eye(2), np.ones(2), np.array([1.0, np.nan]))


def test_reduced_solver_reuses_its_factorization(grid: Grid1D, kernel: Kernel) -> None:
    decomposition = build_decomposition("sharp_interface", (-0.05, 1.0), 0.05, interface=0.5)
    system = assemble_problem(grid, decomposition, MethodSpec("splice"), kernel, load_for(QUADRATIC), QUADRATIC)
    solver = ReducedSolver(system)

    single = solver.solve()
    values = np.stack([system.values, 2.0 * system.values], axis=1)
    rhs = np.stack([system.rhs, 2.0 * system.rhs], axis=1)
    double = solver.solve(rhs, values)

    np.testing.assert_allclose(single, solve_linear_system(system).values, atol=1e-10)
    np.testing.assert_allclose(double[:, 1], 2.0 * single, atol=1e-9)
