"""Unit tests for Dirichlet and volume constraints."""

import numpy as np
import pytest

from ltn_lab.errors import IncompleteVolumeConstraint, InconsistentIntervals
from ltn_lab.models.grid import Grid1D, Interval
from ltn_lab.models.kernel import Kernel
from ltn_lab.models.systems import LinearSystem
from ltn_lab.operators.constraints import apply_dirichlet_constraints
from ltn_lab.operators.reference import assemble_nonlocal_operator


@pytest.fixture(name="system", scope="module")
def get_system(grid: Grid1D, kernel: Kernel) -> LinearSystem:
    rows = assemble_nonlocal_operator(grid, np.arange(4, 81), kernel)
    return LinearSystem(grid, rows.dense(), np.zeros(grid.n_nodes))


def test_volume_constraint_on_the_layer(system: LinearSystem) -> None:
    constrained = apply_dirichlet_constraints(system, Interval(-0.05, 0.0), lambda x: 1.0 + x, delta=0.05)

    np.testing.assert_array_equal(constrained.constrained, [0, 1, 2, 3])
    np.testing.assert_allclose(constrained.values, 1.0 + system.grid.x[:4])
    np.testing.assert_array_equal(constrained.matrix[:4, :4], np.eye(4))
    np.testing.assert_array_equal(constrained.matrix[4:], system.matrix[4:])


def test_constraints_accumulate_sorted(system: LinearSystem) -> None:
    right = apply_dirichlet_constraints(system, np.arange(81, 85), lambda x: 2.0 * x)
    both = apply_dirichlet_constraints(right, np.arange(0, 4), lambda x: np.zeros_like(x))

    np.testing.assert_array_equal(both.constrained, [0, 1, 2, 3, 81, 82, 83, 84])
    np.testing.assert_allclose(both.values[4:], 2.0 * system.grid.x[81:])


@pytest.mark.parametrize(
    "nodes",
    [
        Interval(-0.05, -0.0125),
        np.array([0, 1, 2, 4, 5]),
    ],
)
def test_incomplete_volume_constraint(system: LinearSystem, nodes: Interval | np.ndarray) -> None:
    """Test IncompleteVolumeConstraint is raised for a thin or broken layer."""
    with pytest.raises(IncompleteVolumeConstraint):
        apply_dirichlet_constraints(system, nodes, lambda x: x, delta=0.05)


def test_constraint_outside_the_grid(system: LinearSystem) -> None:
    """Test InconsistentIntervals is raised for nodes beyond the grid."""
    with pytest.raises(InconsistentIntervals):
        apply_dirichlet_constraints(system, np.array([84, 85]), lambda x: x)
