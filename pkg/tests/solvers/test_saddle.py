"""Unit tests for the Arlequin KKT solve."""

import numpy as np
import pytest

from ltn_lab.models.decomposition import Decomposition, build_decomposition
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.models.systems import SaddleSystem
from ltn_lab.operators.arlequin import assemble_arlequin_saddle
from ltn_lab.registry import ConstFunction, PolynomialFunction
from ltn_lab.solvers.saddle import coupling_defect, reconstruct, solve_saddle_system

LINEAR = PolynomialFunction([1.0, 1.0])


@pytest.fixture(name="overlap", scope="module")
def get_overlap() -> Decomposition:
    return build_decomposition("overlap", (-0.05, 1.0), 0.05, overlap=(0.4, 0.6))


@pytest.fixture(name="saddle", scope="module")
def get_saddle(grid: Grid1D, kernel: Kernel, overlap: Decomposition) -> SaddleSystem:
    return assemble_arlequin_saddle(grid, overlap, kernel, f=ConstFunction(0.0), g=LINEAR)


@pytest.fixture(name="field", scope="module")
def get_field(saddle: SaddleSystem) -> SolutionField:
    return solve_saddle_system(saddle)


def test_blocks_and_constraints(saddle: SaddleSystem, field: SolutionField) -> None:
    assert set(field.blocks) == {"u1", "u2", "phi"}
    assert field.blocks["phi"].shape == (saddle.n_multipliers,)
    np.testing.assert_array_equal(field.constrained, [0, 1, 2, 3, 84])
    np.testing.assert_allclose(field.values[field.constrained], LINEAR(saddle.grid.x[[0, 1, 2, 3, 84]]))


def test_fields_agree_on_the_overlap(saddle: SaddleSystem, field: SolutionField) -> None:
    assert coupling_defect(saddle, field) < 1e-9


def test_linear_data_gives_the_linear_field(saddle: SaddleSystem, field: SolutionField) -> None:
    assert np.max(np.abs(field.values - LINEAR(saddle.grid.x))) <= 1e-6
    np.testing.assert_allclose(field.blocks["u1"], LINEAR(saddle.grid.x[saddle.dofs1]), atol=1e-6)
    np.testing.assert_allclose(field.blocks["u2"], LINEAR(saddle.grid.x[saddle.dofs2]), atol=1e-6)


def test_reconstruct_glues_by_the_local_weight(saddle: SaddleSystem) -> None:
    u1 = np.ones(len(saddle.dofs1))
    u2 = np.zeros(len(saddle.dofs2))

    u = reconstruct(saddle, u1, u2)

    np.testing.assert_allclose(u[:36], 0.0, atol=1e-12)
    np.testing.assert_allclose(u[53:], 1.0, atol=1e-12)
    np.testing.assert_allclose(u[36:53], saddle.alpha1[36:53])
