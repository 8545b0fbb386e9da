"""Unit tests for routing a run configuration to its solver."""

import numpy as np
import pytest

from ltn_lab.models.method_spec import MethodSpec
from ltn_lab.models.run_config import RunConfig
from ltn_lab.registry import ConstFunction, PolynomialFunction, load_for, patch_polynomial
from ltn_lab.solvers.dispatch import compare_methods, operator_residual, solve

LINEAR = PolynomialFunction([1.0, 1.0])


def test_solve_labels_every_node(splice_config: RunConfig) -> None:
    field = solve(splice_config)

    assert field.method == "splice"
    assert field.labels is not None
    assert len(field.labels) == 85
    assert field.labels[:4] == ["boundary_layer"] * 4
    assert field.labels[-1] == "local"
    np.testing.assert_allclose(field.values, LINEAR(field.x), atol=1e-9)


@pytest.mark.parametrize("method", ["obm", "partitioned", "arlequin"])
def test_solve_routes_overlap_methods(overlap_config: RunConfig, method: str) -> None:
    field = solve(overlap_config.with_method(MethodSpec(method)))

    assert field.method == method
    assert field.labels is not None
    assert field.labels.count("overlap") == 16
    assert np.all(np.isfinite(field.values))


def test_residual_of_a_solved_field(splice_config: RunConfig) -> None:
    field = solve(splice_config)

    residual = operator_residual(splice_config, field.values)

    assert np.all(np.isnan(residual[[0, 1, 2, 3, 84]]))
    np.testing.assert_allclose(residual[4:84], 0.0, atol=1e-8)


@pytest.mark.parametrize("method", ["obm", "partitioned"])
def test_residual_on_the_glued_operator(overlap_config: RunConfig, method: str) -> None:
    config = overlap_config.with_method(MethodSpec(method))
    u = LINEAR(config.grid.x)

    residual = operator_residual(config, u, f=ConstFunction(0.0))

    assert np.all(np.isnan(residual[[0, 1, 2, 3, 84]]))
    np.testing.assert_allclose(residual[4:84], 0.0, atol=1e-8)


def test_arlequin_residual_masks_its_constraints(overlap_config: RunConfig) -> None:
    config = overlap_config.with_method(MethodSpec("arlequin"))

    residual = operator_residual(config, np.zeros(85))

    assert residual.shape == (85,)
    assert np.all(np.isnan(residual[[0, 1, 2, 3, 84]]))
    assert np.all(np.isfinite(residual[4:84]))


def test_compare_a_method_with_itself(overlap_config: RunConfig) -> None:
    report = compare_methods(overlap_config, MethodSpec("obm"))

    assert report.sup_difference == 0.0
    assert report.nodes_compared == 69
    assert (report.method, report.other) == ("obm", "obm")


@pytest.mark.parametrize(
    "u",
    [patch_polynomial(3), PolynomialFunction([0.5, -1.0, 2.0]), PolynomialFunction([1.0, 1.0])],
)
def test_overlap_methods_agree_on_consistent_data(overlap_config: RunConfig, u: PolynomialFunction) -> None:
    config = overlap_config.with_data(load_for(u, overlap_config.kernel.local_coefficient), u)

    report = compare_methods(config.with_method(MethodSpec("partitioned")), MethodSpec("obm"))

    assert report.sup_difference <= 1e-6
