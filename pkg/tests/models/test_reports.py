"""Unit tests for diagnostic report models."""

import math

import numpy as np
import pytest

from ltn_lab.models.reports import (
    ConvergenceReport,
    GhostForceReport,
    MaximumPrincipleReport,
    PatchTestReport,
    PositiveSemidefiniteReport,
    RobinSweepReport,
    fit_slope,
)


@pytest.mark.parametrize(
    "sup_error,tolerance,passed",
    [
        (1e-12, 1e-10, True),
        (1e-10, 1e-10, True),
        (2e-10, 1e-10, False),
    ],
)
def test_patch_test_pass_flag(sup_error: float, tolerance: float, passed: bool) -> None:
    report = PatchTestReport("splice", 1, sup_error, 0.0, tolerance)

    assert report.passed is passed
    assert report.build()["pass"] is passed


def test_ghost_force_skips_constrained_nodes() -> None:
    report = GhostForceReport("qnl", np.array([0.0, 0.1, 0.2, 0.3]), np.array([np.nan, 0.2, -0.7, np.nan]))

    assert report.sup_norm == pytest.approx(0.7)
    assert report.location == pytest.approx(0.2)
    assert report.build()["ghost_force"] == [None, 0.2, -0.7, None]


def test_ghost_force_all_constrained() -> None:
    report = GhostForceReport("qnl", np.array([0.0, 0.1]), np.array([np.nan, np.nan]))

    assert report.sup_norm == 0.0


@pytest.mark.parametrize(
    "errors,expected",
    [
        ([0.4, 0.1, 0.025], 2.0),
        ([0.2, 0.1, 0.05], 1.0),
    ],
)
def test_fit_slope(errors: list[float], expected: float) -> None:
    assert fit_slope([0.4, 0.2, 0.1], errors) == pytest.approx(expected)


def test_fit_slope_with_a_zero_error() -> None:
    assert math.isnan(fit_slope([0.4, 0.2, 0.1], [0.1, 0.0, 0.01]))


def test_convergence_report_build() -> None:
    report = ConvergenceReport("qnl", [0.4, 0.2, 0.1], [0.4, 0.1, 0.025], [0.2, 0.1, 0.05])

    document = report.build()

    assert document["slopes"]["l2_error"] == pytest.approx(2.0)
    assert document["slopes"]["h1_error"] == pytest.approx(1.0)
    assert document["rows"][0] == {"delta": 0.4, "l2_error": 0.4, "h1_error": 0.2}
    assert report.to_frame().shape == (3, 3)


def test_robin_sweep_picks_the_fewest_converged_iterations() -> None:
    report = RobinSweepReport([1.0, 10.0, 100.0, math.inf], [40, 12, 12, 3], [0.8, 0.3, 0.3, None], [True, True, True, False])

    assert report.r_star == 10.0
    assert report.build()["rows"][3]["converged"] is False


def test_robin_sweep_without_convergence() -> None:
    assert RobinSweepReport([1.0], [500], [0.99], [False]).r_star is None


def test_maximum_principle_and_semidefinite_flags() -> None:
    assert MaximumPrincipleReport("qnl", 100, 7, -0.2).passed
    assert not MaximumPrincipleReport("qnl", 100, 7, 1e-3).passed
    assert PositiveSemidefiniteReport("splice", 10, 0, 0.5, 0.0).passed
    assert not PositiveSemidefiniteReport("splice", 10, 0, 0.5, 1e-16).passed
