"""Unit tests for the horizon convergence study."""

import math
from contextlib import AbstractContextManager, nullcontext
from pathlib import Path

import numpy as np
import pytest

from ltn_lab.diagnostics.convergence import check_deltas, h1_error, l2_error, run_convergence_study
from ltn_lab.errors import InvalidConvergenceStudy
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.run_config import RunConfig
from ltn_lab.registry import PolynomialFunction, SinFunction

DELTAS = [0.1, 0.05, 0.025]


@pytest.mark.parametrize(
    "deltas,expectation",
    [
        ([0.1, 0.05, 0.025], nullcontext()),
        ([0.1, 0.05], pytest.raises(InvalidConvergenceStudy)),
        ([0.1, 0.1, 0.05], pytest.raises(InvalidConvergenceStudy)),
        ([0.05, 0.1, 0.025], pytest.raises(InvalidConvergenceStudy)),
        ([0.1, 0.05, 0.0], pytest.raises(InvalidConvergenceStudy)),
    ],
)
def test_check_deltas_error_conditions(deltas: list[float], expectation: AbstractContextManager) -> None:
    """Test InvalidConvergenceStudy is raised for short or non-decreasing horizon lists."""
    with expectation:
        check_deltas(deltas)


def test_error_norms_of_a_shifted_field() -> None:
    grid = Grid1D(0.0, 1.0, 11)
    reference = PolynomialFunction([0.0, 2.0])
    field = SolutionField(grid, 2.0 * grid.x + 0.5, "local_only", np.array([0, 10]))

    assert l2_error(field, reference) == pytest.approx(0.5)
    assert h1_error(field, reference) == pytest.approx(0.0, abs=1e-12)


def test_splice_converges_to_the_local_solution(splice_config: RunConfig) -> None:
    report = run_convergence_study(splice_config, DELTAS, manufactured=SinFunction())

    assert report.deltas == DELTAS
    assert all(b < a for a, b in zip(report.l2_errors, report.l2_errors[1:]))
    assert report.l2_slope > 1.5
    assert report.h1_slope > 0.7
    assert len(report.to_frame()) == 3


def test_qnl_converges_at_least_linearly() -> None:
    config = RunConfig.from_file(Path(__file__).parents[2] / "configs" / "qnl_converge.json")

    report = run_convergence_study(config)

    assert all(b < a for a, b in zip(report.l2_errors, report.l2_errors[1:]))
    assert report.l2_slope >= 0.8
    # the interface defect is a fixed dipole of size delta^2, so the error is second order
    assert report.l2_slope == pytest.approx(2.0, abs=0.2)


def test_study_is_the_same_on_threads(splice_config: RunConfig) -> None:
    serial = run_convergence_study(splice_config, DELTAS, manufactured=SinFunction())
    threaded = run_convergence_study(splice_config, DELTAS, manufactured=SinFunction(), threads=3)

    np.testing.assert_allclose(threaded.l2_errors, serial.l2_errors, rtol=1e-12)
    assert math.isclose(threaded.h1_slope, serial.h1_slope, rel_tol=1e-9)
