"""Unit tests for SolutionField and IterationTrace."""

import math

import numpy as np
import pytest

from ltn_lab.errors import InconsistentIntervals
from ltn_lab.models.fields import IterationTrace, SolutionField
from ltn_lab.models.grid import Grid1D


def test_trace_reduction_factors() -> None:
    trace = IterationTrace()
    for mismatch in (1.0, 0.5, 0.125):
        trace.record(mismatch / 10.0, mismatch)
    trace.mark_converged()

    assert trace.iterations == 3
    assert trace.converged
    assert trace.reduction_factors == [None, 0.5, 0.25]
    assert trace.mean_reduction_factor == pytest.approx(math.sqrt(0.125))
    assert trace.build()["reduction_factors"] == [None, 0.5, 0.25]


def test_trace_after_an_exact_zero() -> None:
    trace = IterationTrace()
    trace.record(0.0, 0.0)
    trace.record(0.0, 0.0)

    assert trace.reduction_factors == [None, None]
    assert trace.mean_reduction_factor is None


def test_trace_rejects_negative_norms() -> None:
    """Test ValueError is raised for a negative norm."""
    with pytest.raises(ValueError):
        IterationTrace().record(-1.0, 0.0)


def test_trace_frame() -> None:
    trace = IterationTrace()
    trace.record(1.0, 2.0)
    trace.record(0.5, 1.0)

    frame = trace.to_frame()

    assert list(frame.columns) == ["iteration", "residual", "mismatch", "reduction_factor"]
    assert frame["iteration"].tolist() == [1, 2]
    assert math.isnan(frame["reduction_factor"][0])
    assert frame["reduction_factor"][1] == 0.5


def test_solution_field_frame() -> None:
    grid = Grid1D(0.0, 1.0, 3)
    field = SolutionField(grid, np.array([0.0, 0.5, 1.0]), "local_only").with_labels(["local"] * 3)

    frame = field.to_frame()

    assert list(frame.columns) == ["x", "u", "region"]
    assert frame["region"].tolist() == ["local"] * 3
    with pytest.raises(ValueError):
        field.values[0] = 1.0


@pytest.mark.parametrize(
    "values,labels",
    [
        (np.zeros(4), None),
        (np.zeros(3), ["local"] * 2),
    ],
)
def test_solution_field_error_conditions(values: np.ndarray, labels: list[str] | None) -> None:
    """Test InconsistentIntervals is raised when values or labels do not fit the grid."""
    with pytest.raises(InconsistentIntervals):
        SolutionField(Grid1D(0.0, 1.0, 3), values, "local_only", labels=labels)
