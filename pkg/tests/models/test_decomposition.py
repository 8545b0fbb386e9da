"""Unit tests for Decomposition."""

from collections import Counter
from contextlib import AbstractContextManager, nullcontext

import pytest

from ltn_lab.errors import ConfigValidationError, InconsistentIntervals, OverlapTooSmall
from ltn_lab.models.decomposition import Decomposition, Region, build_decomposition
from ltn_lab.models.grid import Grid1D

DOMAIN = (-0.05, 1.0)


@pytest.mark.parametrize(
    "mode,parameters,expectation",
    [
        ("overlap", {"overlap": (0.4, 0.6)}, nullcontext()),
        ("overlap", {"overlap": (0.4, 0.42)}, pytest.raises(OverlapTooSmall)),
        ("overlap", {"overlap": (0.6, 0.4)}, pytest.raises(InconsistentIntervals)),
        ("overlap", {"overlap": (0.8, 0.98)}, pytest.raises(InconsistentIntervals)),
        ("overlap", {}, pytest.raises(InconsistentIntervals)),
        ("blended_transition", {"blend": (0.4, 0.6)}, nullcontext()),
        ("blended_transition", {"blend": (0.0, 0.6)}, pytest.raises(InconsistentIntervals)),
        ("blended_transition", {"interface": 0.5}, nullcontext()),
        ("blended_transition", {}, pytest.raises(InconsistentIntervals)),
        ("sharp_interface", {"interface": 0.5}, nullcontext()),
        ("sharp_interface", {"interface": -0.01}, pytest.raises(InconsistentIntervals)),
        ("variable_horizon", {"interface": 0.5}, nullcontext()),
        ("variable_horizon", {"interface": 0.5, "transition_width": 0.6}, pytest.raises(InconsistentIntervals)),
    ],
)
def test_build_decomposition_error_conditions(mode: str, parameters: dict, expectation: AbstractContextManager) -> None:
    """Test invalid geometries are rejected."""
    with expectation:
        build_decomposition(mode, DOMAIN, 0.05, **parameters)


def test_sharp_interface_labels(grid: Grid1D) -> None:
    decomposition = build_decomposition("sharp_interface", DOMAIN, 0.05, interface=0.5)

    labels = decomposition.labels(grid)

    assert labels[:4] == [Region.BOUNDARY_LAYER] * 4
    assert labels[4] is Region.NONLOCAL
    assert labels[43] is Region.NONLOCAL
    assert labels[44] is Region.LOCAL
    assert Counter(labels) == {Region.BOUNDARY_LAYER: 4, Region.NONLOCAL: 40, Region.LOCAL: 41}


def test_overlap_labels_are_half_open(grid: Grid1D) -> None:
    decomposition = build_decomposition("overlap", DOMAIN, 0.05, overlap=(0.4, 0.6))

    labels = decomposition.labels(grid)

    assert labels[36] is Region.OVERLAP
    assert labels[51] is Region.OVERLAP
    assert labels[52] is Region.LOCAL
    assert decomposition.indices(grid, "omega_v").tolist() == [52, 53, 54, 55]
    assert decomposition.indices(grid, "gamma_v").tolist() == [36]


def test_blended_transition_labels(grid: Grid1D) -> None:
    decomposition = build_decomposition("blended_transition", DOMAIN, 0.05, blend=(0.4, 0.6))

    counts = Counter(decomposition.labels(grid))

    assert counts[Region.TRANSITION] == 24
    assert decomposition.interval("omega_t").lo == pytest.approx(0.35)
    assert decomposition.interval("omega_t").hi == pytest.approx(0.65)


def test_qnl_transition_has_width_delta() -> None:
    decomposition = build_decomposition("blended_transition", DOMAIN, 0.05, interface=0.5)

    assert decomposition.interval("omega_t").width == pytest.approx(0.05)
    assert decomposition.interval("gamma").lo == 0.5


def test_missing_interval() -> None:
    """Test InconsistentIntervals is raised for an interval the geometry does not define."""
    decomposition = build_decomposition("sharp_interface", DOMAIN, 0.05, interface=0.5)

    assert not decomposition.has("omega_o")
    with pytest.raises(InconsistentIntervals):
        decomposition.interval("omega_o")


@pytest.mark.parametrize(
    "values,expectation",
    [
        ({"mode": "overlap", "delta": 0.05, "overlap": [0.4, 0.6]}, nullcontext()),
        ({"mode": "bridging", "delta": 0.05}, pytest.raises(ConfigValidationError)),
        ({"mode": "overlap", "overlap": [0.4, 0.6]}, pytest.raises(ConfigValidationError)),
        ({"mode": "overlap", "delta": 0.05, "overlap": [0.4]}, pytest.raises(ConfigValidationError)),
        ({"mode": "overlap", "delta": 0.05, "overlap": [0.4, 0.6], "width": 1}, pytest.raises(ConfigValidationError)),
    ],
)
def test_decomposition_from_dict_error_conditions(values: dict, expectation: AbstractContextManager) -> None:
    """Test ConfigValidationError is raised for malformed documents."""
    with expectation:
        Decomposition.from_dict(DOMAIN, values)


def test_decomposition_round_trips_through_build() -> None:
    decomposition = build_decomposition("variable_horizon", DOMAIN, 0.05, interface=0.5, transition_width=0.1)

    assert Decomposition.from_dict(DOMAIN, decomposition.build()) == decomposition
