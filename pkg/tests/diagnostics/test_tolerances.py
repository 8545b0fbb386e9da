"""Unit tests for patch-test tolerances."""

from contextlib import AbstractContextManager, nullcontext

import pytest

from ltn_lab.diagnostics.tolerances import patch_tolerance
from ltn_lab.errors import InvalidDegreeError


@pytest.mark.parametrize(
    "method,degree,expected",
    [
        ("splice", 1, (1e-10, True)),
        ("splice", 3, (1e-9, True)),
        ("obm", 3, (1e-9, True)),
        ("blended", 2, (1e-10, True)),
        ("blended", 3, (5e-2, False)),
        ("partial_stress", 3, (5e-2, False)),
        ("qnl", 1, (1e-10, True)),
        ("qnl", 2, (1e-3, False)),
        ("qnl", 3, (5e-2, False)),
        ("shrinking_horizon", 1, (1e-1, False)),
        ("morphing", 1, (5e-2, False)),
        ("arlequin", 1, (1e-6, False)),
        ("arlequin", 2, (5e-2, False)),
    ],
)
def test_patch_tolerance(method: str, degree: int, expected: tuple[float, bool]) -> None:
    assert patch_tolerance(method, degree) == expected


@pytest.mark.parametrize(
    "degree,expectation",
    [(1, nullcontext()), (3, nullcontext()), (0, pytest.raises(InvalidDegreeError)), (4, pytest.raises(InvalidDegreeError))],
)
def test_patch_tolerance_error_conditions(degree: int, expectation: AbstractContextManager) -> None:
    """Test InvalidDegreeError is raised for a degree outside 1 to 3."""
    with expectation:
        patch_tolerance("splice", degree)
