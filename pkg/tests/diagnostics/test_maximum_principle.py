"""Unit tests for the sampled maximum principle."""

from pathlib import Path

import pytest

from ltn_lab.diagnostics.maximum_principle import check_maximum_principle
from ltn_lab.errors import MethodSpecError
from ltn_lab.models.method_spec import MethodSpec
from ltn_lab.models.run_config import RunConfig


@pytest.mark.parametrize("method", ["local_only", "nonlocal_only"])
def test_reference_models_are_monotone(splice_config: RunConfig, method: str) -> None:
    report = check_maximum_principle(splice_config.with_method(MethodSpec(method)), samples=25, seed=1)

    assert report.passed
    assert report.build()["samples"] == 25


def test_qnl_is_monotone() -> None:
    config = RunConfig.from_file(Path(__file__).parents[2] / "configs" / "qnl_maximum_principle.json")

    report = check_maximum_principle(config, samples=100, seed=config.seed)

    assert report.passed
    assert report.build()["samples"] == 100
    assert report.worst_violation <= 1e-10


def test_sampling_is_seeded(splice_config: RunConfig) -> None:
    first = check_maximum_principle(splice_config, samples=10, seed=5)
    second = check_maximum_principle(splice_config, samples=10, seed=5)

    assert first.worst_violation == second.worst_violation


def test_solver_driven_methods_are_rejected(overlap_config: RunConfig) -> None:
    """Test MethodSpecError is raised for methods without a single assembled operator."""
    with pytest.raises(MethodSpecError):
        check_maximum_principle(overlap_config)
