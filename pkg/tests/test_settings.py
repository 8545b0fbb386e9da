"""Unit tests for execution settings."""

from contextlib import AbstractContextManager, nullcontext

import pytest

from ltn_lab.errors import ConfigValidationError
from ltn_lab.settings import THREADS_VARIABLE, Settings


@pytest.mark.parametrize(
    "raw,threads,expectation",
    [
        ("", 0, nullcontext()),
        ("4", 4, nullcontext()),
        (" 2 ", 2, nullcontext()),
        ("0", 0, nullcontext()),
        ("-1", None, pytest.raises(ConfigValidationError)),
        ("many", None, pytest.raises(ConfigValidationError)),
    ],
)
def test_threads_from_environment(
    monkeypatch: pytest.MonkeyPatch, raw: str, threads: int | None, expectation: AbstractContextManager
) -> None:
    """Test ConfigValidationError is raised for a thread count that is not a non-negative integer."""
    monkeypatch.setenv(THREADS_VARIABLE, raw)

    with expectation:
        settings = Settings.from_env()
        assert settings.threads == threads


def test_unset_variable_runs_serially(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(THREADS_VARIABLE, raising=False)

    settings = Settings.from_env(progress_bar=True)

    assert settings.threads == 0
    assert settings.progress_bar
    assert str(settings) == "Settings(threads=0, progress_bar=True)"
