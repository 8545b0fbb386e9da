"""Unit tests for the pipeline runner."""

import json
from pathlib import Path

import pytest

from ltn_lab import Lab
from ltn_lab.errors import ConfigValidationError
from ltn_lab.models.reports import EnergyReport, GhostForceReport, MaximumPrincipleReport, PositiveSemidefiniteReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.report import config_hash
from ltn_lab.services.runner import Runner
from ltn_lab.settings import THREADS_VARIABLE, Settings


@pytest.fixture(name="runner")
def get_runner() -> Runner:
    return Lab(threads=0).runner


@pytest.fixture(name="config_file")
def get_config_file(tmp_path: Path, documents: dict[str, dict]) -> Path:
    document = documents["splice"]
    document["output"]["directory"] = str(tmp_path / "out")
    path = tmp_path / "splice.json"
    path.write_text(json.dumps(document))
    return path


def test_lab_reads_threads_from_the_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(THREADS_VARIABLE, "3")

    lab = Lab(progress_bar=True)

    assert lab.settings.threads == 3
    assert lab.runner.settings is lab.settings
    assert repr(lab) == "Lab(Settings(threads=3, progress_bar=True))"


def test_execute_writes_the_report_and_manifest(runner: Runner, config_file: Path) -> None:
    paths = runner.execute(config_file)

    assert [path.name for path in paths] == ["report.json", "manifest.json"]
    report = json.loads(paths[0].read_text())
    assert report["kind"] == "patch_test"
    assert report["pass"] is True
    manifest = json.loads(paths[1].read_text())
    assert manifest["config_sha256"] == config_hash(RunConfig.from_file(config_file).build())


def test_execute_with_overrides(runner: Runner, config_file: Path, tmp_path: Path) -> None:
    paths = runner.execute(config_file, kind="solve", directory=str(tmp_path / "other"), output_format="csv")

    assert [path.name for path in paths] == ["report.csv", "solution.csv", "manifest.json"]
    assert all(path.parent == tmp_path / "other" for path in paths)


def test_load_overrides_the_seed(runner: Runner, config_file: Path) -> None:
    config = runner.load(config_file, seed=11)

    assert config.seed == 11
    assert runner.load(config_file).seed == 0


def test_solve_summary(runner: Runner, splice_config: RunConfig) -> None:
    result = runner.run(splice_config, "solve")

    assert result.field is not None
    assert result.report.build()["n_nodes"] == 85
    assert result.report.build()["sup_residual"] < 1e-8


def test_pipelines_return_their_reports(runner: Runner, splice_config: RunConfig, qnl_config: RunConfig) -> None:
    assert isinstance(runner.run(splice_config, "ghost_force").report, GhostForceReport)
    energy = runner.run(splice_config, "energy")
    assert isinstance(energy.report, EnergyReport)
    assert energy.field is not None
    assert isinstance(runner.run(qnl_config, "maximum_principle").report, MaximumPrincipleReport)
    assert isinstance(runner.run(qnl_config, "positive_semidefinite").report, PositiveSemidefiniteReport)


@pytest.mark.parametrize("kind", ["sweep_robin", "compare"])
def test_pipelines_need_their_inputs(runner: Runner, overlap_config: RunConfig, kind: str) -> None:
    """Test ConfigValidationError is raised when a pipeline's diagnostic input is missing."""
    with pytest.raises(ConfigValidationError):
        runner.run(overlap_config, kind)


def test_runner_uses_its_settings() -> None:
    runner = Runner(Settings(threads=2))

    assert str(runner) == "Runner(settings=Settings(threads=2, progress_bar=False))"
