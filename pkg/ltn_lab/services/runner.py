"""Class for running the configured pipeline of a run and writing its artifacts."""

import logging
import time
from pathlib import Path

import numpy as np

from ltn_lab.diagnostics.convergence import run_convergence_study
from ltn_lab.diagnostics.energy import check_positive_semidefinite, compute_energy
from ltn_lab.diagnostics.maximum_principle import check_maximum_principle
from ltn_lab.diagnostics.patch import compute_ghost_force, run_patch_test
from ltn_lab.errors import ConfigValidationError, UnreachableError
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.reports import Report, RobinSweepReport, SolveReport
from ltn_lab.models.run_config import DiagnosticKind, OutputFormat, RunConfig
from ltn_lab.report import emit_report, write_manifest, write_solution
from ltn_lab.settings import Settings
from ltn_lab.solvers.dispatch import compare_methods, operator_residual, solve
from ltn_lab.solvers.partitioned import sweep_robin_coefficient

_logger = logging.getLogger(__name__)

REPORT_NAME = "report"
SOLUTION_NAME = "solution.csv"
MANIFEST_NAME = "manifest.json"


class RunResult:
    """The report of a pipeline and, when the pipeline solved the problem, the solution field."""

    def __init__(self, report: Report, field: SolutionField | None = None) -> None:
        self.report = report
        self.field = field

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}(report={self.report!r}, field={self.field!r})"


class Runner:
    """Class for running pipelines on run configurations."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}({self.settings!r})"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"{self.__class__.__name__}(settings={self.settings!r})"

    def load(
        self,
        path: str | Path,
        directory: str | None = None,
        output_format: OutputFormat | str | None = None,
        seed: int | None = None,
    ) -> RunConfig:
        """Read a config file and apply command-line overrides of its output section and seed.

        Raises
        ------
        ConfigValidationError
        """
        config = RunConfig.from_file(path)
        if directory is None and output_format is None and seed is None:
            return config
        document = config.build()
        if directory is not None:
            document["output"]["directory"] = directory
        if output_format is not None:
            document["output"]["format"] = str(output_format)
        if seed is not None:
            document["seed"] = seed
        return RunConfig.from_dict(document)

    def solve(self, config: RunConfig) -> RunResult:
        """Solve the problem and summarize the solve.

        ??? note "Residual"
            The reported residual is the sup-norm of `b - A u` on unconstrained rows of the method's operator.
            For the optimization-based and partitioned methods it is evaluated on the glued field.
        """
        field = solve(config)
        residual = operator_residual(config, np.asarray(field.values))
        report = SolveReport(
            str(config.method.method),
            field.grid.n_nodes,
            float(np.nanmax(np.abs(residual), initial=0.0)),
            field.objective,
            None if field.trace is None else field.trace.iterations,
        )
        return RunResult(report, field)

    def sweep_robin(self, config: RunConfig) -> RobinSweepReport:
        """Sweep the Robin coefficient over `diagnostic.r_grid`.

        Raises
        ------
        ConfigValidationError
            The run has no `r_grid`.
        """
        if not config.diagnostic.r_grid:
            raise ConfigValidationError("diagnostic.r_grid: required by the sweep_robin pipeline")
        return sweep_robin_coefficient(
            config, config.diagnostic.r_grid, self.settings.threads, self.settings.progress_bar
        )

    def run(self, config: RunConfig, kind: DiagnosticKind | str | None = None) -> RunResult:
        """Run one pipeline: the configured `diagnostic.kind`, or `kind` when given.

        Examples
        --------
        ```python
        lab = Lab()
        result = lab.runner.run(config, "patch_test")
        result.report.build()
        ```
        """
        kind = config.diagnostic.kind if kind is None else DiagnosticKind(kind)
        diagnostic = config.diagnostic
        _logger.debug(dict(kind=str(kind), method=str(config.method.method)))
        match kind:
            case DiagnosticKind.SOLVE:
                return self.solve(config)
            case DiagnosticKind.PATCH_TEST:
                return RunResult(run_patch_test(config, diagnostic.degree))
            case DiagnosticKind.GHOST_FORCE:
                return RunResult(compute_ghost_force(config))
            case DiagnosticKind.CONVERGE:
                return RunResult(
                    run_convergence_study(
                        config,
                        diagnostic.deltas,
                        diagnostic.manufactured,
                        self.settings.threads,
                        self.settings.progress_bar,
                    )
                )
            case DiagnosticKind.SWEEP_ROBIN:
                return RunResult(self.sweep_robin(config))
            case DiagnosticKind.ENERGY:
                if diagnostic.field is not None:
                    return RunResult(compute_energy(config, diagnostic.field(config.grid.x, config.h)))
                field = solve(config)
                return RunResult(compute_energy(config, np.asarray(field.values)), field)
            case DiagnosticKind.MAXIMUM_PRINCIPLE:
                return RunResult(check_maximum_principle(config, diagnostic.samples, config.seed))
            case DiagnosticKind.POSITIVE_SEMIDEFINITE:
                return RunResult(check_positive_semidefinite(config, diagnostic.samples, config.seed))
            case DiagnosticKind.COMPARE:
                if diagnostic.compare_with is None:
                    raise ConfigValidationError("diagnostic.compare_with: required by the compare pipeline")
                return RunResult(compare_methods(config, diagnostic.compare_with))
            case _:
                raise UnreachableError(f"unknown pipeline {kind}")

    def write(self, config: RunConfig, result: RunResult, wall_time: float) -> list[Path]:
        """Write the report, the solution when there is one, and the manifest to the output directory.

        Raises
        ------
        IoFailure
        """
        directory = Path(config.output_directory)
        output_format = config.output_format
        paths = [emit_report(result.report, output_format, directory / f"{REPORT_NAME}.{output_format}")]
        if result.field is not None:
            paths.append(write_solution(result.field, directory / SOLUTION_NAME))
        paths.append(write_manifest(config.build(), wall_time, directory / MANIFEST_NAME))
        _logger.info(dict(kind=result.report.kind, written=[str(path) for path in paths]))
        return paths

    def execute(
        self,
        path: str | Path,
        kind: DiagnosticKind | str | None = None,
        directory: str | None = None,
        output_format: OutputFormat | str | None = None,
        seed: int | None = None,
    ) -> list[Path]:
        """Load a config file, run its pipeline and write every artifact.

        Parameters
        ----------
        path:
            The JSON config.
        kind:
            Pipeline overriding `diagnostic.kind`.
        directory:
            Output directory overriding `output.directory`.
        output_format:
            Report format overriding `output.format`.
        seed:
            Seed overriding the config's.

        Returns
        -------
        list[Path]
            The written files.

        Raises
        ------
        LtnLabValidationError
        LtnLabSolverError
        """
        config = self.load(path, directory, output_format, seed)
        start = time.perf_counter()
        result = self.run(config, kind)
        return self.write(config, result, time.perf_counter() - start)
