"""RunConfig model definition: the JSON description of one run."""

import json
import logging
import math
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path

from typing_extensions import Self

from ltn_lab.errors import ConfigValidationError, LtnLabValidationError
from ltn_lab.models.decomposition import Decomposition
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel, horizon_steps
from ltn_lab.models.method_spec import MethodSpec
from ltn_lab.registry import NamedFunction, SinFunction, make_function

_logger = logging.getLogger(__name__)

SECTIONS = ("problem", "decomposition", "method", "kernel", "solver", "diagnostic", "output", "seed")


class IterationMode(str, Enum):
    """Enumerates how the partitioned iteration decides to stop."""

    IMPLICIT = "implicit"
    EXPLICIT = "explicit"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value


class DiagnosticKind(str, Enum):
    """Enumerates the pipelines a run can execute."""

    SOLVE = "solve"
    PATCH_TEST = "patch_test"
    GHOST_FORCE = "ghost_force"
    CONVERGE = "converge"
    SWEEP_ROBIN = "sweep_robin"
    ENERGY = "energy"
    MAXIMUM_PRINCIPLE = "maximum_principle"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    COMPARE = "compare"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value


class OutputFormat(str, Enum):
    """Enumerates report formats."""

    JSON = "json"
    CSV = "csv"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value


@contextmanager
def _section(fields: str) -> Iterator[None]:
    """Prefix validation errors raised inside with the offending config fields."""
    try:
        yield
    except ConfigValidationError:
        raise
    except LtnLabValidationError as err:
        raise type(err)(f"{fields}: {err}") from err
    except (TypeError, ValueError, KeyError) as err:
        raise ConfigValidationError(f"{fields}: {err}") from err


def _robin(value: float | str) -> float:
    match value:
        case "inf" | "Infinity":
            return math.inf
        case int() | float():
            return float(value)
        case _:
            raise ValueError(f"expected a number or 'inf', found {value!r}")


class SolverParameters:
    """Parameters of the solvers; every field has a default."""

    def __init__(
        self,
        tol: float = 1e-12,
        max_iter: int = 500,
        r1: float = math.inf,
        r2: float = math.inf,
        mode: IterationMode | str = IterationMode.IMPLICIT,
        sweeps: int = 1,
        kappa0: float = 1.0,
        kappa1: float = 1.0,
    ) -> None:
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.r1 = _robin(r1)
        self.r2 = _robin(r2)
        self.mode = IterationMode(mode)
        self.sweeps = int(sweeps)
        self.kappa0 = float(kappa0)
        self.kappa1 = float(kappa1)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"SolverParameters({self.build()})"

    def validate(self) -> Self:
        """Validate iteration controls.

        Raises
        ------
        ConfigValidationError
        """
        if not self.tol > 0.0:
            raise ConfigValidationError(f"solver.tol: must be positive, found {self.tol}")
        if self.max_iter < 1:
            raise ConfigValidationError(f"solver.max_iter: must be at least 1, found {self.max_iter}")
        if self.sweeps < 1:
            raise ConfigValidationError(f"solver.sweeps: must be at least 1, found {self.sweeps}")
        return self

    def build(self) -> dict:
        """Format the SolverParameters for serialization; infinite coefficients are written as `"inf"`."""
        return {
            "tol": self.tol,
            "max_iter": self.max_iter,
            "r1": "inf" if math.isinf(self.r1) else self.r1,
            "r2": "inf" if math.isinf(self.r2) else self.r2,
            "mode": str(self.mode),
            "sweeps": self.sweeps,
            "kappa0": self.kappa0,
            "kappa1": self.kappa1,
        }


class DiagnosticSelection:
    """The pipeline to run and its parameters."""

    def __init__(
        self,
        kind: DiagnosticKind | str = DiagnosticKind.SOLVE,
        degree: int = 1,
        deltas: list[float] | None = None,
        manufactured: dict | NamedFunction | None = None,
        r_grid: list[float | str] | None = None,
        samples: int = 100,
        compare_with: dict | None = None,
        field: dict | NamedFunction | None = None,
    ) -> None:
        self.kind = DiagnosticKind(kind)
        self.degree = int(degree)
        self.deltas = [float(delta) for delta in deltas] if deltas is not None else None
        self.manufactured = make_function(manufactured) if manufactured is not None else SinFunction()
        self.r_grid = [_robin(r) for r in r_grid] if r_grid is not None else None
        self.samples = int(samples)
        self.compare_with = MethodSpec.from_dict(compare_with) if compare_with is not None else None
        self.field = make_function(field) if field is not None else None

    def __repr__(self) -> str:
        """Class representation."""
        return f"DiagnosticSelection({self.build()})"

    def build(self) -> dict:
        """Format the DiagnosticSelection for serialization."""
        values: dict = {
            "kind": str(self.kind),
            "degree": self.degree,
            "manufactured": self.manufactured.build(),
            "samples": self.samples,
        }
        if self.deltas is not None:
            values["deltas"] = list(self.deltas)
        if self.r_grid is not None:
            values["r_grid"] = ["inf" if math.isinf(r) else r for r in self.r_grid]
        if self.compare_with is not None:
            values["compare_with"] = self.compare_with.build()
        if self.field is not None:
            values["field"] = self.field.build()
        return values


class RunConfig:
    """A complete, validated run description.

    ??? note "Document layout"
        ```json
        {
          "problem": {"domain": [-0.05, 1.0], "h": 0.0125, "f": {"name": "const", "value": 0.0},
                      "g": {"name": "polynomial", "coefficients": [1.0, 1.0]}},
          "decomposition": {"mode": "sharp_interface", "interface": 0.5},
          "method": {"name": "splice"},
          "kernel": {"family": "constant", "model": "diffusion", "delta": 0.05},
          "solver": {"tol": 1e-12},
          "diagnostic": {"kind": "patch_test", "degree": 1},
          "output": {"directory": "out", "format": "json"},
          "seed": 0
        }
        ```
        The domain includes the nonlocal boundary layer. `delta / h` must be an integer.

    Examples
    --------
    ```python
    config = RunConfig.from_file("configs/splice_linear_patch.json")
    ```
    """

    def __init__(
        self,
        domain: tuple[float, float],
        h: float,
        f: NamedFunction,
        g: NamedFunction,
        decomposition: dict,
        method: MethodSpec,
        kernel: Kernel,
        solver: SolverParameters | None = None,
        diagnostic: DiagnosticSelection | None = None,
        output_directory: str = ".",
        output_format: OutputFormat | str = OutputFormat.JSON,
        seed: int = 0,
    ) -> None:
        self._domain = (float(domain[0]), float(domain[1]))
        self._h = float(h)
        self._f = f
        self._g = g
        self._decomposition_section = dict(decomposition)
        self._method = method
        self._kernel = kernel
        self._solver = solver or SolverParameters()
        self._diagnostic = diagnostic or DiagnosticSelection()
        self._output_directory = output_directory
        self._output_format = OutputFormat(output_format)
        self._seed = int(seed)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"RunConfig(method={self._method.method}, domain={self._domain}, h={self._h}, delta={self._kernel.delta})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def domain(self) -> tuple[float, float]:
        """`(x_lo, x_hi)`, boundary layer included."""
        return self._domain

    @property
    def h(self) -> float:
        """Grid spacing."""
        return self._h

    @property
    def f(self) -> NamedFunction:
        """The load."""
        return self._f

    @property
    def g(self) -> NamedFunction:
        """Dirichlet and volume-constraint data."""
        return self._g

    @property
    def grid(self) -> Grid1D:
        """The grid."""
        return self._grid

    @property
    def decomposition(self) -> Decomposition:
        """The decomposition."""
        return self._decomposition

    @property
    def method(self) -> MethodSpec:
        """The method specification."""
        return self._method

    @property
    def kernel(self) -> Kernel:
        """The kernel."""
        return self._kernel

    @property
    def solver(self) -> SolverParameters:
        """Solver parameters."""
        return self._solver

    @property
    def diagnostic(self) -> DiagnosticSelection:
        """The selected pipeline."""
        return self._diagnostic

    @property
    def output_directory(self) -> str:
        """Where artifacts are written."""
        return self._output_directory

    @property
    def output_format(self) -> OutputFormat:
        """Report format."""
        return self._output_format

    @property
    def seed(self) -> int:
        """Seed of every random generator used by the run."""
        return self._seed

    def validate(self) -> Self:
        """Validate the cross-section rules and build the grid and decomposition.

        Raises
        ------
        ConfigValidationError
        LtnLabValidationError
        """
        with _section("problem.domain, problem.h"):
            self._grid = Grid1D.from_spacing(self._domain[0], self._domain[1], self._h)
        with _section("kernel.delta, problem.h"):
            horizon_steps(self._kernel.delta, self._h)
        with _section("decomposition"):
            self._decomposition = Decomposition.from_dict(
                self._domain, {**self._decomposition_section, "delta": self._kernel.delta}
            )
        with _section("method, decomposition.mode"):
            self._method.check_mode(self._decomposition)
        horizon = self._method.horizon
        if horizon is not None and horizon.delta_max != self._kernel.delta:
            raise ConfigValidationError(
                f"method.horizon.delta_max, kernel.delta: {horizon.delta_max} differs from {self._kernel.delta}"
            )
        if self._diagnostic.kind is DiagnosticKind.COMPARE and self._diagnostic.compare_with is None:
            raise ConfigValidationError("diagnostic.compare_with: required by the compare pipeline")
        return self

    def with_delta(self, delta: float) -> "RunConfig":
        """A copy at horizon `delta` with `delta / h`, the left end of the physical domain and every interface fixed."""
        ratio = self._kernel.delta / self._h
        x_lo = self._domain[0] + self._kernel.delta - delta
        return RunConfig(
            (x_lo, self._domain[1]),
            delta / round(ratio),
            self._f,
            self._g,
            self._decomposition_section,
            self._method.with_delta(delta),
            self._kernel.with_delta(delta),
            self._solver,
            self._diagnostic,
            self._output_directory,
            self._output_format,
            self._seed,
        )

    def with_method(self, method: MethodSpec) -> "RunConfig":
        """A copy with another method on the same problem."""
        return RunConfig(
            self._domain,
            self._h,
            self._f,
            self._g,
            self._decomposition_section,
            method,
            self._kernel,
            self._solver,
            self._diagnostic,
            self._output_directory,
            self._output_format,
            self._seed,
        )

    def with_data(self, f: NamedFunction, g: NamedFunction) -> "RunConfig":
        """A copy with another load and boundary data."""
        return RunConfig(
            self._domain,
            self._h,
            f,
            g,
            self._decomposition_section,
            self._method,
            self._kernel,
            self._solver,
            self._diagnostic,
            self._output_directory,
            self._output_format,
            self._seed,
        )

    def build(self) -> dict:
        """Format the RunConfig as a canonical JSON document with every default filled in."""
        decomposition = self._decomposition.build()
        del decomposition["delta"]
        return {
            "problem": {
                "domain": list(self._domain),
                "h": self._h,
                "f": self._f.build(),
                "g": self._g.build(),
            },
            "decomposition": decomposition,
            "method": self._method.build(),
            "kernel": self._kernel.build(),
            "solver": self._solver.build(),
            "diagnostic": self._diagnostic.build(),
            "output": {"directory": self._output_directory, "format": str(self._output_format)},
            "seed": self._seed,
        }

    @classmethod
    def from_dict(cls, document: dict) -> "RunConfig":
        """Create a RunConfig from a parsed JSON document.

        Raises
        ------
        ConfigValidationError
            Missing, unknown or malformed fields; the message names them.
        """
        if not isinstance(document, dict):
            raise ConfigValidationError(f"config: expected a JSON object, found {type(document).__name__}")
        unknown = set(document) - set(SECTIONS)
        if unknown:
            raise ConfigValidationError(f"config: unknown sections {sorted(unknown)}")
        for required in ("problem", "decomposition", "method", "kernel"):
            if required not in document:
                raise ConfigValidationError(f"{required}: missing section")
        problem = document["problem"]
        with _section("problem"):
            domain = problem["domain"]
            if len(domain) != 2:
                raise ValueError(f"domain must be [x_lo, x_hi], found {domain}")
            h = float(problem["h"])
        with _section("problem.f"):
            f = make_function(problem.get("f", {"name": "const", "value": 0.0}))
        with _section("problem.g"):
            g = make_function(problem.get("g", {"name": "const", "value": 0.0}))
        with _section("method"):
            method = MethodSpec.from_dict(document["method"])
        with _section("kernel"):
            kernel = Kernel(**document["kernel"])
        with _section("solver"):
            solver = SolverParameters(**document.get("solver", {}))
        with _section("diagnostic"):
            diagnostic = DiagnosticSelection(**document.get("diagnostic", {}))
        output = document.get("output", {})
        with _section("output"):
            output_format = OutputFormat(output.get("format", OutputFormat.JSON))
            seed = int(document.get("seed", 0))
        return cls(
            (domain[0], domain[1]),
            h,
            f,
            g,
            document["decomposition"],
            method,
            kernel,
            solver,
            diagnostic,
            str(output.get("directory", ".")),
            output_format,
            seed,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Read and validate a JSON config file.

        Raises
        ------
        ConfigValidationError
            The file cannot be read or parsed.
        """
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as err:
            raise ConfigValidationError(f"config: cannot read {path}: {err.strerror}") from err
        except json.JSONDecodeError as err:
            raise ConfigValidationError(f"config: {path} is not valid JSON: {err}") from err
        _logger.debug(dict(path=str(path)))
        return cls.from_dict(document)
