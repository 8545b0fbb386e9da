"""Diagnostic report models with JSON (`build`) and tabular (`to_frame`) forms."""

import logging
import math
from abc import ABC, abstractmethod

import numpy as np
import pandas as pd

_logger = logging.getLogger(__name__)


class Report(ABC):
    """Base of every diagnostic report."""

    kind: str

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}({self.summary()})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    def summary(self) -> str:
        """One-line summary used for logging."""
        return ", ".join(f"{key}={value}" for key, value in self.build().items() if not isinstance(value, list))

    @abstractmethod
    def build(self) -> dict:
        """Format the report for JSON serialization."""

    @abstractmethod
    def to_frame(self) -> pd.DataFrame:
        """Format the report as a table."""


class SolveReport(Report):
    """Summary of one coupled solve."""

    kind = "solve"

    def __init__(
        self,
        method: str,
        n_nodes: int,
        sup_residual: float,
        objective: float | None = None,
        iterations: int | None = None,
    ) -> None:
        self.method = method
        self.n_nodes = n_nodes
        self.sup_residual = sup_residual
        self.objective = objective
        self.iterations = iterations

    def build(self) -> dict:
        """Format the SolveReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "n_nodes": self.n_nodes,
            "sup_residual": self.sup_residual,
            "objective": self.objective,
            "iterations": self.iterations,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row: `method, n_nodes, sup_residual, objective, iterations`."""
        row = self.build()
        del row["kind"]
        return pd.DataFrame([row])


class PatchTestReport(Report):
    """Outcome of a polynomial patch test.

    `passed` holds exactly when `sup_error <= tolerance`.
    """

    kind = "patch_test"

    def __init__(
        self,
        method: str,
        degree: int,
        sup_error: float,
        sup_residual: float,
        tolerance: float,
        strict: bool = True,
    ) -> None:
        self.method = method
        self.degree = degree
        self.sup_error = sup_error
        self.sup_residual = sup_residual
        self.tolerance = tolerance
        self.strict = strict

    @property
    def passed(self) -> bool:
        """Whether the solution error is within the tolerance."""
        return self.sup_error <= self.tolerance

    def build(self) -> dict:
        """Format the PatchTestReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "degree": self.degree,
            "sup_error": self.sup_error,
            "sup_residual": self.sup_residual,
            "tolerance": self.tolerance,
            "strict": self.strict,
            "pass": self.passed,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row: `method, degree, sup_error, sup_residual, pass`."""
        return pd.DataFrame(
            [
                {
                    "method": self.method,
                    "degree": self.degree,
                    "sup_error": self.sup_error,
                    "sup_residual": self.sup_residual,
                    "pass": self.passed,
                }
            ]
        )


class GhostForceReport(Report):
    """Residual of a coupled operator applied to a linear field, with its sup-norm and location."""

    kind = "ghost_force"

    def __init__(self, method: str, x: np.ndarray, ghost_force: np.ndarray) -> None:
        self.method = method
        self.x = np.asarray(x, dtype=float)
        self.ghost_force = np.asarray(ghost_force, dtype=float)
        magnitude = np.where(np.isnan(self.ghost_force), -np.inf, np.abs(self.ghost_force))
        self.argmax = int(np.argmax(magnitude))
        self.sup_norm = float(magnitude[self.argmax]) if np.isfinite(magnitude[self.argmax]) else 0.0

    @property
    def location(self) -> float:
        """Coordinate of the largest ghost force."""
        return float(self.x[self.argmax])

    def build(self) -> dict:
        """Format the GhostForceReport for serialization; constrained nodes carry `null`."""
        return {
            "kind": self.kind,
            "method": self.method,
            "sup_norm": self.sup_norm,
            "location": self.location,
            "x": self.x.tolist(),
            "ghost_force": [None if math.isnan(value) else value for value in self.ghost_force.tolist()],
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per node: `x, ghost_force`."""
        return pd.DataFrame({"x": self.x, "ghost_force": self.ghost_force})


class ConvergenceReport(Report):
    """Errors against a manufactured local solution over a decreasing list of horizons."""

    kind = "convergence"

    def __init__(
        self,
        method: str,
        deltas: list[float],
        l2_errors: list[float],
        h1_errors: list[float],
    ) -> None:
        self.method = method
        self.deltas = [float(delta) for delta in deltas]
        self.l2_errors = [float(error) for error in l2_errors]
        self.h1_errors = [float(error) for error in h1_errors]
        self.l2_slope = fit_slope(self.deltas, self.l2_errors)
        self.h1_slope = fit_slope(self.deltas, self.h1_errors)

    def build(self) -> dict:
        """Format the ConvergenceReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "rows": [
                {"delta": delta, "l2_error": l2, "h1_error": h1}
                for delta, l2, h1 in zip(self.deltas, self.l2_errors, self.h1_errors)
            ],
            "slopes": {"l2_error": self.l2_slope, "h1_error": self.h1_slope},
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per horizon: `delta, l2_error, h1_error`."""
        return pd.DataFrame({"delta": self.deltas, "l2_error": self.l2_errors, "h1_error": self.h1_errors})


def fit_slope(deltas: list[float], errors: list[float]) -> float:
    """Least-squares slope of `log(error)` against `log(delta)`; NaN if any error is not positive."""
    errors_array = np.asarray(errors, dtype=float)
    if np.any(errors_array <= 0.0) or len(errors_array) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(np.asarray(deltas, dtype=float)), np.log(errors_array), 1)
    return float(slope)


class EnergyReport(Report):
    """Discrete nonlocal, local and coupled energies of one field."""

    kind = "energy"

    def __init__(
        self,
        method: str,
        nonlocal_energy: float,
        local_energy: float,
        coupled_energy: float | None = None,
    ) -> None:
        self.method = method
        self.nonlocal_energy = nonlocal_energy
        self.local_energy = local_energy
        self.coupled_energy = coupled_energy

    def build(self) -> dict:
        """Format the EnergyReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "nonlocal_energy": self.nonlocal_energy,
            "local_energy": self.local_energy,
            "coupled_energy": self.coupled_energy,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row: `method, nonlocal_energy, local_energy, coupled_energy`."""
        row = self.build()
        del row["kind"]
        return pd.DataFrame([row])


class MaximumPrincipleReport(Report):
    """Worst violation of the discrete weak maximum principle over sampled boundary data.

    A violation is positive when an interior value leaves `[min g, max g]`.
    """

    kind = "maximum_principle"

    def __init__(self, method: str, samples: int, seed: int, worst_violation: float, tolerance: float = 1e-10) -> None:
        self.method = method
        self.samples = samples
        self.seed = seed
        self.worst_violation = worst_violation
        self.tolerance = tolerance

    @property
    def passed(self) -> bool:
        """Whether every sample stayed within its bounds."""
        return self.worst_violation <= self.tolerance

    def build(self) -> dict:
        """Format the MaximumPrincipleReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
            "worst_violation": self.worst_violation,
            "pass": self.passed,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row: `method, samples, seed, worst_violation, pass`."""
        row = self.build()
        del row["kind"]
        return pd.DataFrame([row])


class PositiveSemidefiniteReport(Report):
    """Smallest sampled quadratic form `u^T K u` and the symmetry defect of `K`."""

    kind = "positive_semidefinite"

    def __init__(self, method: str, samples: int, seed: int, min_quadratic_form: float, asymmetry: float) -> None:
        self.method = method
        self.samples = samples
        self.seed = seed
        self.min_quadratic_form = min_quadratic_form
        self.asymmetry = asymmetry

    @property
    def passed(self) -> bool:
        """Whether `K` is exactly symmetric and every sample gave a non-negative form."""
        return self.asymmetry == 0.0 and self.min_quadratic_form >= 0.0

    def build(self) -> dict:
        """Format the PositiveSemidefiniteReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
            "min_quadratic_form": self.min_quadratic_form,
            "asymmetry": self.asymmetry,
            "pass": self.passed,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row with the report fields."""
        row = self.build()
        del row["kind"]
        return pd.DataFrame([row])


class RobinSweepReport(Report):
    """Iteration counts and mean reduction factors of the partitioned iteration over Robin coefficients."""

    kind = "sweep_robin"

    def __init__(
        self,
        r_values: list[float],
        iterations: list[int],
        mean_reduction_factors: list[float | None],
        converged: list[bool],
    ) -> None:
        self.r_values = [float(r) for r in r_values]
        self.iterations = list(iterations)
        self.mean_reduction_factors = list(mean_reduction_factors)
        self.converged = list(converged)

    @property
    def r_star(self) -> float | None:
        """The coefficient with the fewest iterations among converged rows; ties go to the first."""
        candidates = [(n, i) for i, (n, ok) in enumerate(zip(self.iterations, self.converged)) if ok]
        if not candidates:
            return None
        return self.r_values[min(candidates)[1]]

    def build(self) -> dict:
        """Format the RobinSweepReport for serialization."""
        return {
            "kind": self.kind,
            "rows": [
                {"r": r, "iterations": n, "mean_reduction_factor": factor, "converged": ok}
                for r, n, factor, ok in zip(self.r_values, self.iterations, self.mean_reduction_factors, self.converged)
            ],
            "r_star": self.r_star,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per coefficient: `r, iterations, mean_reduction_factor, converged`."""
        return pd.DataFrame(
            {
                "r": self.r_values,
                "iterations": self.iterations,
                "mean_reduction_factor": [math.nan if f is None else f for f in self.mean_reduction_factors],
                "converged": self.converged,
            }
        )


class CompareReport(Report):
    """Sup-norm difference between two methods' solutions away from the overlap."""

    kind = "compare"

    def __init__(self, method: str, other: str, sup_difference: float, nodes_compared: int) -> None:
        self.method = method
        self.other = other
        self.sup_difference = sup_difference
        self.nodes_compared = nodes_compared

    def build(self) -> dict:
        """Format the CompareReport for serialization."""
        return {
            "kind": self.kind,
            "method": self.method,
            "other": self.other,
            "sup_difference": self.sup_difference,
            "nodes_compared": self.nodes_compared,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row with the report fields."""
        row = self.build()
        del row["kind"]
        return pd.DataFrame([row])
