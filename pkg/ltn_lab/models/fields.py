"""Solution fields and partitioned-iteration traces."""

import logging
import math

import numpy as np
import pandas as pd
from typing_extensions import Self

from ltn_lab.errors import InconsistentIntervals
from ltn_lab.models.grid import Grid1D

_logger = logging.getLogger(__name__)


class IterationTrace:
    """Per-iteration history of a partitioned iteration.

    `residuals[k]` and `mismatches[k]` belong to iteration `k + 1`; the reduction factor of iteration
    `k + 1` is `mismatches[k] / mismatches[k - 1]` and is undefined for the first iteration.
    """

    def __init__(self) -> None:
        self._residuals: list[float] = []
        self._mismatches: list[float] = []
        self._converged = False

    def __repr__(self) -> str:
        """Class representation."""
        return f"IterationTrace(iterations={self.iterations}, converged={self._converged})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def residuals(self) -> list[float]:
        """Sup-norm residuals of the transmission condition."""
        return list(self._residuals)

    @property
    def mismatches(self) -> list[float]:
        """Sup-norm mismatch between the two fields on the overlap."""
        return list(self._mismatches)

    @property
    def iterations(self) -> int:
        """Number of recorded iterations."""
        return len(self._residuals)

    @property
    def converged(self) -> bool:
        """Whether the stopping criterion was met."""
        return self._converged

    @property
    def reduction_factors(self) -> list[float | None]:
        """Ratios of successive mismatches; `None` for the first iteration or after an exact zero."""
        factors: list[float | None] = [None]
        for previous, current in zip(self._mismatches, self._mismatches[1:]):
            factors.append(current / previous if previous > 0.0 else None)
        return factors[: self.iterations]

    @property
    def mean_reduction_factor(self) -> float | None:
        """Geometric mean of the positive reduction factors."""
        positive = [factor for factor in self.reduction_factors if factor is not None and factor > 0.0]
        if not positive:
            return None
        return math.exp(sum(math.log(factor) for factor in positive) / len(positive))

    def record(self, residual: float, mismatch: float) -> None:
        """Append one iteration.

        Raises
        ------
        ValueError
            A negative norm.
        """
        if residual < 0.0 or mismatch < 0.0:
            raise ValueError(f"norms are non-negative, found residual={residual}, mismatch={mismatch}")
        self._residuals.append(float(residual))
        self._mismatches.append(float(mismatch))

    def mark_converged(self) -> None:
        """Flag the iteration as converged."""
        self._converged = True

    def build(self) -> dict:
        """Format the IterationTrace for serialization."""
        return {
            "iterations": self.iterations,
            "converged": self._converged,
            "residuals": self.residuals,
            "mismatches": self.mismatches,
            "reduction_factors": self.reduction_factors,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per iteration: `iteration, residual, mismatch, reduction_factor`."""
        return pd.DataFrame(
            {
                "iteration": np.arange(1, self.iterations + 1),
                "residual": self._residuals,
                "mismatch": self._mismatches,
                "reduction_factor": [math.nan if f is None else f for f in self.reduction_factors],
            }
        )


class SolutionField:
    """Nodal values of a solution on a grid with the metadata of how they were obtained.

    ??? note "Arlequin and optimization-based fields"
        `blocks` holds `u1`, `u2` and `phi` for the Arlequin method. `objective` holds the optimal
        mismatch `J*` for the optimization-based method, and `trace` the iteration history of the
        partitioned method.
    """

    def __init__(
        self,
        grid: Grid1D,
        values: np.ndarray,
        method: str,
        constrained: np.ndarray | None = None,
        labels: list[str] | None = None,
        blocks: dict[str, np.ndarray] | None = None,
        objective: float | None = None,
        trace: IterationTrace | None = None,
    ) -> None:
        self._grid = grid
        self._values = np.array(values, dtype=float)
        self._values.flags.writeable = False
        self._method = method
        self._constrained = np.asarray([] if constrained is None else constrained, dtype=int)
        self._labels = labels
        self._blocks = dict(blocks or {})
        self._objective = objective
        self._trace = trace
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"SolutionField(method={self._method}, n_nodes={len(self._values)})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def grid(self) -> Grid1D:
        """The grid."""
        return self._grid

    @property
    def x(self) -> np.ndarray:
        """Node coordinates."""
        return self._grid.x

    @property
    def values(self) -> np.ndarray:
        """Read-only nodal values."""
        return self._values

    @property
    def method(self) -> str:
        """The method tag."""
        return self._method

    @property
    def constrained(self) -> np.ndarray:
        """Indices of nodes carrying imposed values."""
        return self._constrained

    @property
    def labels(self) -> list[str] | None:
        """Region label per node, when known."""
        return self._labels

    @property
    def blocks(self) -> dict[str, np.ndarray]:
        """Extra solution blocks."""
        return dict(self._blocks)

    @property
    def objective(self) -> float | None:
        """Optimal objective value, when the method minimizes one."""
        return self._objective

    @property
    def trace(self) -> IterationTrace | None:
        """Iteration history, when the method iterates."""
        return self._trace

    def with_labels(self, labels: list[str]) -> "SolutionField":
        """A copy carrying region labels."""
        return SolutionField(
            self._grid, self._values, self._method, self._constrained, labels, self._blocks, self._objective, self._trace
        )

    def validate(self) -> Self:
        """Check lengths against the grid.

        Raises
        ------
        InconsistentIntervals
        """
        if self._values.shape != (self._grid.n_nodes,):
            raise InconsistentIntervals(f"{len(self._values)} values on a grid of {self._grid.n_nodes} nodes")
        if self._labels is not None and len(self._labels) != self._grid.n_nodes:
            raise InconsistentIntervals("one label per node is required")
        return self

    def to_frame(self) -> pd.DataFrame:
        """Plot-ready columns `x, u, region`."""
        labels = self._labels if self._labels is not None else [""] * self._grid.n_nodes
        return pd.DataFrame({"x": self._grid.x, "u": self._values, "region": [str(label) for label in labels]})
