"""The nonlocal and local subproblems of an overlapping decomposition."""

import logging
from collections.abc import Callable

import numpy as np

from ltn_lab.errors import ModeMismatch
from ltn_lab.models.decomposition import Decomposition, DecompositionMode
from ltn_lab.models.grid import Grid1D, SubGrid
from ltn_lab.models.kernel import Kernel, horizon_steps
from ltn_lab.models.systems import LinearSystem, OperatorRows
from ltn_lab.operators.constraints import apply_dirichlet_constraints
from ltn_lab.operators.reference import assemble_local_operator, assemble_nonlocal_operator

_logger = logging.getLogger(__name__)


def _zero(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x)


class OverlapSplit:
    """Split of a grid into a nonlocal subproblem on `[x_lo, o_hi + delta)` and a local one on `[o_lo, x_hi]`.

    The nonlocal subproblem is constrained on `omega_p` by the data and on the virtual layer `omega_v`
    by the transmission condition. The local subproblem is constrained at `x_hi` by the data and at the
    virtual boundary `gamma_v = o_lo` by the transmission condition.
    """

    def __init__(
        self,
        grid: Grid1D,
        decomposition: Decomposition,
        kernel: Kernel,
        f: Callable[..., np.ndarray],
        g: Callable[[np.ndarray], np.ndarray],
    ) -> None:
        if decomposition.mode is not DecompositionMode.OVERLAP:
            raise ModeMismatch(f"an overlap decomposition is required, found {decomposition.mode}")
        self._grid = grid
        self._decomposition = decomposition
        self._kernel = kernel
        self._g = g
        self._m = horizon_steps(kernel.delta, grid.h)
        overlap = decomposition.interval("omega_o")
        self._i_lo, self._i_hi = grid.index_of(overlap.lo), grid.index_of(overlap.hi)
        self._nonlocal_grid = grid.subgrid(0, self._i_hi + self._m)
        self._local_grid = grid.subgrid(self._i_lo, grid.n_nodes)
        load = np.asarray(f(grid.x, grid.h), dtype=float)
        self._nonlocal_rows = assemble_nonlocal_operator(
            self._nonlocal_grid, np.arange(self._m, self._i_hi), kernel
        )
        self._local_rows = assemble_local_operator(
            self._local_grid, np.arange(1, self._local_grid.n_nodes - 1), kernel
        )
        self._nonlocal_rhs = np.zeros(self._nonlocal_grid.n_nodes)
        self._nonlocal_rhs[self._nonlocal_rows.rows] = -load[self._nonlocal_rows.rows]
        self._local_rhs = np.zeros(self._local_grid.n_nodes)
        self._local_rhs[self._local_rows.rows] = -load[self._local_rows.rows + self._i_lo]

    def __repr__(self) -> str:
        """Class representation."""
        return f"OverlapSplit(i_lo={self._i_lo}, i_hi={self._i_hi}, m={self._m})"

    @property
    def grid(self) -> Grid1D:
        """The full grid."""
        return self._grid

    @property
    def m(self) -> int:
        """Horizon in grid steps."""
        return self._m

    @property
    def i_lo(self) -> int:
        """Node at the left end of the overlap, the local virtual boundary."""
        return self._i_lo

    @property
    def i_hi(self) -> int:
        """Node at the right end of the overlap, the first node of the nonlocal virtual layer."""
        return self._i_hi

    @property
    def nonlocal_grid(self) -> SubGrid:
        """Nodes of the nonlocal subproblem."""
        return self._nonlocal_grid

    @property
    def local_grid(self) -> SubGrid:
        """Nodes of the local subproblem."""
        return self._local_grid

    @property
    def virtual_layer(self) -> np.ndarray:
        """Nonlocal-subproblem indices of the virtual layer `omega_v`."""
        return np.arange(self._i_hi, self._i_hi + self._m)

    @property
    def overlap(self) -> np.ndarray:
        """Grid indices of the overlap nodes `i_lo .. i_hi`."""
        return np.arange(self._i_lo, self._i_hi + 1)

    @property
    def coefficient(self) -> float:
        """Coefficient of the local flux."""
        return self._kernel.local_coefficient

    def nonlocal_system(self, virtual_rows: OperatorRows | None = None, virtual_rhs: np.ndarray | None = None) -> LinearSystem:
        """The nonlocal subproblem.

        Without `virtual_rows` the virtual layer carries Dirichlet rows with value 0, to be replaced through
        `ReducedSolver.solve(values=...)`.
        """
        rows = self._nonlocal_rows
        rhs = np.array(self._nonlocal_rhs)
        if virtual_rows is not None:
            rows = OperatorRows.merge(rows, virtual_rows)
            rhs[virtual_rows.rows] = virtual_rhs
        system = LinearSystem(self._nonlocal_grid, rows.dense(), rhs, method="nonlocal")
        system = apply_dirichlet_constraints(system, np.arange(self._m), self._g, delta=self._kernel.delta)
        if virtual_rows is None:
            system = apply_dirichlet_constraints(system, self.virtual_layer, _zero)
        return system

    def local_system(self, virtual_row: OperatorRows | None = None, virtual_rhs: float = 0.0) -> LinearSystem:
        """The local subproblem; without `virtual_row` the virtual boundary carries a zero Dirichlet row."""
        rows = self._local_rows
        rhs = np.array(self._local_rhs)
        if virtual_row is not None:
            rows = OperatorRows.merge(rows, virtual_row)
            rhs[virtual_row.rows] = virtual_rhs
        system = LinearSystem(self._local_grid, rows.dense(), rhs, method="local")
        system = apply_dirichlet_constraints(system, np.array([self._local_grid.n_nodes - 1]), self._g)
        if virtual_row is None:
            system = apply_dirichlet_constraints(system, np.array([0]), _zero)
        return system

    def mismatch(self, u_nonlocal: np.ndarray, u_local: np.ndarray) -> np.ndarray:
        """`u_nonlocal - u_local` on the overlap nodes."""
        overlap = self.overlap
        return u_nonlocal[overlap] - u_local[overlap - self._i_lo]

    def overlap_weights(self) -> np.ndarray:
        """Trapezoid weights of the discrete L2 product on the overlap nodes."""
        weights = np.full(len(self.overlap), self._grid.h)
        weights[[0, -1]] = 0.5 * self._grid.h
        return weights

    def glue(self, u_nonlocal: np.ndarray, u_local: np.ndarray) -> np.ndarray:
        """The nonlocal field left of `o_hi`, the local field from `o_hi` on."""
        u = np.zeros(self._grid.n_nodes)
        u[: self._i_hi] = u_nonlocal[: self._i_hi]
        u[self._i_hi :] = u_local[self._i_hi - self._i_lo :]
        return u

    def constrained(self) -> np.ndarray:
        """Grid indices carrying the data `g`."""
        return np.concatenate([np.arange(self._m), [self._grid.n_nodes - 1]])

    def residual(self, u: np.ndarray) -> np.ndarray:
        """`b - A u` of the glued operator: nonlocal rows left of `o_hi`, local rows from `o_hi` on.

        Constrained nodes carry NaN.
        """
        n_nonlocal = self._nonlocal_grid.n_nodes
        residual = np.full(self._grid.n_nodes, np.nan)
        nonlocal_part = self._nonlocal_rhs - self._nonlocal_rows.dense() @ u[:n_nonlocal]
        local_part = self._local_rhs - self._local_rows.dense() @ u[self._i_lo :]
        residual[self._m : self._i_hi] = nonlocal_part[self._m : self._i_hi]
        residual[self._i_hi : -1] = local_part[self._i_hi - self._i_lo : -1]
        return residual
