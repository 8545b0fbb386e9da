"""Assembled discrete systems: linear systems, Arlequin saddle systems and quadratic energy forms."""

import logging

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import InconsistentIntervals
from ltn_lab.models.grid import Grid1D

_logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


class EnergyForm:
    """A quadratic energy `sum kappa (u_q - u_p)^2` over bond and cell terms.

    Bond terms join any two nodes `p < q` and are attributed to both endpoints. Cell terms join `c` and
    `c + 1` and are attributed to the cell. The Hessian `K` is assembled term by term in a fixed order so
    that `K` is bit-exactly symmetric, and `A = -K / h` is the matching operator.
    """

    def __init__(
        self,
        n_nodes: int,
        bonds: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
        cells: tuple[np.ndarray, np.ndarray] | None = None,
    ) -> None:
        self._n_nodes = n_nodes
        p, q, kappa = bonds if bonds is not None else (np.empty(0, int), np.empty(0, int), np.empty(0))
        low, high = np.minimum(p, q), np.maximum(p, q)
        if np.any(low == high):
            raise InconsistentIntervals("a bond term joins a node to itself")
        self._bond_p = np.asarray(low, dtype=int)
        self._bond_q = np.asarray(high, dtype=int)
        self._bond_kappa = _frozen(kappa)
        c, cell_kappa = cells if cells is not None else (np.empty(0, int), np.empty(0))
        self._cell = np.asarray(c, dtype=int)
        self._cell_kappa = _frozen(cell_kappa)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"EnergyForm(n_nodes={self._n_nodes}, bonds={len(self._bond_p)}, cells={len(self._cell)})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    def __add__(self, other: "EnergyForm") -> "EnergyForm":
        """Sum of two energies on the same nodes."""
        if other.n_nodes != self._n_nodes:
            raise InconsistentIntervals("energies on different node sets cannot be added")
        return EnergyForm(
            self._n_nodes,
            (
                np.concatenate([self._bond_p, other._bond_p]),
                np.concatenate([self._bond_q, other._bond_q]),
                np.concatenate([self._bond_kappa, other._bond_kappa]),
            ),
            (np.concatenate([self._cell, other._cell]), np.concatenate([self._cell_kappa, other._cell_kappa])),
        )

    @property
    def n_nodes(self) -> int:
        """Number of unknowns."""
        return self._n_nodes

    @property
    def bonds(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bond terms `(p, q, kappa)` with `p < q`."""
        return self._bond_p, self._bond_q, self._bond_kappa

    @property
    def cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell terms `(c, kappa)`."""
        return self._cell, self._cell_kappa

    def validate(self) -> Self:
        """Check every term references existing nodes.

        Raises
        ------
        InconsistentIntervals
        """
        if len(self._bond_p) != len(self._bond_kappa) or len(self._cell) != len(self._cell_kappa):
            raise InconsistentIntervals("energy term arrays differ in length")
        touched = np.concatenate([self._bond_p, self._bond_q, self._cell, self._cell + 1])
        if touched.size and (touched.min() < 0 or touched.max() >= self._n_nodes):
            raise InconsistentIntervals(f"an energy term leaves the {self._n_nodes} nodes")
        return self

    def hessian(self) -> np.ndarray:
        """The symmetric stiffness matrix `K`, so that the energy equals `u^T K u / 2`."""
        p = np.concatenate([self._bond_p, self._cell])
        q = np.concatenate([self._bond_q, self._cell + 1])
        kappa = np.concatenate([self._bond_kappa, self._cell_kappa])
        stiffness = np.zeros((self._n_nodes, self._n_nodes))
        np.add.at(stiffness, (p, p), 2.0 * kappa)
        np.add.at(stiffness, (q, q), 2.0 * kappa)
        np.add.at(stiffness, (p, q), -2.0 * kappa)
        np.add.at(stiffness, (q, p), -2.0 * kappa)
        return stiffness

    def energy(self, u: np.ndarray) -> float:
        """Evaluate the energy at `u`."""
        bonds = self._bond_kappa * (u[self._bond_q] - u[self._bond_p]) ** 2
        cells = self._cell_kappa * (u[self._cell + 1] - u[self._cell]) ** 2
        return float(np.sum(bonds) + np.sum(cells))

    def node_energy(self, u: np.ndarray) -> np.ndarray:
        """Bond energy split half to each endpoint; cell energy is left out."""
        bonds = self._bond_kappa * (u[self._bond_q] - u[self._bond_p]) ** 2
        attributed = np.zeros(self._n_nodes)
        np.add.at(attributed, self._bond_p, 0.5 * bonds)
        np.add.at(attributed, self._bond_q, 0.5 * bonds)
        return attributed

    def cell_energy(self, u: np.ndarray) -> np.ndarray:
        """Cell energy per cell `c`, indexed `0 .. n_nodes - 2`."""
        cells = self._cell_kappa * (u[self._cell + 1] - u[self._cell]) ** 2
        attributed = np.zeros(self._n_nodes - 1)
        np.add.at(attributed, self._cell, cells)
        return attributed


class LinearSystem:
    """A square system `A u = b` on the nodes of a grid with explicit constraint rows.

    Rows of constrained nodes are identity rows whose right-hand side is the imposed value. Columns of
    constrained nodes are left in place; the solver eliminates them.
    """

    def __init__(
        self,
        grid: Grid1D,
        matrix: np.ndarray,
        rhs: np.ndarray,
        constrained: np.ndarray | None = None,
        values: np.ndarray | None = None,
        method: str | None = None,
        energy: EnergyForm | None = None,
    ) -> None:
        self._grid = grid
        self._matrix = _frozen(matrix)
        self._rhs = _frozen(rhs)
        self._constrained = np.asarray([] if constrained is None else constrained, dtype=int)
        self._values = _frozen(np.asarray([] if values is None else values, dtype=float))
        self._method = method
        self._energy = energy
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"LinearSystem(n={self.n}, constrained={len(self._constrained)}, method={self._method})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def grid(self) -> Grid1D:
        """The grid the unknowns live on."""
        return self._grid

    @property
    def matrix(self) -> np.ndarray:
        """The read-only matrix `A`."""
        return self._matrix

    @property
    def rhs(self) -> np.ndarray:
        """The read-only right-hand side `b`."""
        return self._rhs

    @property
    def constrained(self) -> np.ndarray:
        """Indices of constrained nodes."""
        return self._constrained

    @property
    def values(self) -> np.ndarray:
        """Imposed values at the constrained nodes."""
        return self._values

    @property
    def free(self) -> np.ndarray:
        """Indices of unconstrained nodes."""
        mask = np.ones(self.n, dtype=bool)
        mask[self._constrained] = False
        return np.flatnonzero(mask)

    @property
    def method(self) -> str | None:
        """The method tag."""
        return self._method

    @property
    def energy(self) -> EnergyForm | None:
        """The energy whose Hessian the operator came from, when it came from one."""
        return self._energy

    @property
    def n(self) -> int:
        """Number of unknowns."""
        return len(self._rhs)

    @property
    def half_bandwidth(self) -> int:
        """Largest `|i - j|` over the nonzero entries of `A`."""
        return self.bandwidth_of(self._matrix)

    @staticmethod
    def bandwidth_of(matrix: np.ndarray) -> int:
        """Largest `|i - j|` over the nonzero entries of a matrix."""
        rows, cols = np.nonzero(matrix)
        return int(np.max(np.abs(rows - cols))) if rows.size else 0

    def validate(self) -> Self:
        """Check shapes and that constrained rows are identity rows carrying their values.

        Raises
        ------
        InconsistentIntervals
        """
        n = len(self._rhs)
        if self._matrix.shape != (n, n) or n != self._grid.n_nodes:
            raise InconsistentIntervals(f"matrix {self._matrix.shape} does not match {n} unknowns on {self._grid!r}")
        if len(self._constrained) != len(self._values):
            raise InconsistentIntervals("constrained indices and values differ in length")
        for i, value in zip(self._constrained, self._values):
            row = self._matrix[i]
            if row[i] != 1.0 or np.count_nonzero(row) != 1 or self._rhs[i] != value:
                raise InconsistentIntervals(f"row {i} is constrained but is not an identity row with rhs {value}")
        return self

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Return `A u`."""
        return self._matrix @ u

    def residual(self, u: np.ndarray) -> np.ndarray:
        """Return `b - A u`."""
        return self._rhs - self._matrix @ u


class SaddleSystem:
    """The Arlequin saddle-point system in the unknowns `(u1, u2, phi)`.

    `u1` lives on the local nodes `dofs1`, `u2` on the nonlocal nodes `dofs2`, `phi` on the multiplier
    nodes. The KKT matrix reads `[[K1, 0, C1^T], [0, K2, -C2^T], [C1, -C2, 0]]` with the right-hand side
    `(l1, l2, 0)`; `C1` and `C2` are the same coupling form on the overlap nodes embedded in each block.
    """

    def __init__(
        self,
        grid: Grid1D,
        k1: np.ndarray,
        k2: np.ndarray,
        c1: np.ndarray,
        c2: np.ndarray,
        l1: np.ndarray,
        l2: np.ndarray,
        dofs1: np.ndarray,
        dofs2: np.ndarray,
        constrained1: dict[int, float],
        constrained2: dict[int, float],
        alpha1: np.ndarray,
    ) -> None:
        self._grid = grid
        self._k1, self._k2 = _frozen(k1), _frozen(k2)
        self._c1, self._c2 = _frozen(c1), _frozen(c2)
        self._l1, self._l2 = _frozen(l1), _frozen(l2)
        self._dofs1, self._dofs2 = np.asarray(dofs1, dtype=int), np.asarray(dofs2, dtype=int)
        self._constrained1 = dict(constrained1)
        self._constrained2 = dict(constrained2)
        self._alpha1 = _frozen(alpha1)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"SaddleSystem(n1={len(self._dofs1)}, n2={len(self._dofs2)}, multipliers={self.n_multipliers})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def grid(self) -> Grid1D:
        """The grid both fields live on."""
        return self._grid

    @property
    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """`(K1, K2, C1, C2)`."""
        return self._k1, self._k2, self._c1, self._c2

    @property
    def loads(self) -> tuple[np.ndarray, np.ndarray]:
        """`(l1, l2)`."""
        return self._l1, self._l2

    @property
    def dofs1(self) -> np.ndarray:
        """Grid indices of the local unknowns."""
        return self._dofs1

    @property
    def dofs2(self) -> np.ndarray:
        """Grid indices of the nonlocal unknowns."""
        return self._dofs2

    @property
    def constrained1(self) -> dict[int, float]:
        """Dirichlet data on local unknowns, keyed by block index."""
        return dict(self._constrained1)

    @property
    def constrained2(self) -> dict[int, float]:
        """Dirichlet data on nonlocal unknowns, keyed by block index."""
        return dict(self._constrained2)

    @property
    def alpha1(self) -> np.ndarray:
        """Local weight `alpha1 = 1 - beta` at every grid node, used to reconstruct the field."""
        return self._alpha1

    @property
    def n_multipliers(self) -> int:
        """Number of multiplier unknowns."""
        return self._c1.shape[0]

    def validate(self) -> Self:
        """Check block shapes.

        Raises
        ------
        InconsistentIntervals
        """
        n1, n2 = len(self._dofs1), len(self._dofs2)
        shapes_ok = (
            self._k1.shape == (n1, n1)
            and self._k2.shape == (n2, n2)
            and self._c1.shape[1] == n1
            and self._c2.shape == (self._c1.shape[0], n2)
            and self._l1.shape == (n1,)
            and self._l2.shape == (n2,)
            and self._alpha1.shape == (self._grid.n_nodes,)
        )
        if not shapes_ok:
            raise InconsistentIntervals(f"saddle blocks do not fit {n1} local and {n2} nonlocal unknowns")
        return self

    def kkt(self) -> tuple[np.ndarray, np.ndarray]:
        """The full KKT matrix and right-hand side, constraints not yet applied."""
        n1, n2, nm = len(self._dofs1), len(self._dofs2), self.n_multipliers
        matrix = np.zeros((n1 + n2 + nm, n1 + n2 + nm))
        matrix[:n1, :n1] = self._k1
        matrix[n1 : n1 + n2, n1 : n1 + n2] = self._k2
        matrix[n1 + n2 :, :n1] = self._c1
        matrix[n1 + n2 :, n1 : n1 + n2] = -self._c2
        matrix[:n1, n1 + n2 :] = self._c1.T
        matrix[n1 : n1 + n2, n1 + n2 :] = -self._c2.T
        rhs = np.concatenate([self._l1, self._l2, np.zeros(nm)])
        return matrix, rhs


class OperatorRows:
    """Rows of an operator on a subset of grid nodes.

    `matrix[r]` is the full-width row of node `rows[r]`. Contributions from different regions are
    combined with `merge`.
    """

    def __init__(self, n_nodes: int, rows: np.ndarray, matrix: np.ndarray) -> None:
        self._n_nodes = n_nodes
        self._rows = np.asarray(rows, dtype=int)
        self._matrix = _frozen(matrix)
        if self._matrix.shape != (len(self._rows), n_nodes):
            raise InconsistentIntervals(f"row block {self._matrix.shape} does not fit {len(self._rows)} rows")

    def __repr__(self) -> str:
        """Class representation."""
        return f"OperatorRows(rows={len(self._rows)}, n_nodes={self._n_nodes})"

    @property
    def rows(self) -> np.ndarray:
        """Grid indices of the assembled rows."""
        return self._rows

    @property
    def matrix(self) -> np.ndarray:
        """The row block."""
        return self._matrix

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Operator values on the assembled rows."""
        return self._matrix @ u

    def dense(self) -> np.ndarray:
        """The block embedded in an `n x n` matrix with zero rows elsewhere."""
        full = np.zeros((self._n_nodes, self._n_nodes))
        full[self._rows] = self._matrix
        return full

    @classmethod
    def merge(cls, *parts: "OperatorRows") -> "OperatorRows":
        """Stack row blocks; a node may be assembled by one block only."""
        rows = np.concatenate([part.rows for part in parts])
        if len(np.unique(rows)) != len(rows):
            raise InconsistentIntervals("two row blocks assemble the same node")
        return cls(parts[0]._n_nodes, rows, np.vstack([part.matrix for part in parts]))
