"""Grid1D describes the uniform node set every operator is assembled on."""

import math

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import GridError

MIN_NODES = 3
SNAP_TOLERANCE = 1e-9


class Interval:
    """A half-open interval `[lo, hi)` of the real line, optionally closed on the right."""

    def __init__(self, lo: float, hi: float, closed: bool = False) -> None:
        self._lo = float(lo)
        self._hi = float(hi)
        self._closed = closed

    def __repr__(self) -> str:
        """Class representation."""
        return f"Interval({self._lo}, {self._hi}, closed={self._closed})"

    def __str__(self) -> str:
        """Class string formatting."""
        right = "]" if self._closed else ")"
        return f"[{self._lo}, {self._hi}{right}"

    def __eq__(self, other: object) -> bool:
        """Intervals are equal when their bounds and closedness are."""
        if not isinstance(other, Interval):
            return NotImplemented
        return (self._lo, self._hi, self._closed) == (other._lo, other._hi, other._closed)

    def __hash__(self) -> int:
        """Hash on bounds and closedness."""
        return hash((self._lo, self._hi, self._closed))

    @property
    def lo(self) -> float:
        """The left end."""
        return self._lo

    @property
    def hi(self) -> float:
        """The right end."""
        return self._hi

    @property
    def closed(self) -> bool:
        """Whether the right end belongs to the interval."""
        return self._closed

    @property
    def width(self) -> float:
        """The length `hi - lo`."""
        return self._hi - self._lo

    def build(self) -> list[float | bool]:
        """Format the Interval for serialization."""
        return [self._lo, self._hi, self._closed]

    @classmethod
    def from_list(cls, values: list) -> "Interval":
        """Create an Interval from its serialized form `[lo, hi]` or `[lo, hi, closed]`."""
        match values:
            case [lo, hi]:
                return cls(lo, hi)
            case [lo, hi, closed]:
                return cls(lo, hi, bool(closed))
            case _:
                raise TypeError(f"an interval is serialized as [lo, hi] or [lo, hi, closed], found '{values}'")


class Grid1D:
    """A uniform one-dimensional grid.

    Node `i` sits at `x_lo + i * h` with `h = (x_hi - x_lo) / (n_nodes - 1)`.

    Examples
    --------
    ```python
    Grid1D.from_spacing(-0.05, 1.0, 0.0125)
    ```
    ```python
    Grid1D(-0.05, 1.0, 85)
    ```
    """

    def __init__(self, x_lo: float, x_hi: float, n_nodes: int) -> None:
        self._x_lo = float(x_lo)
        self._x_hi = float(x_hi)
        self._n_nodes = int(n_nodes)
        self.validate()
        self._h = (self._x_hi - self._x_lo) / (self._n_nodes - 1)
        self._x = np.linspace(self._x_lo, self._x_hi, self._n_nodes)
        self._x.flags.writeable = False

    def __repr__(self) -> str:
        """Class representation."""
        return f"Grid1D({self._x_lo}, {self._x_hi}, {self._n_nodes})"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"Grid1D({self._x_lo}, {self._x_hi}, {self._n_nodes})"

    def __len__(self) -> int:
        """The number of nodes."""
        return self._n_nodes

    @property
    def x_lo(self) -> float:
        """Left end of the grid."""
        return self._x_lo

    @property
    def x_hi(self) -> float:
        """Right end of the grid."""
        return self._x_hi

    @property
    def n_nodes(self) -> int:
        """Number of nodes."""
        return self._n_nodes

    @property
    def h(self) -> float:
        """Grid spacing."""
        return self._h

    @property
    def x(self) -> np.ndarray:
        """Read-only node coordinates."""
        return self._x

    @classmethod
    def from_spacing(cls, x_lo: float, x_hi: float, h: float) -> "Grid1D":
        """Create a Grid1D from its spacing.

        Parameters
        ----------
        x_lo:
            Left end of the grid.
        x_hi:
            Right end of the grid.
        h:
            Grid spacing; `(x_hi - x_lo) / h` must be an integer.

        Raises
        ------
        GridError
        """
        if h <= 0.0:
            raise GridError(f"grid spacing must be positive, found h={h}")
        cells = (x_hi - x_lo) / h
        if abs(cells - round(cells)) > SNAP_TOLERANCE * max(1.0, abs(cells)):
            raise GridError(f"(x_hi - x_lo) / h must be an integer, found {cells} for h={h}")
        return cls(x_lo, x_hi, round(cells) + 1)

    def validate(self) -> Self:
        """Validate the grid bounds and node count.

        Raises
        ------
        GridError
        """
        if not (math.isfinite(self._x_lo) and math.isfinite(self._x_hi)):
            raise GridError("grid bounds must be finite")
        if self._x_hi <= self._x_lo:
            raise GridError(f"x_hi must exceed x_lo, found ({self._x_lo}, {self._x_hi})")
        if self._n_nodes < MIN_NODES:
            raise GridError(f"a grid needs at least {MIN_NODES} nodes, found {self._n_nodes}")
        return self

    def index_of(self, x: float) -> int:
        """First node index at or right of `x`, snapping `x` onto a node within `1e-9 * h`."""
        position = (x - self._x_lo) / self._h
        nearest = round(position)
        if abs(position - nearest) <= SNAP_TOLERANCE:
            return int(nearest)
        return math.ceil(position)

    def last_index_of(self, x: float) -> int:
        """Last node index at or left of `x`, with the same snapping as `index_of`."""
        position = (x - self._x_lo) / self._h
        nearest = round(position)
        if abs(position - nearest) <= SNAP_TOLERANCE:
            return int(nearest)
        return math.floor(position)

    def indices_in(self, interval: Interval) -> np.ndarray:
        """Indices of the nodes lying in `interval`, clipped to the grid."""
        first = max(self.index_of(interval.lo), 0)
        if interval.closed:
            stop = self.last_index_of(interval.hi) + 1
        else:
            stop = self.index_of(interval.hi)
        stop = min(stop, self._n_nodes)
        return np.arange(first, max(first, stop))

    def steps(self, length: float) -> int:
        """Number of grid steps spanned by `length`, rounded to the nearest integer."""
        return round(length / self._h)

    def subgrid(self, first: int, stop: int) -> "SubGrid":
        """The nodes `first, ..., stop - 1` as a grid sharing this grid's coordinates."""
        return SubGrid(self, first, stop)

    def build(self) -> dict[str, float | int]:
        """Format the Grid1D for serialization."""
        return {"x_lo": self._x_lo, "x_hi": self._x_hi, "n_nodes": self._n_nodes}


class SubGrid(Grid1D):
    """A contiguous slice of a parent grid; coordinates are the parent's, bit for bit."""

    def __init__(self, parent: Grid1D, first: int, stop: int) -> None:
        if not 0 <= first < stop <= parent.n_nodes:
            raise GridError(f"invalid node range [{first}, {stop}) for {parent!r}")
        super().__init__(parent.x[first], parent.x[stop - 1], stop - first)
        self._h = parent.h
        self._x = parent.x[first:stop]
        self._offset = first

    def __repr__(self) -> str:
        """Class representation."""
        return f"SubGrid(offset={self._offset}, n_nodes={self._n_nodes})"

    @property
    def offset(self) -> int:
        """Index of this grid's first node in the parent grid."""
        return self._offset

    @property
    def dofs(self) -> np.ndarray:
        """Parent indices of this grid's nodes."""
        return np.arange(self._offset, self._offset + self._n_nodes)
