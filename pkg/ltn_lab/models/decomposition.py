"""Decomposition of a one-dimensional domain into nonlocal, transition and local regions."""

import logging
import math
from enum import Enum

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import ConfigValidationError, InconsistentIntervals, OverlapTooSmall
from ltn_lab.models.grid import Grid1D, Interval

_logger = logging.getLogger(__name__)


class DecompositionMode(str, Enum):
    """Enumerates the supported coupling geometries."""

    OVERLAP = "overlap"
    BLENDED_TRANSITION = "blended_transition"
    SHARP_INTERFACE = "sharp_interface"
    VARIABLE_HORIZON = "variable_horizon"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value

    def build(self) -> str:
        """Return the DecompositionMode for serialization."""
        return str(self)


class Region(str, Enum):
    """Enumerates the labels a grid node can carry."""

    BOUNDARY_LAYER = "boundary_layer"
    NONLOCAL = "nonlocal"
    TRANSITION = "transition"
    OVERLAP = "overlap"
    LOCAL = "local"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value


# interval name -> node label; names absent here are interfaces, not regions
REGION_OF_INTERVAL = {
    "omega_p": Region.BOUNDARY_LAYER,
    "omega_nl": Region.NONLOCAL,
    "omega_t": Region.TRANSITION,
    "omega_o": Region.OVERLAP,
    "omega_l": Region.LOCAL,
}


class Decomposition:
    """Named intervals splitting `[x_lo, x_hi]` for one coupling geometry.

    Use `build_decomposition` rather than the constructor.

    ??? note "Interval names"
        - `omega_p`: the nonlocal boundary layer `[x_lo, x_lo + delta)`.
        - `omega_nl`, `omega_t`, `omega_o`, `omega_l`: nonlocal, transition, overlap and local regions.
        - `omega_b`: the blending support (blended transition with a `blend` only).
        - `gamma`: the interface point (sharp interface, variable horizon, QNL geometry).
        - `gamma_v`, `omega_v`: the local and nonlocal virtual boundaries (overlap only).
    """

    def __init__(
        self,
        mode: DecompositionMode,
        x_lo: float,
        x_hi: float,
        delta: float,
        intervals: dict[str, Interval],
        parameters: dict[str, float | list[float]],
    ) -> None:
        self._mode = mode
        self._x_lo = x_lo
        self._x_hi = x_hi
        self._delta = delta
        self._intervals = dict(intervals)
        self._parameters = dict(parameters)

    def __repr__(self) -> str:
        """Class representation."""
        return f"Decomposition(mode={self._mode}, x_lo={self._x_lo}, x_hi={self._x_hi}, delta={self._delta})"

    def __str__(self) -> str:
        """Class string formatting."""
        inner = ", ".join(f"{name}={interval}" for name, interval in self._intervals.items())
        return f"Decomposition({self._mode}, {inner})"

    def __eq__(self, other: object) -> bool:
        """Decompositions are equal when they serialize identically."""
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self.build() == other.build()

    def __hash__(self) -> int:
        """Hash on the serialized form."""
        return hash(repr(self.build()))

    @property
    def mode(self) -> DecompositionMode:
        """The coupling geometry."""
        return self._mode

    @property
    def x_lo(self) -> float:
        """Left end of the domain, boundary layer included."""
        return self._x_lo

    @property
    def x_hi(self) -> float:
        """Right end of the domain."""
        return self._x_hi

    @property
    def delta(self) -> float:
        """The horizon."""
        return self._delta

    @property
    def intervals(self) -> dict[str, Interval]:
        """A copy of the named intervals."""
        return dict(self._intervals)

    @property
    def parameters(self) -> dict[str, float | list[float]]:
        """The interface and overlap parameters the decomposition was built from."""
        return dict(self._parameters)

    def interval(self, name: str) -> Interval:
        """Return the interval called `name`.

        Raises
        ------
        InconsistentIntervals
            The decomposition has no interval of that name.
        """
        try:
            return self._intervals[name]
        except KeyError as err:
            raise InconsistentIntervals(f"{self._mode} decomposition has no interval '{name}'") from err

    def has(self, name: str) -> bool:
        """Whether the decomposition names the interval `name`."""
        return name in self._intervals

    def indices(self, grid: Grid1D, name: str) -> np.ndarray:
        """Node indices of `grid` lying in the interval `name`."""
        return grid.indices_in(self.interval(name))

    def labels(self, grid: Grid1D) -> list[Region]:
        """Label every node of `grid` with its region.

        Raises
        ------
        InconsistentIntervals
            Some node is claimed by no region or by two.
        """
        labels: list[Region | None] = [None] * grid.n_nodes
        for name, region in REGION_OF_INTERVAL.items():
            if name not in self._intervals:
                continue
            for i in self.indices(grid, name):
                if labels[i] is not None:
                    raise InconsistentIntervals(f"node {i} lies in both {labels[i]} and {region}")
                labels[i] = region
        missing = [i for i, label in enumerate(labels) if label is None]
        if missing:
            raise InconsistentIntervals(f"nodes {missing} are not classified by {self!r}")
        return [label for label in labels if label is not None]

    def build(self) -> dict[str, str | float | list[float]]:
        """Format the Decomposition for serialization."""
        return {"mode": self._mode.build(), "delta": self._delta, **self._parameters}

    @classmethod
    def from_dict(cls, domain: tuple[float, float], values: dict) -> "Decomposition":
        """Build a Decomposition from its serialized form and the domain bounds.

        Raises
        ------
        ConfigValidationError
            The mode is unknown or a parameter has the wrong shape.
        """
        try:
            mode = DecompositionMode(values["mode"])
        except (KeyError, ValueError) as err:
            raise ConfigValidationError(f"decomposition.mode: invalid value {values.get('mode')!r}") from err
        if "delta" not in values:
            raise ConfigValidationError("decomposition.delta: missing")
        unknown = set(values) - {"mode", "delta", "interface", "blend", "overlap", "transition_width"}
        if unknown:
            raise ConfigValidationError(f"decomposition: unknown fields {sorted(unknown)}")
        return build_decomposition(
            mode,
            domain,
            float(values["delta"]),
            interface=values.get("interface"),
            blend=_pair(values, "blend"),
            overlap=_pair(values, "overlap"),
            transition_width=values.get("transition_width"),
        )

    def validate(self) -> Self:
        """Check that region intervals are ordered and pairwise disjoint.

        Raises
        ------
        InconsistentIntervals
        """
        regions = sorted(
            (self._intervals[name] for name in REGION_OF_INTERVAL if name in self._intervals),
            key=lambda interval: interval.lo,
        )
        if regions[0].lo != self._x_lo or regions[-1].hi != self._x_hi:
            raise InconsistentIntervals(f"regions of {self!r} do not cover the domain")
        for left, right in zip(regions, regions[1:]):
            if left.hi != right.lo or left.width < 0.0:
                raise InconsistentIntervals(f"intervals {left} and {right} intersect or leave a gap")
        return self


def _pair(values: dict, key: str) -> tuple[float, float] | None:
    match values.get(key):
        case None:
            return None
        case [lo, hi]:
            return (float(lo), float(hi))
        case other:
            raise ConfigValidationError(f"decomposition.{key}: expected [lo, hi], found {other!r}")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InconsistentIntervals(message)


def build_decomposition(
    mode: DecompositionMode | str,
    domain: tuple[float, float],
    delta: float,
    interface: float | None = None,
    blend: tuple[float, float] | None = None,
    overlap: tuple[float, float] | None = None,
    transition_width: float | None = None,
) -> Decomposition:
    """Build a validated Decomposition.

    The domain `[x_lo, x_hi]` includes the nonlocal boundary layer `[x_lo, x_lo + delta)`.

    Parameters
    ----------
    mode:
        The coupling geometry.
    domain:
        `(x_lo, x_hi)`.
    delta:
        The horizon.
    interface:
        Interface point for sharp interface and variable horizon, or the QNL point `x*` for a
        blended transition without `blend`.
    blend:
        Blending support `(b_lo, b_hi)` of a blended transition.
    overlap:
        Overlap region `(o_lo, o_hi)`.
    transition_width:
        Width of the variable-horizon transition left of the interface, `delta` by default.

    Returns
    -------
    Decomposition

    Raises
    ------
    OverlapTooSmall
    InconsistentIntervals

    Examples
    --------
    ```python
    build_decomposition("blended_transition", (-0.05, 1.0), 0.05, blend=(0.4, 0.6))
    ```
    """
    mode = DecompositionMode(mode)
    x_lo, x_hi = float(domain[0]), float(domain[1])
    _require(math.isfinite(delta) and delta > 0.0, f"delta must be positive, found {delta}")
    _require(x_lo < x_hi, f"domain must satisfy x_lo < x_hi, found ({x_lo}, {x_hi})")
    start = x_lo + delta
    _require(start < x_hi, f"the boundary layer of width {delta} fills the domain ({x_lo}, {x_hi})")

    intervals: dict[str, Interval] = {"omega_p": Interval(x_lo, start)}
    parameters: dict[str, float | list[float]] = {}

    match mode:
        case DecompositionMode.OVERLAP:
            _require(overlap is not None, "overlap mode requires 'overlap'")
            o_lo, o_hi = overlap  # type: ignore[misc]
            _require(start <= o_lo < o_hi <= x_hi, f"overlap ({o_lo}, {o_hi}) must lie in [{start}, {x_hi}]")
            if o_hi - o_lo < delta * (1.0 - 1e-12):
                raise OverlapTooSmall(f"overlap width {o_hi - o_lo} is smaller than the horizon {delta}")
            _require(o_hi + delta < x_hi, f"the virtual layer [{o_hi}, {o_hi + delta}) must end before {x_hi}")
            intervals["omega_nl"] = Interval(start, o_lo)
            intervals["omega_o"] = Interval(o_lo, o_hi)
            intervals["omega_l"] = Interval(o_hi, x_hi, closed=True)
            intervals["gamma_v"] = Interval(o_lo, o_lo, closed=True)
            intervals["omega_v"] = Interval(o_hi, o_hi + delta)
            parameters["overlap"] = [o_lo, o_hi]
        case DecompositionMode.BLENDED_TRANSITION if blend is not None:
            b_lo, b_hi = blend
            _require(b_lo < b_hi, f"blend must satisfy b_lo < b_hi, found ({b_lo}, {b_hi})")
            t_lo, t_hi = b_lo - delta, b_hi + delta
            _require(start <= t_lo and t_hi < x_hi, f"transition ({t_lo}, {t_hi}) must lie in [{start}, {x_hi})")
            intervals["omega_nl"] = Interval(start, t_lo)
            intervals["omega_t"] = Interval(t_lo, t_hi)
            intervals["omega_l"] = Interval(t_hi, x_hi, closed=True)
            intervals["omega_b"] = Interval(b_lo, b_hi)
            parameters["blend"] = [b_lo, b_hi]
            if interface is not None:
                _require(b_lo <= interface <= b_hi, f"interface {interface} must lie in the blend ({b_lo}, {b_hi})")
                intervals["gamma"] = Interval(interface, interface, closed=True)
                parameters["interface"] = interface
        case DecompositionMode.BLENDED_TRANSITION:
            _require(interface is not None, "a blended transition requires 'blend' or 'interface'")
            t_lo, t_hi = float(interface), float(interface) + delta  # type: ignore[arg-type]
            _require(start <= t_lo and t_hi < x_hi, f"transition ({t_lo}, {t_hi}) must lie in [{start}, {x_hi})")
            intervals["omega_nl"] = Interval(start, t_lo)
            intervals["omega_t"] = Interval(t_lo, t_hi)
            intervals["omega_l"] = Interval(t_hi, x_hi, closed=True)
            intervals["gamma"] = Interval(t_lo, t_lo, closed=True)
            parameters["interface"] = t_lo
        case DecompositionMode.SHARP_INTERFACE:
            _require(interface is not None, "sharp interface mode requires 'interface'")
            gamma = float(interface)  # type: ignore[arg-type]
            _require(start <= gamma < x_hi, f"interface {gamma} must lie in [{start}, {x_hi})")
            intervals["omega_nl"] = Interval(start, gamma)
            intervals["omega_l"] = Interval(gamma, x_hi, closed=True)
            intervals["gamma"] = Interval(gamma, gamma, closed=True)
            parameters["interface"] = gamma
        case DecompositionMode.VARIABLE_HORIZON:
            _require(interface is not None, "variable horizon mode requires 'interface'")
            gamma = float(interface)  # type: ignore[arg-type]
            width = delta if transition_width is None else float(transition_width)
            _require(width > 0.0, f"transition_width must be positive, found {width}")
            _require(start <= gamma - width and gamma < x_hi, f"transition ({gamma - width}, {gamma}) leaves the domain")
            intervals["omega_nl"] = Interval(start, gamma - width)
            intervals["omega_t"] = Interval(gamma - width, gamma)
            intervals["omega_l"] = Interval(gamma, x_hi, closed=True)
            intervals["gamma"] = Interval(gamma, gamma, closed=True)
            parameters["interface"] = gamma
            if transition_width is not None:
                parameters["transition_width"] = width

    decomposition = Decomposition(mode, x_lo, x_hi, delta, intervals, parameters).validate()
    _logger.debug(dict(decomposition=str(decomposition)))
    return decomposition
