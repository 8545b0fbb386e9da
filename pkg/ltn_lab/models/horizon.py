"""Spatially varying horizon functions and the per-point stencils built from them."""

import logging
import math
from enum import Enum
from typing import overload

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import HorizonFunctionError
from ltn_lab.models.kernel import Kernel, effective_coefficients, kernel_profile, normalization

_logger = logging.getLogger(__name__)


class HorizonKind(str, Enum):
    """Enumerates the horizon profiles approaching the interface."""

    CONSTANT = "constant"
    PIECEWISE_LINEAR = "piecewise_linear"
    SMOOTH_C2 = "smooth_c2"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value

    def build(self) -> str:
        """Return the HorizonKind for serialization."""
        return str(self)


def smoothstep(t: np.ndarray | float) -> np.ndarray:
    """Quintic smoothstep `t^3 (10 - 15 t + 6 t^2)`, clipped to `[0, 1]`."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


class HorizonFunction:
    """A horizon `delta(x)` shrinking towards an interface `Gamma`.

    Parameters
    ----------
    kind:
        `constant`, `piecewise_linear` (`min(delta_max, dist(x, Gamma))`) or `smooth_c2`
        (`delta_max * s(min(1, dist(x, Gamma) / W))` with the quintic smoothstep `s`).
    delta_max:
        The largest horizon.
    interface:
        The interface point `Gamma`.
    ramp_width:
        `W`, required by `smooth_c2`.
    delta_min:
        Lower bound applied when building discrete stencils.

    Examples
    --------
    ```python
    HorizonFunction("smooth_c2", 0.1, 0.0, ramp_width=0.4)
    ```
    """

    def __init__(
        self,
        kind: HorizonKind | str,
        delta_max: float,
        interface: float,
        ramp_width: float | None = None,
        delta_min: float = 0.0,
    ) -> None:
        try:
            self._kind = HorizonKind(kind)
        except ValueError as err:
            raise HorizonFunctionError(f"unknown horizon kind '{kind}'") from err
        self._delta_max = float(delta_max)
        self._interface = float(interface)
        self._ramp_width = None if ramp_width is None else float(ramp_width)
        self._delta_min = float(delta_min)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return (
            f"HorizonFunction(kind={self._kind}, delta_max={self._delta_max}, interface={self._interface}, "
            f"ramp_width={self._ramp_width}, delta_min={self._delta_min})"
        )

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def kind(self) -> HorizonKind:
        """The horizon profile."""
        return self._kind

    @property
    def delta_max(self) -> float:
        """The largest horizon."""
        return self._delta_max

    @property
    def interface(self) -> float:
        """The interface point."""
        return self._interface

    @property
    def ramp_width(self) -> float | None:
        """Ramp width of the smooth profile."""
        return self._ramp_width

    @property
    def delta_min(self) -> float:
        """The configured floor."""
        return self._delta_min

    def with_delta(self, delta_max: float) -> "HorizonFunction":
        """A copy with another maximum horizon; the ramp width and floor are kept."""
        return HorizonFunction(self._kind, delta_max, self._interface, self._ramp_width, self._delta_min)

    def validate(self) -> Self:
        """Validate the parameters.

        Raises
        ------
        HorizonFunctionError
        """
        if not (math.isfinite(self._delta_max) and self._delta_max > 0.0):
            raise HorizonFunctionError(f"delta_max must be positive, found {self._delta_max}")
        if not 0.0 <= self._delta_min < self._delta_max:
            raise HorizonFunctionError(f"delta_min must lie in [0, delta_max), found {self._delta_min}")
        match self._kind, self._ramp_width:
            case HorizonKind.SMOOTH_C2, None:
                raise HorizonFunctionError("smooth_c2 horizon requires ramp_width")
            case HorizonKind.SMOOTH_C2, width if width <= 0.0:  # type: ignore[operator]
                raise HorizonFunctionError(f"ramp_width must be positive, found {width}")
        return self

    def build(self) -> dict[str, str | float]:
        """Format the HorizonFunction for serialization."""
        values: dict[str, str | float] = {
            "kind": self._kind.build(),
            "delta_max": self._delta_max,
            "interface": self._interface,
            "delta_min": self._delta_min,
        }
        if self._ramp_width is not None:
            values["ramp_width"] = self._ramp_width
        return values

    @classmethod
    def from_dict(cls, values: dict) -> "HorizonFunction":
        """Create a HorizonFunction from its serialized form."""
        try:
            return cls(
                values["kind"],
                values["delta_max"],
                values["interface"],
                ramp_width=values.get("ramp_width"),
                delta_min=values.get("delta_min", 0.0),
            )
        except KeyError as err:
            raise HorizonFunctionError(f"horizon is missing field {err}") from err


@overload
def eval_horizon(hf: HorizonFunction, x: float) -> float: ...


@overload
def eval_horizon(hf: HorizonFunction, x: np.ndarray) -> np.ndarray: ...


def eval_horizon(hf: HorizonFunction, x: float | np.ndarray) -> float | np.ndarray:
    """Evaluate `delta(x)`.

    Examples
    --------
    ```python
    eval_horizon(HorizonFunction("piecewise_linear", 0.1, 0.0), -0.03)  # 0.03
    ```
    """
    distance = np.abs(np.asarray(x, dtype=float) - hf.interface)
    match hf.kind:
        case HorizonKind.CONSTANT:
            values = np.full_like(distance, hf.delta_max)
        case HorizonKind.PIECEWISE_LINEAR:
            values = np.minimum(hf.delta_max, distance)
        case HorizonKind.SMOOTH_C2:
            values = hf.delta_max * smoothstep(np.minimum(1.0, distance / hf.ramp_width))  # type: ignore[operator]
    if np.ndim(values) == 0:
        return float(values)
    return values


def effective_horizon(hf: HorizonFunction, x: np.ndarray, floor: float) -> np.ndarray:
    """Discrete horizon `sqrt(floor^2 + (1 - floor^2 / delta_max^2) delta(x)^2)`.

    Equals `delta_max` wherever `delta(x) = delta_max` and never drops below `floor`.
    """
    floor = max(floor, hf.delta_min)
    if floor >= hf.delta_max:
        raise HorizonFunctionError(f"the stencil floor {floor} reaches delta_max={hf.delta_max}")
    delta = eval_horizon(hf, np.asarray(x, dtype=float))
    return np.sqrt(floor**2 + (1.0 - floor**2 / hf.delta_max**2) * delta**2)


def partial_volume_weights(delta_eff: float, h: float, m: int) -> np.ndarray:
    """Weights `h S((delta_eff - j h) / h + 1/2)` on offsets `1..m`; the trapezoid rule when `delta_eff = m h`."""
    j = np.arange(1, m + 1)
    return h * smoothstep((delta_eff - j * h) / h + 0.5)


def normalized_stencil(kernel: Kernel, delta: float, h: float, m: int) -> np.ndarray:
    """Normalized coefficients on offsets `1..m` of the kernel truncated at horizon `delta`."""
    xi = np.arange(1, m + 1) * h
    weights = partial_volume_weights(delta, h, m)
    values = kernel_profile(kernel, xi, delta)
    return effective_coefficients(kernel, weights, values, xi) * normalization(kernel, weights, values, xi)


def variable_stencils(kernel: Kernel, hf: HorizonFunction, x: np.ndarray, h: float, floor: float) -> np.ndarray:
    """Per-node normalized bond coefficients for a varying horizon.

    Row `i` is `(1 - t_i) c_floor + t_i c_max` with `t_i = (delta(x_i) / delta_max)^2`, where `c_floor` and
    `c_max` are the normalized stencils at the floor and at `delta_max`. Every row satisfies
    `2 sum_k c_ik (k h)^2 = 2 c` with `c` the local coefficient of the kernel; every higher moment is affine in
    `delta(x)^2`, so it varies as smoothly as the horizon itself.
    A floor of `h` makes `c_floor` the three-point local stencil.

    Returns an array of shape `(len(x), m)` with `m = round(delta_max / h)`.
    """
    m = round(hf.delta_max / h)
    floor = max(floor, hf.delta_min)
    delta_eff = effective_horizon(hf, x, floor)
    t = (delta_eff**2 - floor**2) / (hf.delta_max**2 - floor**2)
    lower = normalized_stencil(kernel, floor, h, m)
    upper = normalized_stencil(kernel, hf.delta_max, h, m)
    _logger.debug(dict(nodes=len(delta_eff), m=m, floor=floor))
    return (1.0 - t)[:, None] * lower[None, :] + t[:, None] * upper[None, :]
