"""Blending functions: partition-of-unity weights that are 1 on the nonlocal side and 0 on the local side."""

import logging
from enum import Enum
from typing import overload

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import BlendingFunctionError
from ltn_lab.models.grid import Interval

_logger = logging.getLogger(__name__)


class BlendingShape(str, Enum):
    """Enumerates the blending profiles across the blending support."""

    PIECEWISE_CONSTANT = "piecewise_constant"
    PIECEWISE_LINEAR = "piecewise_linear"
    CUBIC_SMOOTH = "cubic_smooth"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value

    def build(self) -> str:
        """Return the BlendingShape for serialization."""
        return str(self)


class BlendingFunction:
    """A blending function `beta` with support `(b_lo, b_hi)`.

    Examples
    --------
    ```python
    BlendingFunction("cubic_smooth", (0.4, 0.6))
    ```
    """

    def __init__(self, shape: BlendingShape | str, support: tuple[float, float]) -> None:
        try:
            self._shape = BlendingShape(shape)
        except ValueError as err:
            raise BlendingFunctionError(f"unknown blending shape '{shape}'") from err
        self._b_lo, self._b_hi = float(support[0]), float(support[1])
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return f"BlendingFunction(shape={self._shape}, support=({self._b_lo}, {self._b_hi}))"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"BlendingFunction(shape={self._shape}, support=({self._b_lo}, {self._b_hi}))"

    @property
    def shape(self) -> BlendingShape:
        """The blending profile."""
        return self._shape

    @property
    def support(self) -> Interval:
        """The blending support, where `0 < beta < 1` may hold."""
        return Interval(self._b_lo, self._b_hi)

    def validate(self) -> Self:
        """Check the support is a non-empty interval.

        Raises
        ------
        BlendingFunctionError
        """
        if not self._b_lo < self._b_hi:
            raise BlendingFunctionError(f"blending support must satisfy b_lo < b_hi, found ({self._b_lo}, {self._b_hi})")
        return self

    def build(self) -> dict[str, str | list[float]]:
        """Format the BlendingFunction for serialization."""
        return {"shape": self._shape.build(), "support": [self._b_lo, self._b_hi]}

    @classmethod
    def from_dict(cls, values: dict) -> "BlendingFunction":
        """Create a BlendingFunction from its serialized form."""
        match values:
            case {"shape": shape, "support": [b_lo, b_hi]}:
                return cls(shape, (b_lo, b_hi))
            case _:
                raise BlendingFunctionError(f"expected {{'shape': ..., 'support': [lo, hi]}}, found {values!r}")


@overload
def eval_blending(beta: BlendingFunction, x: float) -> float: ...


@overload
def eval_blending(beta: BlendingFunction, x: np.ndarray) -> np.ndarray: ...


def eval_blending(beta: BlendingFunction, x: float | np.ndarray) -> float | np.ndarray:
    """Evaluate the blending function.

    Parameters
    ----------
    beta:
        The blending function.
    x:
        A point or an array of points.

    Returns
    -------
    Values in `[0, 1]`: exactly 1 left of the support and exactly 0 right of it.

    Examples
    --------
    ```python
    eval_blending(BlendingFunction("cubic_smooth", (0.4, 0.6)), 0.45)  # 0.84375
    ```
    """
    support = beta.support
    t = np.clip((np.asarray(x, dtype=float) - support.lo) / support.width, 0.0, 1.0)
    match beta.shape:
        case BlendingShape.PIECEWISE_CONSTANT:
            values = np.where(t < 0.5, 1.0, 0.0)
        case BlendingShape.PIECEWISE_LINEAR:
            values = 1.0 - t
        case BlendingShape.CUBIC_SMOOTH:
            values = 1.0 - t * t * (3.0 - 2.0 * t)
    if np.ndim(values) == 0:
        return float(values)
    return values
