"""Registry of named analytic functions used for loads, boundary data and manufactured solutions."""

import logging
import math
from abc import ABC, abstractmethod

import numpy as np
from numpy.polynomial import Polynomial

from ltn_lab.errors import UnknownFunctionError

_logger = logging.getLogger(__name__)


class NamedFunction(ABC):
    """A registry function of one variable with its first two derivatives."""

    name: str

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}({self.build()})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    def __eq__(self, other: object) -> bool:
        """Functions are equal when they serialize identically."""
        if not isinstance(other, NamedFunction):
            return NotImplemented
        return self.build() == other.build()

    def __hash__(self) -> int:
        """Hash on the serialized form."""
        return hash(repr(self.build()))

    @abstractmethod
    def __call__(self, x: np.ndarray, h: float | None = None) -> np.ndarray:
        """Sample the function at `x`; `h` is the grid spacing for grid-dependent functions."""

    @abstractmethod
    def derivative(self, x: np.ndarray) -> np.ndarray:
        """First derivative at `x`."""

    @abstractmethod
    def second_derivative(self, x: np.ndarray) -> np.ndarray:
        """Second derivative at `x`."""

    @abstractmethod
    def build(self) -> dict:
        """Format the function for serialization."""


class PolynomialFunction(NamedFunction):
    """`sum_k a_k x^k`."""

    name = "polynomial"

    def __init__(self, coefficients: list[float]) -> None:
        if len(coefficients) == 0:
            raise UnknownFunctionError("polynomial needs at least one coefficient")
        self._coefficients = [float(a) for a in coefficients]
        self._polynomial = Polynomial(self._coefficients)

    @property
    def degree(self) -> int:
        """Degree of the polynomial as written."""
        return len(self._coefficients) - 1

    def __call__(self, x: np.ndarray, h: float | None = None) -> np.ndarray:
        """Sample the polynomial."""
        return self._polynomial(np.asarray(x, dtype=float))

    def derivative(self, x: np.ndarray) -> np.ndarray:
        """First derivative."""
        return self._polynomial.deriv(1)(np.asarray(x, dtype=float))

    def second_derivative(self, x: np.ndarray) -> np.ndarray:
        """Second derivative."""
        return self._polynomial.deriv(2)(np.asarray(x, dtype=float))

    def build(self) -> dict:
        """Format the polynomial for serialization."""
        return {"name": self.name, "coefficients": list(self._coefficients)}


class SinFunction(NamedFunction):
    """`amplitude * sin(frequency * pi * x + phase)`."""

    name = "sin"

    def __init__(self, amplitude: float = 1.0, frequency: float = 1.0, phase: float = 0.0) -> None:
        self._amplitude = float(amplitude)
        self._frequency = float(frequency)
        self._phase = float(phase)
        self._k = self._frequency * math.pi

    def __call__(self, x: np.ndarray, h: float | None = None) -> np.ndarray:
        """Sample the sine."""
        return self._amplitude * np.sin(self._k * np.asarray(x, dtype=float) + self._phase)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        """First derivative."""
        return self._amplitude * self._k * np.cos(self._k * np.asarray(x, dtype=float) + self._phase)

    def second_derivative(self, x: np.ndarray) -> np.ndarray:
        """Second derivative."""
        return -self._amplitude * self._k**2 * np.sin(self._k * np.asarray(x, dtype=float) + self._phase)

    def build(self) -> dict:
        """Format the sine for serialization."""
        return {"name": self.name, "amplitude": self._amplitude, "frequency": self._frequency, "phase": self._phase}


class ConstFunction(NamedFunction):
    """A constant."""

    name = "const"

    def __init__(self, value: float = 0.0) -> None:
        self._value = float(value)

    def __call__(self, x: np.ndarray, h: float | None = None) -> np.ndarray:
        """Sample the constant."""
        return np.full(np.shape(x), self._value)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        """Zero."""
        return np.zeros(np.shape(x))

    def second_derivative(self, x: np.ndarray) -> np.ndarray:
        """Zero."""
        return np.zeros(np.shape(x))

    def build(self) -> dict:
        """Format the constant for serialization."""
        return {"name": self.name, "value": self._value}


class PointLoad(NamedFunction):
    """A discrete point load: `magnitude / h` at the node nearest `location`, zero elsewhere."""

    name = "pointload"

    def __init__(self, magnitude: float = 1.0, location: float = 0.0) -> None:
        self._magnitude = float(magnitude)
        self._location = float(location)

    def __call__(self, x: np.ndarray, h: float | None = None) -> np.ndarray:
        """Sample the load on the nodes `x` with spacing `h`."""
        x = np.asarray(x, dtype=float)
        values = np.zeros(x.shape)
        if x.size == 0:
            return values
        if h is None:
            h = float(x[1] - x[0]) if x.size > 1 else 1.0
        nearest = int(np.argmin(np.abs(x - self._location)))
        if abs(x[nearest] - self._location) <= 0.5 * h * (1.0 + 1e-12):
            values[nearest] = self._magnitude / h
        return values

    def derivative(self, x: np.ndarray) -> np.ndarray:
        """Undefined for a point load."""
        raise UnknownFunctionError("pointload has no derivative")

    def second_derivative(self, x: np.ndarray) -> np.ndarray:
        """Undefined for a point load."""
        raise UnknownFunctionError("pointload has no derivative")

    def build(self) -> dict:
        """Format the point load for serialization."""
        return {"name": self.name, "magnitude": self._magnitude, "location": self._location}


REGISTRY: dict[str, type[NamedFunction]] = {
    PolynomialFunction.name: PolynomialFunction,
    SinFunction.name: SinFunction,
    ConstFunction.name: ConstFunction,
    PointLoad.name: PointLoad,
}


def make_function(values: dict | NamedFunction) -> NamedFunction:
    """Resolve a serialized function against the registry.

    Parameters
    ----------
    values:
        `{"name": <registry name>, <parameters>...}`, or an already built function.

    Raises
    ------
    UnknownFunctionError
        The name is not registered or the parameters do not fit it.

    Examples
    --------
    ```python
    make_function({"name": "polynomial", "coefficients": [1.0, 1.0]})
    ```
    """
    match values:
        case NamedFunction():
            return values
        case {"name": str(name), **parameters}:
            if name not in REGISTRY:
                raise UnknownFunctionError(f"unknown function '{name}', expected one of {sorted(REGISTRY)}")
            try:
                return REGISTRY[name](**parameters)
            except TypeError as err:
                raise UnknownFunctionError(f"invalid parameters {parameters} for '{name}': {err}") from err
        case _:
            raise UnknownFunctionError(f"a function is written as {{'name': ..., ...}}, found {values!r}")


def patch_polynomial(degree: int) -> PolynomialFunction:
    """The patch-test polynomial `1 + x + ... + x^degree`."""
    return PolynomialFunction([1.0] * (degree + 1))


def load_for(u: NamedFunction, coefficient: float = 1.0) -> NamedFunction:
    """The load `f = -coefficient * u''` that makes `u` the solution of the local problem.

    Polynomials of degree at most three also solve every consistent nonlocal model with this load.

    Raises
    ------
    UnknownFunctionError
        `u` has no closed-form second derivative in the registry.
    """
    match u:
        case PolynomialFunction():
            curvature = u._polynomial.deriv(2) * -coefficient
            return PolynomialFunction(list(curvature.coef))
        case SinFunction():
            return SinFunction(coefficient * u._amplitude * u._k**2, u._frequency, u._phase)
        case ConstFunction():
            return ConstFunction(0.0)
        case _:
            raise UnknownFunctionError(f"no manufactured load for {u!r}")
