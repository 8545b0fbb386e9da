"""Scaled nonlocal diffusion kernels, peridynamic micromoduli and their normalized discrete stencils."""

import logging
import math
from enum import Enum

import numpy as np
from typing_extensions import Self

from ltn_lab.errors import HorizonNotResolved, KernelError, ZeroBond
from ltn_lab.models.grid import Grid1D

SUPPORT_TOLERANCE = 1e-12
RATIO_TOLERANCE = 1e-9

_logger = logging.getLogger(__name__)


class KernelFamily(str, Enum):
    """Enumerates the radial kernel profiles."""

    CONSTANT = "constant"
    INVERSE_DISTANCE = "inverse_distance"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value

    def build(self) -> str:
        """Return the KernelFamily for serialization."""
        return str(self)


class Model(str, Enum):
    """Enumerates the nonlocal models."""

    DIFFUSION = "diffusion"
    PERIDYNAMIC = "peridynamic"

    def __str__(self) -> str:
        """Return the value as a string rather than a string of the full enum."""
        return self.value

    def build(self) -> str:
        """Return the Model for serialization."""
        return str(self)


class Kernel:
    """A compactly supported kernel scaled to its local limit.

    Parameters
    ----------
    family:
        Radial profile of the kernel.
    delta:
        The horizon.
    model:
        Diffusion kernels satisfy `int xi^2 gamma = 2`, peridynamic micromoduli satisfy `1/2 int lambda xi^4 = E`.
    youngs_modulus:
        `E`, used by the peridynamic model only.

    Examples
    --------
    ```python
    Kernel("constant", 0.05)
    ```
    ```python
    Kernel("constant", 0.05, model="peridynamic", youngs_modulus=2.0)
    ```
    """

    def __init__(
        self,
        family: KernelFamily | str,
        delta: float,
        model: Model | str = Model.DIFFUSION,
        youngs_modulus: float = 1.0,
    ) -> None:
        try:
            self._family = KernelFamily(family)
            self._model = Model(model)
        except ValueError as err:
            raise KernelError(str(err)) from err
        self._delta = float(delta)
        self._youngs_modulus = float(youngs_modulus)
        self.validate()

    def __repr__(self) -> str:
        """Class representation."""
        return (
            f"Kernel(family={self._family}, delta={self._delta}, model={self._model}, "
            f"youngs_modulus={self._youngs_modulus})"
        )

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @property
    def family(self) -> KernelFamily:
        """The radial profile."""
        return self._family

    @property
    def delta(self) -> float:
        """The horizon."""
        return self._delta

    @property
    def model(self) -> Model:
        """The nonlocal model."""
        return self._model

    @property
    def youngs_modulus(self) -> float:
        """Young's modulus `E`."""
        return self._youngs_modulus

    @property
    def local_coefficient(self) -> float:
        """Coefficient of the local limit: 1 for diffusion, `E` for peridynamics."""
        return self._youngs_modulus if self._model is Model.PERIDYNAMIC else 1.0

    def with_delta(self, delta: float) -> "Kernel":
        """A copy of the kernel with another horizon."""
        return Kernel(self._family, delta, self._model, self._youngs_modulus)

    def validate(self) -> Self:
        """Validate the horizon and modulus.

        Raises
        ------
        KernelError
        """
        if not (math.isfinite(self._delta) and self._delta > 0.0):
            raise KernelError(f"kernel horizon must be positive, found delta={self._delta}")
        if not (math.isfinite(self._youngs_modulus) and self._youngs_modulus > 0.0):
            raise KernelError(f"youngs_modulus must be positive, found {self._youngs_modulus}")
        return self

    def build(self) -> dict[str, str | float]:
        """Format the Kernel for serialization."""
        return {
            "family": self._family.build(),
            "model": self._model.build(),
            "delta": self._delta,
            "youngs_modulus": self._youngs_modulus,
        }


def kernel_profile(kernel: Kernel, xi: np.ndarray, delta: float | None = None) -> np.ndarray:
    """Evaluate the scaled kernel for horizon `delta` (the kernel's own by default) without truncating its support.

    Bond lengths must be non-zero.
    """
    delta = kernel.delta if delta is None else delta
    r = np.abs(np.asarray(xi, dtype=float))
    e = kernel.youngs_modulus
    match (kernel.model, kernel.family):
        case (Model.DIFFUSION, KernelFamily.CONSTANT):
            return np.full_like(r, 3.0 / delta**3)
        case (Model.DIFFUSION, KernelFamily.INVERSE_DISTANCE):
            return (2.0 / delta**2) / r
        case (Model.PERIDYNAMIC, KernelFamily.CONSTANT):
            return np.full_like(r, 5.0 * e / delta**5)
        case (Model.PERIDYNAMIC, KernelFamily.INVERSE_DISTANCE):
            return (4.0 * e / delta**4) / r
    raise KernelError(f"no profile for {kernel!r}")


def eval_kernel(kernel: Kernel, xi: float) -> float:
    """Evaluate a kernel at bond length `xi`.

    Parameters
    ----------
    kernel:
        The kernel.
    xi:
        Bond length; the kernel is even in `xi`.

    Returns
    -------
    `gamma(|xi|)` for diffusion or the micromodulus `lambda(|xi|)` for peridynamics; zero outside the horizon.

    Raises
    ------
    ZeroBond
        An inverse-distance kernel evaluated at `xi = 0`.

    Examples
    --------
    ```python
    eval_kernel(Kernel("constant", 0.2), 0.1)  # 375.0
    ```
    """
    if xi == 0.0 and kernel.family is KernelFamily.INVERSE_DISTANCE:
        raise ZeroBond("an inverse-distance kernel is singular at xi = 0")
    if abs(xi) > kernel.delta * (1.0 + SUPPORT_TOLERANCE):
        return 0.0
    if xi == 0.0:
        return float(kernel_profile(kernel, np.array([1.0]))[0])
    return float(kernel_profile(kernel, np.array([xi]))[0])


class Stencil:
    """Normalized bond coefficients of a symmetric stencil `{-m h, ..., -h, h, ..., m h}`.

    `coefficients[k - 1]` multiplies `u(x + k h) - u(x)` and `u(x - k h) - u(x)` in a nonlocal row,
    so a row reads `sum_k c_k (u_{i+k} + u_{i-k} - 2 u_i)`.
    """

    def __init__(
        self,
        h: float,
        weights: np.ndarray,
        kernel_values: np.ndarray,
        coefficients: np.ndarray,
    ) -> None:
        self._h = h
        self._weights = weights
        self._kernel_values = kernel_values
        self._coefficients = coefficients
        for array in (self._weights, self._kernel_values, self._coefficients):
            array.flags.writeable = False

    def __repr__(self) -> str:
        """Class representation."""
        return f"Stencil(m={self.m}, h={self._h})"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"Stencil(m={self.m}, h={self._h})"

    @property
    def m(self) -> int:
        """Stencil half-width in grid steps."""
        return len(self._coefficients)

    @property
    def h(self) -> float:
        """Grid spacing."""
        return self._h

    @property
    def offsets(self) -> np.ndarray:
        """Positive offsets `1, ..., m`."""
        return np.arange(1, self.m + 1)

    @property
    def xi(self) -> np.ndarray:
        """Positive bond lengths `h, ..., m h`."""
        return self.offsets * self._h

    @property
    def weights(self) -> np.ndarray:
        """Normalized quadrature weights on the positive offsets."""
        return self._weights

    @property
    def coefficients(self) -> np.ndarray:
        """Effective bond coefficients on the positive offsets."""
        return self._coefficients

    def moment(self, order: int) -> float:
        """Discrete moment `sum_j w_j kernel(xi_j) xi_j^order` over the full symmetric stencil.

        Moments are summed in mirrored pairs, so odd moments are exactly zero.
        """
        terms = self._weights * self._kernel_values * self.xi**order
        mirrored = self._weights * self._kernel_values * (-self.xi) ** order
        return float(np.sum(terms + mirrored))

    def moments(self, orders: tuple[int, ...] = (0, 1, 2, 3, 4)) -> dict[int, float]:
        """The moment table."""
        return {order: self.moment(order) for order in orders}


def horizon_steps(delta: float, h: float) -> int:
    """Return `m = delta / h`.

    Raises
    ------
    HorizonNotResolved
        `delta / h < 2`.
    KernelError
        `delta / h` is not an integer.
    """
    ratio = delta / h
    m = round(ratio)
    if ratio < 2.0 - RATIO_TOLERANCE:
        raise HorizonNotResolved(f"the horizon spans {ratio:.6g} grid steps, at least 2 are required")
    if abs(ratio - m) > RATIO_TOLERANCE * max(1.0, ratio):
        raise KernelError(f"delta / h must be an integer, found delta={delta}, h={h}")
    return m


def discrete_moments(kernel: Kernel, grid: Grid1D | float) -> Stencil:
    """Build the normalized discrete stencil of a kernel on a grid.

    Trapezoid weights (`h` inside, `h/2` at `|j| = m`) are rescaled by one positive factor so that the
    discrete second moment is exactly 2 for diffusion, or the weighted fourth moment is exactly `2E` for
    peridynamics.

    Parameters
    ----------
    kernel:
        The kernel.
    grid:
        The grid, or its spacing.

    Returns
    -------
    Stencil

    Raises
    ------
    HorizonNotResolved
        `delta = m h` with `m < 2`.
    KernelError
        `delta / h` is not an integer.

    Examples
    --------
    ```python
    stencil = discrete_moments(Kernel("constant", 0.05), 0.0125)
    stencil.moment(2)  # 2.0
    ```
    """
    h = grid.h if isinstance(grid, Grid1D) else float(grid)
    m = horizon_steps(kernel.delta, h)
    xi = np.arange(1, m + 1) * h
    weights = np.full(m, h)
    weights[-1] = 0.5 * h
    kernel_values = kernel_profile(kernel, xi)
    weights = weights * normalization(kernel, weights, kernel_values, xi)
    stencil = Stencil(h, weights, kernel_values, effective_coefficients(kernel, weights, kernel_values, xi))
    _logger.debug(dict(kernel=repr(kernel), m=m, h=h))
    return stencil


def effective_coefficients(kernel: Kernel, weights: np.ndarray, kernel_values: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Bond coefficients `w_j gamma(xi_j)` for diffusion or `w_j lambda(xi_j) xi_j^2` for peridynamics."""
    if kernel.model is Model.PERIDYNAMIC:
        return weights * kernel_values * xi**2
    return weights * kernel_values


def normalization(kernel: Kernel, weights: np.ndarray, kernel_values: np.ndarray, xi: np.ndarray) -> float:
    """The factor making `sum_{+-j} c_j xi_j^2` equal to twice the local coefficient."""
    raw = 2.0 * float(np.sum(effective_coefficients(kernel, weights, kernel_values, xi) * xi**2))
    if raw <= 0.0:
        raise HorizonNotResolved("the stencil carries no bonds")
    return 2.0 * kernel.local_coefficient / raw
