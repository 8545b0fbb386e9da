"""Direct solves of assembled linear systems."""

import logging

import numpy as np
import scipy.linalg

from ltn_lab.errors import SingularSystem
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.systems import LinearSystem

RESIDUAL_TOLERANCE = 1e-10

_logger = logging.getLogger(__name__)


def _banded(matrix: np.ndarray, half_bandwidth: int) -> np.ndarray:
    """Diagonal-ordered form of a band matrix as expected by `scipy.linalg.solve_banded`."""
    n = matrix.shape[0]
    bands = np.zeros((2 * half_bandwidth + 1, n))
    for offset in range(-half_bandwidth, half_bandwidth + 1):
        diagonal = np.diagonal(matrix, offset)
        row = half_bandwidth - offset
        if offset >= 0:
            bands[row, offset:] = diagonal
        else:
            bands[row, : n + offset] = diagonal
    return bands


def check_residual(matrix: np.ndarray, rhs: np.ndarray, u: np.ndarray, tolerance: float = RESIDUAL_TOLERANCE) -> float:
    """Return `||A u - b||_inf`.

    Raises
    ------
    SingularSystem
        The residual exceeds `tolerance (||A||_inf ||u||_inf + ||b||_inf)` or `u` is not finite.
    """
    if not np.all(np.isfinite(u)):
        raise SingularSystem("the solve produced non-finite values")
    residual = float(np.max(np.abs(matrix @ u - rhs))) if len(u) else 0.0
    bound = tolerance * (np.linalg.norm(matrix, np.inf) * np.max(np.abs(u), initial=0.0) + np.max(np.abs(rhs), initial=0.0))
    if residual > bound:
        raise SingularSystem(f"residual {residual:.3e} exceeds {bound:.3e}")
    return residual


class ReducedSolver:
    """A factorization of the unconstrained block of a system, reusable for many right-hand sides.

    Constrained columns are eliminated: `A_ff u_f = b_f - A_fc g`.

    Raises
    ------
    SingularSystem
        The unconstrained block is singular.
    """

    def __init__(self, system: LinearSystem) -> None:
        self._system = system
        self._free = system.free
        self._constrained = system.constrained
        matrix = system.matrix
        self._coupling = matrix[np.ix_(self._free, self._constrained)]
        block = matrix[np.ix_(self._free, self._free)]
        try:
            self._factors = scipy.linalg.lu_factor(block, check_finite=True)
        except (scipy.linalg.LinAlgError, ValueError) as err:
            raise SingularSystem(str(err)) from err
        if np.any(np.diag(self._factors[0]) == 0.0):
            raise SingularSystem("the unconstrained block is singular")

    def __repr__(self) -> str:
        """Class representation."""
        return f"ReducedSolver({self._system!r})"

    @property
    def system(self) -> LinearSystem:
        """The factorized system."""
        return self._system

    def solve(self, rhs: np.ndarray | None = None, values: np.ndarray | None = None) -> np.ndarray:
        """Solve with another right-hand side on free rows and other constrained values.

        Either argument defaults to the system's own. Arrays may carry one column per case.
        """
        rhs = self._system.rhs if rhs is None else rhs
        values = self._system.values if values is None else values
        reduced = rhs[self._free] - self._coupling @ values
        u = np.zeros((self._system.n,) + np.shape(values)[1:])
        u[self._free] = scipy.linalg.lu_solve(self._factors, reduced)
        u[self._constrained] = values
        return u


def solve_linear_system(system: LinearSystem) -> SolutionField:
    """Solve an assembled, constrained system.

    Constrained columns are eliminated and the free block is solved with a banded LU factorization when its
    half-bandwidth is below `n / 4`, or a dense LU factorization otherwise.

    Parameters
    ----------
    system:
        A square system with its constraint rows applied.

    Returns
    -------
    SolutionField
        Constrained nodes carry exactly their imposed values.

    Raises
    ------
    SingularSystem
        The factorization fails or the residual check `||A u - b|| <= 1e-10 (||A|| ||u|| + ||b||)` fails.

    Examples
    --------
    ```python
    field = solve_linear_system(system)
    ```
    """
    free, constrained = system.free, system.constrained
    block = system.matrix[np.ix_(free, free)]
    reduced = system.rhs[free] - system.matrix[np.ix_(free, constrained)] @ system.values
    bandwidth = LinearSystem.bandwidth_of(block)
    try:
        if bandwidth < len(free) / 4:
            solution = scipy.linalg.solve_banded((bandwidth, bandwidth), _banded(block, bandwidth), reduced)
        else:
            solution = scipy.linalg.solve(block, reduced)
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise SingularSystem(str(err)) from err
    u = np.zeros(system.n)
    u[free] = solution
    u[constrained] = system.values
    residual = check_residual(system.matrix, system.rhs, u)
    _logger.info(dict(method=system.method, n=system.n, bandwidth=bandwidth, residual=residual))
    return SolutionField(system.grid, u, system.method or "", constrained)
