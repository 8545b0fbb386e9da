"""Optimization-based coupling: a reduced least-squares problem over virtual-boundary controls."""

import logging
from collections.abc import Callable

import numpy as np
import scipy.linalg

from ltn_lab.errors import ReducedSystemSingular
from ltn_lab.models.decomposition import Decomposition
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.solvers.direct import ReducedSolver
from ltn_lab.solvers.subproblems import OverlapSplit

_logger = logging.getLogger(__name__)


def solve_optimization_based(
    grid: Grid1D,
    decomposition: Decomposition,
    kernel: Kernel,
    f: Callable[..., np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
) -> SolutionField:
    """Minimize the overlap mismatch `J = 1/2 ||u_nl - u_l||^2` over the virtual-boundary values.

    The controls are the nodal values on the nonlocal virtual layer `omega_v` and at the local virtual
    boundary `gamma_v`. Both subproblem solutions are affine in their controls, so the reduced objective
    is built by solving once per unit control and minimized through its normal equations.

    Parameters
    ----------
    grid:
        The grid.
    decomposition:
        An overlap decomposition.
    kernel:
        The kernel of the nonlocal model.
    f:
        Load, called as `f(x, h)`.
    g:
        Data on `omega_p` and at `x_hi`.

    Returns
    -------
    SolutionField
        The glued field, with `objective` set to the optimal `J*` and `blocks` holding the two
        subproblem fields and the controls.

    Raises
    ------
    ReducedSystemSingular
        The reduced Hessian is not positive definite, typically because the overlap is too small.

    Examples
    --------
    ```python
    field = solve_optimization_based(grid, decomposition, Kernel("constant", 0.05), f, g)
    field.objective
    ```
    """
    split = OverlapSplit(grid, decomposition, kernel, f, g)
    nonlocal_solver = ReducedSolver(split.nonlocal_system())
    local_solver = ReducedSolver(split.local_system())
    m = split.m

    nonlocal_values = np.array(nonlocal_solver.system.values)
    local_values = np.array(local_solver.system.values)
    base_nonlocal = nonlocal_solver.solve()
    base_local = local_solver.solve()

    # unit controls: the data block is zero, one column per control
    nonlocal_unit = np.zeros((len(nonlocal_values), m))
    nonlocal_unit[m:, :] = np.eye(m)
    response_nonlocal = nonlocal_solver.solve(np.zeros((nonlocal_solver.system.n, m)), nonlocal_unit)
    local_unit = np.zeros((len(local_values), 1))
    local_unit[0, 0] = 1.0
    response_local = local_solver.solve(np.zeros((local_solver.system.n, 1)), local_unit)
    _logger.debug(dict(controls=m + 1, overlap_nodes=len(split.overlap)))

    overlap_local = split.overlap - split.i_lo
    sensitivity = np.hstack([response_nonlocal[split.overlap], -response_local[overlap_local]])
    weights = split.overlap_weights()
    base_mismatch = split.mismatch(base_nonlocal, base_local)
    hessian = sensitivity.T @ (weights[:, None] * sensitivity)
    gradient = sensitivity.T @ (weights * base_mismatch)
    try:
        factors = scipy.linalg.cho_factor(hessian)
    except scipy.linalg.LinAlgError as err:
        raise ReducedSystemSingular(f"the reduced Hessian is not positive definite: {err}") from err
    controls = scipy.linalg.cho_solve(factors, -gradient)

    u_nonlocal = base_nonlocal + response_nonlocal @ controls[:m]
    u_local = base_local + response_local[:, 0] * controls[m]
    mismatch = split.mismatch(u_nonlocal, u_local)
    objective = 0.5 * float(mismatch @ (weights * mismatch))
    _logger.info(dict(method="obm", objective=objective))
    return SolutionField(
        grid,
        split.glue(u_nonlocal, u_local),
        "obm",
        split.constrained(),
        blocks={"u_nonlocal": u_nonlocal, "u_local": u_local, "controls": controls},
        objective=objective,
    )


def evaluate_objective(
    grid: Grid1D,
    decomposition: Decomposition,
    kernel: Kernel,
    f: Callable[..., np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    controls: np.ndarray,
) -> float:
    """Re-solve both subproblems at given controls and return `J`."""
    split = OverlapSplit(grid, decomposition, kernel, f, g)
    nonlocal_solver = ReducedSolver(split.nonlocal_system())
    local_solver = ReducedSolver(split.local_system())
    nonlocal_values = np.array(nonlocal_solver.system.values)
    nonlocal_values[split.m :] = controls[: split.m]
    local_values = np.array(local_solver.system.values)
    local_values[0] = controls[split.m]
    mismatch = split.mismatch(nonlocal_solver.solve(values=nonlocal_values), local_solver.solve(values=local_values))
    return 0.5 * float(mismatch @ (split.overlap_weights() * mismatch))
