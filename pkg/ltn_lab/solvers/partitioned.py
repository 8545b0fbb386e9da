"""Partitioned Robin iteration between the nonlocal and the local subproblem of an overlap."""

import logging
import math
from collections.abc import Callable

import numpy as np

from ltn_lab.errors import InvalidRobin, NotConverged
from ltn_lab.models.decomposition import Decomposition
from ltn_lab.models.fields import IterationTrace, SolutionField
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.models.reports import RobinSweepReport
from ltn_lab.models.run_config import IterationMode, RunConfig
from ltn_lab.models.systems import OperatorRows
from ltn_lab.solvers.direct import ReducedSolver
from ltn_lab.solvers.fanout import map_cases
from ltn_lab.solvers.subproblems import OverlapSplit

_logger = logging.getLogger(__name__)


def check_robin(r1: float, r2: float) -> None:
    """Validate a pair of Robin coefficients.

    Raises
    ------
    InvalidRobin
        A coefficient is negative or NaN, or both are zero.
    """
    for name, value in (("r1", r1), ("r2", r2)):
        if math.isnan(value) or value < 0.0:
            raise InvalidRobin(f"{name} must be non-negative, found {value}")
    if r1 == 0.0 and r2 == 0.0:
        raise InvalidRobin("r1 and r2 are both zero: pure flux exchange leaves the iteration undetermined")


def transmission_rows(
    n_nodes: int, nodes: np.ndarray, robin: float, coefficient: float, h: float, direction: int
) -> OperatorRows:
    """Rows of `R u + T(u)` where `T` is the outward flux by a second-order one-sided difference.

    Parameters
    ----------
    n_nodes:
        Width of the rows.
    nodes:
        Row nodes, in the indices of the field the rows apply to.
    robin:
        The Robin coefficient; `inf` gives the identity rows of a Dirichlet exchange.
    coefficient:
        The local flux coefficient `c` in `T(u) = c du/dn`.
    h:
        Grid spacing.
    direction:
        `-1` for a backward difference (outward normal pointing right), `+1` for a forward difference.

    Returns
    -------
    OperatorRows
        One row per node.
    """
    nodes = np.asarray(nodes, dtype=int)
    matrix = np.zeros((len(nodes), n_nodes))
    if math.isinf(robin):
        matrix[np.arange(len(nodes)), nodes] = 1.0
        return OperatorRows(n_nodes, nodes, matrix)
    scale = coefficient / (2.0 * h)
    for r, k in enumerate(nodes):
        matrix[r, k] += robin + 3.0 * scale
        matrix[r, k + direction] -= 4.0 * scale
        matrix[r, k + 2 * direction] += scale
    return OperatorRows(n_nodes, nodes, matrix)


def solve_partitioned_robin(
    grid: Grid1D,
    decomposition: Decomposition,
    kernel: Kernel,
    f: Callable[..., np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    r1: float = math.inf,
    r2: float = math.inf,
    mode: IterationMode | str = IterationMode.IMPLICIT,
    tol: float = 1e-12,
    max_iter: int = 500,
    sweeps: int = 1,
) -> SolutionField:
    """Alternate nonlocal and local solves exchanging Robin data until the virtual boundaries settle.

    The nonlocal subproblem imposes `R1 u + T(u) = R1 u_l + T(u_l)` on every node of `omega_v`, with `T` the
    flux pointing out of the nonlocal subdomain. The local subproblem then imposes
    `R2 u + T(u) = R2 u_nl + T(u_nl)` at `gamma_v`, using the nonlocal field just computed. The first sweep
    starts from a zero local field.

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
    r1:
        Robin coefficient of the nonlocal subproblem.
    r2:
        Robin coefficient of the local subproblem.
    mode:
        `implicit` iterates until the sup-norm change of the virtual-boundary values is at most `tol`;
        `explicit` runs exactly `sweeps` sweeps.
    tol:
        Stopping tolerance of the implicit mode.
    max_iter:
        Sweep cap of the implicit mode.
    sweeps:
        Sweep count of the explicit mode.

    Returns
    -------
    SolutionField
        The glued field with the `trace` of the iteration and both subproblem fields as `blocks`.

    Raises
    ------
    InvalidRobin
        A negative coefficient, or both zero.
    NotConverged
        The implicit mode reached `max_iter`; the exception carries the trace.

    Examples
    --------
    ```python
    field = solve_partitioned_robin(grid, decomposition, kernel, f, g, r1=math.inf, r2=math.inf)
    field.trace.iterations
    ```
    """
    check_robin(r1, r2)
    mode = IterationMode(mode)
    split = OverlapSplit(grid, decomposition, kernel, f, g)
    c, h = split.coefficient, grid.h
    n_nonlocal, n_local = split.nonlocal_grid.n_nodes, split.local_grid.n_nodes
    virtual_layer = split.virtual_layer

    nonlocal_condition = transmission_rows(n_nonlocal, virtual_layer, r1, c, h, -1)
    nonlocal_data = transmission_rows(n_local, virtual_layer - split.i_lo, r1, c, h, -1)
    local_condition = transmission_rows(n_local, np.array([0]), r2, c, h, +1)
    local_data = transmission_rows(n_nonlocal, np.array([split.i_lo]), r2, c, h, +1)

    nonlocal_solver = ReducedSolver(split.nonlocal_system(nonlocal_condition, np.zeros(split.m)))
    local_solver = ReducedSolver(split.local_system(local_condition, 0.0))
    nonlocal_rhs = np.array(nonlocal_solver.system.rhs)
    local_rhs = np.array(local_solver.system.rhs)

    trace = IterationTrace()
    u_nonlocal = np.zeros(n_nonlocal)
    u_local = np.zeros(n_local)
    n_sweeps = max_iter if mode is IterationMode.IMPLICIT else sweeps
    for _ in range(n_sweeps):
        nonlocal_rhs[virtual_layer] = nonlocal_data.apply(u_local)
        next_nonlocal = nonlocal_solver.solve(nonlocal_rhs)
        local_rhs[0] = local_data.apply(next_nonlocal)[0]
        next_local = local_solver.solve(local_rhs)

        change = max(
            float(np.max(np.abs(next_nonlocal[virtual_layer] - u_nonlocal[virtual_layer]))),
            abs(float(next_local[0] - u_local[0])),
        )
        u_nonlocal, u_local = next_nonlocal, next_local
        residual = float(np.max(np.abs(nonlocal_condition.apply(u_nonlocal) - nonlocal_data.apply(u_local))))
        trace.record(residual, float(np.max(np.abs(split.mismatch(u_nonlocal, u_local)))))
        _logger.debug(dict(iteration=trace.iterations, change=change, residual=residual))
        if change <= tol:
            trace.mark_converged()
            if mode is IterationMode.IMPLICIT:
                break

    if mode is IterationMode.IMPLICIT and not trace.converged:
        raise NotConverged(max_iter, trace)
    _logger.info(dict(method="partitioned", iterations=trace.iterations, converged=trace.converged))
    return SolutionField(
        grid,
        split.glue(u_nonlocal, u_local),
        "partitioned",
        split.constrained(),
        blocks={"u_nonlocal": u_nonlocal, "u_local": u_local},
        trace=trace,
    )


def _sweep_row(config: RunConfig, robin: float) -> tuple[int, float | None, bool]:
    solver = config.solver
    try:
        field = solve_partitioned_robin(
            config.grid,
            config.decomposition,
            config.kernel,
            config.f,
            config.g,
            r1=robin,
            r2=robin,
            tol=solver.tol,
            max_iter=solver.max_iter,
        )
    except NotConverged as err:
        _logger.warning(dict(r=robin, iterations=err.max_iter, converged=False))
        return err.trace.iterations, err.trace.mean_reduction_factor, False
    trace = field.trace
    assert trace is not None
    return trace.iterations, trace.mean_reduction_factor, True


def sweep_robin_coefficient(
    config: RunConfig, r_grid: list[float], threads: int = 0, progress_bar: bool = False
) -> RobinSweepReport:
    """Run the implicit partitioned iteration with `R1 = R2 = R` for every `R` in `r_grid`.

    Rows that reach `max_iter` are kept with `converged=False` and logged as warnings.

    Parameters
    ----------
    config:
        A run on an overlap decomposition; its `solver` section supplies `tol` and `max_iter`.
    r_grid:
        Robin coefficients, `inf` allowed.
    threads:
        Worker threads for independent rows.
    progress_bar:
        Show a progress bar.

    Returns
    -------
    RobinSweepReport
        With `r_star`, the coefficient needing the fewest iterations.

    Raises
    ------
    InvalidRobin
        A negative or zero coefficient in `r_grid`.

    Examples
    --------
    ```python
    report = sweep_robin_coefficient(config, [0.1, 1.0, 10.0, math.inf])
    report.r_star
    ```
    """
    for robin in r_grid:
        check_robin(robin, robin)
    rows = map_cases(lambda robin: _sweep_row(config, robin), r_grid, threads, progress_bar, desc="Robin sweep")
    report = RobinSweepReport(
        list(r_grid), [row[0] for row in rows], [row[1] for row in rows], [row[2] for row in rows]
    )
    _logger.info(dict(kind=report.kind, rows=len(rows), r_star=report.r_star))
    return report
