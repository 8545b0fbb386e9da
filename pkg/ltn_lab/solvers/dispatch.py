"""Route a run configuration to the assembler and solver of its method."""

import logging
from collections.abc import Callable

import numpy as np

from ltn_lab.models.decomposition import Region
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.method_spec import Method, MethodSpec
from ltn_lab.models.reports import CompareReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.operators.arlequin import assemble_arlequin_saddle
from ltn_lab.operators.coupled import assemble_problem
from ltn_lab.solvers.direct import solve_linear_system
from ltn_lab.solvers.optimization import solve_optimization_based
from ltn_lab.solvers.partitioned import solve_partitioned_robin
from ltn_lab.solvers.saddle import solve_saddle_system
from ltn_lab.solvers.subproblems import OverlapSplit

_logger = logging.getLogger(__name__)


def solve(config: RunConfig) -> SolutionField:
    """Solve the configured problem with the configured method.

    Parameters
    ----------
    config:
        A validated run configuration.

    Returns
    -------
    SolutionField
        Labelled with the region of every node.

    Raises
    ------
    LtnLabValidationError
        The problem cannot be assembled.
    LtnLabSolverError
        The solve failed.

    Examples
    --------
    ```python
    field = solve(RunConfig.from_file("configs/splice_linear_patch.json"))
    field.to_frame()
    ```
    """
    grid, decomposition, kernel = config.grid, config.decomposition, config.kernel
    solver = config.solver
    match config.method.method:
        case Method.OBM:
            field = solve_optimization_based(grid, decomposition, kernel, config.f, config.g)
        case Method.PARTITIONED:
            field = solve_partitioned_robin(
                grid,
                decomposition,
                kernel,
                config.f,
                config.g,
                r1=solver.r1,
                r2=solver.r2,
                mode=solver.mode,
                tol=solver.tol,
                max_iter=solver.max_iter,
                sweeps=solver.sweeps,
            )
        case Method.ARLEQUIN:
            saddle = assemble_arlequin_saddle(
                grid,
                decomposition,
                kernel,
                config.method.blending,
                solver.kappa0,
                solver.kappa1,
                config.f,
                config.g,
            )
            field = solve_saddle_system(saddle)
        case _:
            field = solve_linear_system(assemble_problem(grid, decomposition, config.method, kernel, config.f, config.g))
    return field.with_labels([str(label) for label in decomposition.labels(grid)])


def operator_residual(config: RunConfig, u: np.ndarray, f: Callable[..., np.ndarray] | None = None) -> np.ndarray:
    """`b - A u` of the configured method on its unconstrained rows, NaN on constrained nodes.

    For the optimization-based and partitioned methods the operator is the nonlocal one left of `o_hi` and
    the local one from `o_hi` on. For the Arlequin method it is `-(K1 u + K2 u) / h` over both blocks.

    Parameters
    ----------
    config:
        A validated run configuration.
    u:
        Nodal values on the full grid.
    f:
        Load replacing the configured one.
    """
    grid, decomposition, kernel = config.grid, config.decomposition, config.kernel
    load = config.f if f is None else f
    match config.method.method:
        case Method.OBM | Method.PARTITIONED:
            return OverlapSplit(grid, decomposition, kernel, load, config.g).residual(u)
        case Method.ARLEQUIN:
            saddle = assemble_arlequin_saddle(
                grid,
                decomposition,
                kernel,
                config.method.blending,
                config.solver.kappa0,
                config.solver.kappa1,
                load,
                config.g,
            )
            k1, k2, _, _ = saddle.blocks
            l1, l2 = saddle.loads
            stiffness = np.zeros(grid.n_nodes)
            stiffness[saddle.dofs1] += k1 @ u[saddle.dofs1] - l1
            stiffness[saddle.dofs2] += k2 @ u[saddle.dofs2] - l2
            residual = stiffness / grid.h
            residual[saddle.dofs1[list(saddle.constrained1)]] = np.nan
            residual[saddle.dofs2[list(saddle.constrained2)]] = np.nan
            return residual
        case _:
            system = assemble_problem(grid, decomposition, config.method, kernel, load, config.g)
            residual = system.residual(u)
            residual[system.constrained] = np.nan
            return residual


def compare_methods(config: RunConfig, other: MethodSpec) -> CompareReport:
    """Solve the configured problem with two methods and compare them away from the overlap.

    Parameters
    ----------
    config:
        A validated run configuration.
    other:
        The second method; it must fit the same decomposition.

    Returns
    -------
    CompareReport
        The sup-norm difference over every node outside `omega_o`.
    """
    field = solve(config)
    other_field = solve(config.with_method(other))
    keep = np.array([label != str(Region.OVERLAP) for label in field.labels or []], dtype=bool)
    difference = float(np.max(np.abs(field.values[keep] - other_field.values[keep]), initial=0.0))
    report = CompareReport(str(config.method.method), str(other.method), difference, int(keep.sum()))
    _logger.info(dict(kind=report.kind, method=report.method, other=report.other, sup_difference=difference))
    return report
