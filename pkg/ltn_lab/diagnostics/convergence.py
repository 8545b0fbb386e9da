"""Convergence of coupled solutions to the local solution as the horizon shrinks."""

import logging
import math

import numpy as np
import scipy.integrate

from ltn_lab.errors import InvalidConvergenceStudy
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.reports import ConvergenceReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.registry import NamedFunction, load_for
from ltn_lab.solvers.dispatch import solve
from ltn_lab.solvers.fanout import map_cases

_logger = logging.getLogger(__name__)

MIN_DELTAS = 3


def l2_error(field: SolutionField, reference: NamedFunction) -> float:
    """Trapezoid-rule L2 norm of the nodal error over the whole grid."""
    error = field.values - reference(field.x)
    return math.sqrt(scipy.integrate.trapezoid(error**2, field.x))


def h1_error(field: SolutionField, reference: NamedFunction) -> float:
    """Forward-difference H1 seminorm error: the nodal slope on each cell against `reference'` at its left node."""
    h = field.grid.h
    slopes = np.diff(field.values) / h
    return math.sqrt(float(np.sum(h * (slopes - reference.derivative(field.x[:-1])) ** 2)))


def check_deltas(deltas: list[float]) -> None:
    """Require at least three positive, strictly decreasing horizons.

    Raises
    ------
    InvalidConvergenceStudy
    """
    if len(deltas) < MIN_DELTAS:
        raise InvalidConvergenceStudy(f"a convergence study needs at least {MIN_DELTAS} deltas, found {len(deltas)}")
    if any(delta <= 0.0 for delta in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise InvalidConvergenceStudy(f"deltas must be positive and strictly decreasing, found {deltas}")


def run_convergence_study(
    config: RunConfig,
    deltas: list[float] | None = None,
    manufactured: NamedFunction | None = None,
    threads: int = 0,
    progress_bar: bool = False,
) -> ConvergenceReport:
    """Solve a manufactured problem for a decreasing list of horizons and fit the error rates.

    Every case keeps `delta / h`, the left end of the physical domain and the interfaces of `config`; only the
    boundary layer and the grid follow `delta`. The reference is the local solution `u_ref` itself.

    Parameters
    ----------
    config:
        The template run.
    deltas:
        Horizons, strictly decreasing; defaults to the run's `diagnostic.deltas`.
    manufactured:
        The exact local solution; defaults to the run's `diagnostic.manufactured`, `sin(pi x)` by default.
    threads:
        Worker threads for the independent cases.
    progress_bar:
        Show a progress bar.

    Returns
    -------
    ConvergenceReport
        One row per horizon and the least-squares log-log slopes.

    Raises
    ------
    InvalidConvergenceStudy
        Fewer than three horizons, or not strictly decreasing.

    Examples
    --------
    ```python
    report = run_convergence_study(config, [0.1, 0.05, 0.025, 0.0125])
    report.l2_slope
    ```
    """
    deltas = list(config.diagnostic.deltas or []) if deltas is None else list(deltas)
    check_deltas(deltas)
    reference = config.diagnostic.manufactured if manufactured is None else manufactured
    load = load_for(reference, config.kernel.local_coefficient)

    def case(delta: float) -> tuple[float, float]:
        field = solve(config.with_delta(delta).with_data(load, reference))
        errors = l2_error(field, reference), h1_error(field, reference)
        _logger.debug(dict(delta=delta, n=field.grid.n_nodes, l2_error=errors[0], h1_error=errors[1]))
        return errors

    errors = map_cases(case, deltas, threads, progress_bar, desc="Convergence study")
    report = ConvergenceReport(
        str(config.method.method), deltas, [error[0] for error in errors], [error[1] for error in errors]
    )
    _logger.info(dict(kind=report.kind, method=report.method, l2_slope=report.l2_slope, h1_slope=report.h1_slope))
    return report
