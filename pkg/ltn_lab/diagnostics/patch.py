"""Polynomial patch tests and ghost forces."""

import logging

import numpy as np

from ltn_lab.diagnostics.tolerances import patch_tolerance
from ltn_lab.models.reports import GhostForceReport, PatchTestReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.registry import ConstFunction, load_for, patch_polynomial
from ltn_lab.solvers.dispatch import operator_residual, solve

_logger = logging.getLogger(__name__)


def run_patch_test(config: RunConfig, degree: int) -> PatchTestReport:
    """Solve with a polynomial exact solution and report how well it is reproduced.

    The solution is `u = 1 + x + ... + x^degree`. The load `f = -c u''` and the data `g = u` on every
    constrained node come from that one polynomial, `c` being the local coefficient of the kernel.

    Parameters
    ----------
    config:
        The run; its load and data are replaced.
    degree:
        1, 2 or 3.

    Returns
    -------
    PatchTestReport
        The nodal sup-norm error, the sup-norm of `b - A u` on unconstrained rows, and the pass flag
        against the method's tolerance.

    Raises
    ------
    InvalidDegreeError

    Examples
    --------
    ```python
    report = run_patch_test(RunConfig.from_file("configs/splice_linear_patch.json"), 1)
    report.passed
    ```
    """
    tolerance, strict = patch_tolerance(config.method.method, degree)
    if not strict:
        _logger.warning(dict(method=str(config.method.method), degree=degree, tolerance=tolerance, strict=False))
    polynomial = patch_polynomial(degree)
    patch_config = config.with_data(load_for(polynomial, config.kernel.local_coefficient), polynomial)
    field = solve(patch_config)
    exact = polynomial(field.x)
    residual = operator_residual(patch_config, exact)
    report = PatchTestReport(
        str(config.method.method),
        degree,
        float(np.max(np.abs(field.values - exact))),
        float(np.nanmax(np.abs(residual), initial=0.0)),
        tolerance,
        strict,
    )
    _logger.info(dict(kind=report.kind, method=report.method, degree=degree, sup_error=report.sup_error, passed=report.passed))
    return report


def compute_ghost_force(config: RunConfig) -> GhostForceReport:
    """Apply the method's operator to the linear field `u = 1 + x` without load.

    The field is `A u` on unconstrained rows and NaN on constrained nodes; it is the negated residual of the
    linear patch test.

    Examples
    --------
    ```python
    report = compute_ghost_force(config)
    report.sup_norm, report.location
    ```
    """
    linear = patch_polynomial(1)
    ghost_config = config.with_data(ConstFunction(0.0), linear)
    ghost_force = -operator_residual(ghost_config, linear(ghost_config.grid.x))
    report = GhostForceReport(str(config.method.method), ghost_config.grid.x, ghost_force)
    _logger.info(dict(kind=report.kind, method=report.method, sup_norm=report.sup_norm, location=report.location))
    return report
