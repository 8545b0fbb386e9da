"""Sampled check of the discrete weak maximum principle."""

import logging

import numpy as np

from ltn_lab.errors import MethodSpecError
from ltn_lab.models.reports import MaximumPrincipleReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.operators.coupled import assemble_problem
from ltn_lab.registry import ConstFunction
from ltn_lab.solvers.direct import ReducedSolver

_logger = logging.getLogger(__name__)


def check_maximum_principle(config: RunConfig, samples: int = 100, seed: int = 0) -> MaximumPrincipleReport:
    """Solve the unloaded problem for random constraint data and check the bounds of the solution.

    Each sample draws `g` uniformly from `[-1, 1]` on every constrained node. The violation of a sample is
    `max(max u - max g, min g - min u)` over unconstrained nodes.

    Parameters
    ----------
    config:
        An assembled method, typically QNL.
    samples:
        Number of data vectors.
    seed:
        Seed of the generator.

    Returns
    -------
    MaximumPrincipleReport
        The worst violation over all samples.

    Raises
    ------
    MethodSpecError
        The method is solved by a dedicated solver.

    Examples
    --------
    ```python
    check_maximum_principle(config, samples=100, seed=0).passed
    ```
    """
    if not config.method.method.assembled:
        raise MethodSpecError(f"{config.method.method} has no single assembled operator")
    zero = ConstFunction(0.0)
    system = assemble_problem(config.grid, config.decomposition, config.method, config.kernel, zero, zero)
    solver = ReducedSolver(system)
    data = np.random.default_rng(seed).uniform(-1.0, 1.0, (len(system.constrained), samples))
    rhs = np.zeros((system.n, samples))
    u = solver.solve(rhs, data)[system.free]
    violations = np.maximum(u.max(axis=0) - data.max(axis=0), data.min(axis=0) - u.min(axis=0))
    report = MaximumPrincipleReport(str(config.method.method), samples, seed, float(np.max(violations)))
    _logger.info(dict(kind=report.kind, method=report.method, worst_violation=report.worst_violation))
    return report
