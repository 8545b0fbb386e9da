"""Discrete nonlocal, local and coupled energies, and positive semidefiniteness of energy Hessians."""

import logging

import numpy as np

from ltn_lab.errors import MethodSpecError
from ltn_lab.models.kernel import discrete_moments, horizon_steps
from ltn_lab.models.reports import EnergyReport, PositiveSemidefiniteReport
from ltn_lab.models.run_config import RunConfig
from ltn_lab.models.systems import EnergyForm
from ltn_lab.operators.coupled import assemble_coupled_operator
from ltn_lab.operators.reference import bond_energy, cell_energy

_logger = logging.getLogger(__name__)


def energy_window(n_nodes: int, m: int) -> tuple[int, int]:
    """First and last node whose full stencil lies inside a grid of `n_nodes` nodes."""
    return m, n_nodes - 1 - m


def windowed_energy(energy: EnergyForm, u: np.ndarray, window: tuple[int, int]) -> float:
    """Node energies summed with trapezoid weights over the window, plus the cells inside it."""
    first, last = window
    weights = np.ones(last - first + 1)
    weights[[0, -1]] = 0.5
    nodes = float(weights @ energy.node_energy(u)[first : last + 1])
    cells = float(np.sum(energy.cell_energy(u)[first:last]))
    return nodes + cells


def method_energy(config: RunConfig) -> EnergyForm | None:
    """The energy whose Hessian the method assembles, `None` when the operator is not a Hessian."""
    if not config.method.method.assembled:
        return None
    return assemble_coupled_operator(config.grid, config.decomposition, config.method, config.kernel).energy


def compute_energy(config: RunConfig, u: np.ndarray) -> EnergyReport:
    """Evaluate the discrete energies of a field over the nodes with a full stencil.

    Parameters
    ----------
    config:
        The run supplying the grid, kernel and method.
    u:
        Nodal values on the full grid.

    Returns
    -------
    EnergyReport
        The nonlocal energy `1/4 sum_i w_i sum_j c_j (u_{i+j} - u_i)^2 h`, the local energy
        `1/2 sum_cells c (du/h)^2 h` and, for methods assembled from an energy, that energy on the same window.

    ??? note "Agreement on linear fields"
        For `u = x` the three energies coincide for the QNL method, because its energy equals the nonlocal
        energy on nonlocal nodes and the local energy on local cells.

    Examples
    --------
    ```python
    compute_energy(config, config.grid.x).local_energy
    ```
    """
    grid = config.grid
    u = np.asarray(u, dtype=float)
    window = energy_window(grid.n_nodes, horizon_steps(config.kernel.delta, grid.h))
    nonlocal_energy = windowed_energy(bond_energy(grid, discrete_moments(config.kernel, grid)), u, window)
    local_energy = windowed_energy(
        cell_energy(grid, np.arange(grid.n_nodes - 1), config.kernel.local_coefficient), u, window
    )
    energy = method_energy(config)
    coupled_energy = None if energy is None else windowed_energy(energy, u, window)
    report = EnergyReport(str(config.method.method), nonlocal_energy, local_energy, coupled_energy)
    _logger.info(dict(kind=report.kind, **{key: value for key, value in report.build().items() if key != "kind"}))
    return report


def check_positive_semidefinite(config: RunConfig, samples: int = 100, seed: int = 0) -> PositiveSemidefiniteReport:
    """Sample `u^T K u` for the method's energy Hessian `K` with standard normal `u`.

    Raises
    ------
    MethodSpecError
        The method is not assembled from an energy.
    """
    energy = method_energy(config)
    if energy is None:
        raise MethodSpecError(f"{config.method.method} is not assembled from an energy")
    stiffness = energy.hessian()
    asymmetry = float(np.max(np.abs(stiffness - stiffness.T)))
    vectors = np.random.default_rng(seed).standard_normal((stiffness.shape[0], samples))
    forms = np.einsum("is,ij,js->s", vectors, stiffness, vectors)
    report = PositiveSemidefiniteReport(str(config.method.method), samples, seed, float(np.min(forms)), asymmetry)
    _logger.info(dict(kind=report.kind, method=report.method, passed=report.passed))
    return report
