"""Reference operators: the local second-difference model and the nonlocal bond model."""

import logging

import numpy as np

from ltn_lab.errors import MissingBoundaryLayer, RegionTooSmall
from ltn_lab.models.grid import Grid1D, Interval
from ltn_lab.models.horizon import HorizonFunction, variable_stencils
from ltn_lab.models.kernel import Kernel, Model, Stencil, discrete_moments
from ltn_lab.models.systems import EnergyForm, OperatorRows

_logger = logging.getLogger(__name__)


def region_nodes(grid: Grid1D, region: Interval | np.ndarray) -> np.ndarray:
    """Node indices of a region given as an interval or as indices."""
    match region:
        case Interval():
            return grid.indices_in(region)
        case _:
            return np.asarray(region, dtype=int)


def local_coefficient(model: Model | Kernel, youngs_modulus: float = 1.0) -> float:
    """Coefficient of the local model: 1 for diffusion, `E` for peridynamics."""
    match model:
        case Kernel():
            return model.local_coefficient
        case Model.PERIDYNAMIC:
            return youngs_modulus
        case _:
            return 1.0


def assemble_local_operator(
    grid: Grid1D,
    region: Interval | np.ndarray,
    model: Model | Kernel = Model.DIFFUSION,
    youngs_modulus: float = 1.0,
) -> OperatorRows:
    """Assemble the centered second difference on the interior nodes of a region.

    Parameters
    ----------
    grid:
        The grid.
    region:
        The region, as an interval or node indices.
    model:
        A `Model`, or a `Kernel` whose local coefficient is used.
    youngs_modulus:
        `E` when `model` is `Model.PERIDYNAMIC`.

    Returns
    -------
    Rows `c (u_{i-1} - 2 u_i + u_{i+1}) / h^2` on region nodes that have both grid neighbours.

    Raises
    ------
    RegionTooSmall
        The region holds fewer than 3 nodes.
    """
    nodes = region_nodes(grid, region)
    if len(nodes) < 3:
        raise RegionTooSmall(f"a local region needs at least 3 nodes, found {len(nodes)}")
    rows = nodes[(nodes >= 1) & (nodes <= grid.n_nodes - 2)]
    scale = local_coefficient(model, youngs_modulus) / grid.h**2
    matrix = np.zeros((len(rows), grid.n_nodes))
    local = np.arange(len(rows))
    matrix[local, rows - 1] = scale
    matrix[local, rows] = -2.0 * scale
    matrix[local, rows + 1] = scale
    return OperatorRows(grid.n_nodes, rows, matrix)


def assemble_nonlocal_operator(
    grid: Grid1D,
    region: Interval | np.ndarray,
    kernel: Kernel,
    horizon: HorizonFunction | None = None,
    floor: float | None = None,
) -> OperatorRows:
    """Assemble nonlocal rows `sum_k c_k (u_{i+k} + u_{i-k} - 2 u_i)` on a region.

    With a horizon function every row uses its own normalized stencil for `delta(x_i)`.

    Parameters
    ----------
    grid:
        The grid.
    region:
        The rows to assemble.
    kernel:
        The kernel; its horizon fixes the stencil width.
    horizon:
        Optional varying horizon.
    floor:
        Smallest discrete horizon for a varying horizon, `h` by default.

    Raises
    ------
    MissingBoundaryLayer
        A row's neighbourhood leaves the grid.
    HorizonNotResolved
        The horizon spans fewer than 2 grid steps.

    Examples
    --------
    ```python
    rows = assemble_nonlocal_operator(grid, np.arange(4, 81), Kernel("constant", 0.05))
    ```
    """
    nodes = region_nodes(grid, region)
    stencil = discrete_moments(kernel, grid)
    m = stencil.m
    if len(nodes) and (nodes.min() - m < 0 or nodes.max() + m > grid.n_nodes - 1):
        raise MissingBoundaryLayer(f"nonlocal rows on nodes [{nodes.min()}, {nodes.max()}] need {m} nodes on each side")
    if horizon is None:
        coefficients = np.tile(stencil.coefficients, (len(nodes), 1))
    else:
        coefficients = variable_stencils(kernel, horizon, grid.x[nodes], grid.h, grid.h if floor is None else floor)
    matrix = np.zeros((len(nodes), grid.n_nodes))
    local = np.arange(len(nodes))
    for k in range(1, m + 1):
        matrix[local, nodes + k] += coefficients[:, k - 1]
        matrix[local, nodes - k] += coefficients[:, k - 1]
    matrix[local, nodes] = -2.0 * coefficients.sum(axis=1)
    _logger.debug(dict(rows=len(nodes), m=m, varying=horizon is not None))
    return OperatorRows(grid.n_nodes, nodes, matrix)


def bond_energy(
    grid: Grid1D,
    stencil: Stencil,
    keep: np.ndarray | None = None,
    weight: np.ndarray | None = None,
) -> EnergyForm:
    """Energy `sum kappa_k (u_q - u_p)^2` with `kappa_k = h c_k / 2` over bonds `p < q = p + k` inside the grid.

    Parameters
    ----------
    keep:
        Boolean mask over the left endpoint `p`; all bonds by default.
    weight:
        Optional per-bond factor as a function of `(p, q)` indices, shape `(n, m)` indexed `[p, k - 1]`.
    """
    n = grid.n_nodes
    ps, qs, kappas = [], [], []
    for k in range(1, stencil.m + 1):
        p = np.arange(0, n - k)
        kappa = np.full(len(p), 0.5 * grid.h * stencil.coefficients[k - 1])
        if weight is not None:
            kappa = kappa * weight[p, k - 1]
        mask = kappa != 0.0
        if keep is not None:
            mask &= keep[p]
        ps.append(p[mask])
        qs.append(p[mask] + k)
        kappas.append(kappa[mask])
    return EnergyForm(n, bonds=(np.concatenate(ps), np.concatenate(qs), np.concatenate(kappas)))


def cell_energy(grid: Grid1D, cells: np.ndarray, coefficient: float | np.ndarray) -> EnergyForm:
    """Energy `sum kappa_c (u_{c+1} - u_c)^2` with `kappa_c = coefficient / (2 h)`."""
    kappa = np.broadcast_to(np.asarray(coefficient, dtype=float) / (2.0 * grid.h), cells.shape)
    mask = kappa != 0.0
    return EnergyForm(grid.n_nodes, cells=(cells[mask], kappa[mask]))
