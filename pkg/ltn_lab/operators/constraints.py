"""Dirichlet and volume constraints."""

import logging
from collections.abc import Callable

import numpy as np

from ltn_lab.errors import IncompleteVolumeConstraint, InconsistentIntervals
from ltn_lab.models.grid import Interval
from ltn_lab.models.systems import LinearSystem
from ltn_lab.operators.reference import region_nodes

_logger = logging.getLogger(__name__)

LAYER_TOLERANCE = 1e-9


def apply_dirichlet_constraints(
    system: LinearSystem,
    nodes: Interval | np.ndarray,
    g: Callable[[np.ndarray], np.ndarray],
    delta: float | None = None,
) -> LinearSystem:
    """Replace the rows of constrained nodes by identity rows with right-hand side `g(x_i)`.

    Columns are left in place so the operator block stays inspectable; the solver eliminates them.

    Parameters
    ----------
    system:
        The system to constrain.
    nodes:
        The constrained region or node indices.
    g:
        Imposed values as a function of the node coordinates.
    delta:
        For a nonlocal volume constraint, the horizon the layer must cover.

    Returns
    -------
    LinearSystem

    Raises
    ------
    IncompleteVolumeConstraint
        The layer holds fewer than `delta / h` contiguous nodes.
    InconsistentIntervals
        A node lies outside the grid.

    Examples
    --------
    ```python
    apply_dirichlet_constraints(system, decomposition.interval("omega_p"), lambda x: x, delta=0.05)
    ```
    """
    grid = system.grid
    indices = region_nodes(grid, nodes)
    if indices.size and (indices.min() < 0 or indices.max() >= grid.n_nodes):
        raise InconsistentIntervals(f"constraint nodes leave the grid of {grid.n_nodes} nodes")
    if delta is not None:
        contiguous = indices.size > 0 and np.all(np.diff(np.sort(indices)) == 1)
        width = indices.size * grid.h
        if not contiguous or width < delta * (1.0 - LAYER_TOLERANCE):
            raise IncompleteVolumeConstraint(f"the constrained layer of width {width:.6g} is thinner than delta={delta}")
    values = np.asarray(g(grid.x[indices]), dtype=float)
    matrix = np.array(system.matrix)
    rhs = np.array(system.rhs)
    matrix[indices] = 0.0
    matrix[indices, indices] = 1.0
    rhs[indices] = values
    merged = dict(zip(system.constrained.tolist(), system.values.tolist()))
    merged.update(zip(indices.tolist(), values.tolist()))
    constrained = np.array(sorted(merged), dtype=int)
    _logger.debug(dict(constrained=len(indices), layer=delta is not None))
    return LinearSystem(
        grid,
        matrix,
        rhs,
        constrained,
        np.array([merged[i] for i in constrained.tolist()]),
        method=system.method,
        energy=system.energy,
    )
