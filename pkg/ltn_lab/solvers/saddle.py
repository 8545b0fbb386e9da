"""KKT solve of the Arlequin saddle-point system."""

import logging

import numpy as np
import scipy.linalg

from ltn_lab.errors import RankDeficientCoupling, SingularSystem
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.systems import SaddleSystem
from ltn_lab.solvers.direct import check_residual

KKT_TOLERANCE = 1e-9

_logger = logging.getLogger(__name__)


def reconstruct(saddle: SaddleSystem, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Glue the two fields: `u2` left of the overlap, `u1` right of it, `alpha1 u1 + (1 - alpha1) u2` on it."""
    grid = saddle.grid
    u = np.zeros(grid.n_nodes)
    first1, last2 = saddle.dofs1[0], saddle.dofs2[-1]
    u[:first1] = u2[:first1]
    u[last2 + 1 :] = u1[last2 + 1 - first1 :]
    overlap = np.arange(first1, last2 + 1)
    alpha1 = saddle.alpha1[overlap]
    u[overlap] = alpha1 * u1[overlap - first1] + (1.0 - alpha1) * u2[overlap]
    return u


def solve_saddle_system(saddle: SaddleSystem) -> SolutionField:
    """Solve the Arlequin KKT system and reconstruct a single field.

    Dirichlet data are eliminated symmetrically, so the reduced KKT matrix stays symmetric.

    Returns
    -------
    SolutionField
        `blocks` holds `u1`, `u2` and `phi`; the values are the reconstructed field.

    Raises
    ------
    RankDeficientCoupling
        The KKT matrix is singular.
    """
    matrix, rhs = saddle.kkt()
    n1 = len(saddle.dofs1)
    constrained = {**saddle.constrained1, **{n1 + i: v for i, v in saddle.constrained2.items()}}
    indices = np.array(sorted(constrained), dtype=int)
    values = np.array([constrained[i] for i in indices.tolist()])
    reduced_rhs = rhs - matrix[:, indices] @ values
    reduced = np.array(matrix)
    reduced[indices, :] = 0.0
    reduced[:, indices] = 0.0
    reduced[indices, indices] = 1.0
    reduced_rhs[indices] = values
    try:
        solution = scipy.linalg.solve(reduced, reduced_rhs, assume_a="sym")
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise RankDeficientCoupling(f"the KKT system is singular: {err}") from err
    try:
        check_residual(reduced, reduced_rhs, solution, KKT_TOLERANCE)
    except SingularSystem as err:
        raise RankDeficientCoupling(str(err)) from err

    n2 = len(saddle.dofs2)
    u1, u2, phi = solution[:n1], solution[n1 : n1 + n2], solution[n1 + n2 :]
    u = reconstruct(saddle, u1, u2)
    layer = np.array(sorted(saddle.constrained2), dtype=int)
    constrained_nodes = np.concatenate([layer, saddle.dofs1[sorted(saddle.constrained1)]])
    _logger.info(dict(method="arlequin", n=len(solution), multipliers=len(phi)))
    return SolutionField(
        saddle.grid,
        u,
        "arlequin",
        constrained_nodes,
        blocks={"u1": u1, "u2": u2, "phi": phi},
    )


def coupling_defect(saddle: SaddleSystem, field: SolutionField) -> float:
    """Sup-norm of `C1 u1 - C2 u2` over the multiplier basis."""
    _, _, c1, c2 = saddle.blocks
    blocks = field.blocks
    return float(np.max(np.abs(c1 @ blocks["u1"] - c2 @ blocks["u2"]), initial=0.0))
