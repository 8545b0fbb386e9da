"""Arlequin saddle-point assembly on an overlapping decomposition."""

import logging
from collections.abc import Callable

import numpy as np
import scipy.linalg

from ltn_lab.errors import IllPosedCoupling, ModeMismatch, OverlapTooSmall, RankDeficientCoupling
from ltn_lab.models.blending import BlendingFunction, BlendingShape, eval_blending
from ltn_lab.models.decomposition import Decomposition, DecompositionMode
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel, Stencil, discrete_moments
from ltn_lab.models.systems import SaddleSystem
from ltn_lab.operators.reference import bond_energy, cell_energy

RANK_TOLERANCE = 1e-10

_logger = logging.getLogger(__name__)


def overlap_nodes(grid: Grid1D, decomposition: Decomposition) -> tuple[int, int]:
    """Indices `(i_lo, i_hi)` of the nodes at the two ends of the overlap."""
    overlap = decomposition.interval("omega_o")
    return grid.index_of(overlap.lo), grid.index_of(overlap.hi)


def coupling_matrix(grid: Grid1D, n_overlap: int, kappa0: float, kappa1: float) -> np.ndarray:
    """Discrete `kappa0 int psi v + kappa1 int psi' v'` on the overlap with P1 functions.

    Rows are multipliers, columns overlap nodes. With `kappa0 = 0` the constant multiplier is dropped.
    """
    h = grid.h
    element = kappa0 * h / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]]) + kappa1 / h * np.array([[1.0, -1.0], [-1.0, 1.0]])
    form = np.zeros((n_overlap, n_overlap))
    for c in range(n_overlap - 1):
        form[c : c + 2, c : c + 2] += element
    if kappa0 == 0.0:
        form = form[1:]
    return form


def check_rank(coupling: np.ndarray) -> int:
    """Numerical row rank of the coupling matrix from a column-pivoted QR factorization.

    Raises
    ------
    RankDeficientCoupling
    """
    r = scipy.linalg.qr(coupling.T, mode="r", pivoting=True)[0]
    diagonal = np.abs(np.diag(r))
    rank = int(np.sum(diagonal > RANK_TOLERANCE * diagonal[0])) if diagonal.size else 0
    if rank < coupling.shape[0]:
        raise RankDeficientCoupling(f"the coupling form has rank {rank} on {coupling.shape[0]} multipliers")
    return rank


def bond_weights(grid: Grid1D, stencil: Stencil, beta: BlendingFunction, i_lo: int, i_hi: int) -> np.ndarray:
    """Bond weights `beta((x_p + x_q) / 2)` indexed by left end `p` and offset, shape `(n, m)`.

    Bonds starting left of the overlap weigh 1; bonds ending right of it or leaving the grid weigh 0.
    """
    n, m = grid.n_nodes, stencil.m
    weight = np.zeros((n, m))
    for k in range(1, m + 1):
        p = np.arange(0, n - k)
        weight[p, k - 1] = eval_blending(beta, 0.5 * (grid.x[p] + grid.x[p + k]))
        weight[p[p < i_lo], k - 1] = 1.0
        weight[p[p + k > i_hi], k - 1] = 0.0
    return weight


def local_cell_weights(stencil: Stencil, weight: np.ndarray, local_coefficient: float) -> np.ndarray:
    """Cell weights `alpha1_c = 1 - h^2 / c sum_k c_k k sum_{w_b: bonds of length k over cell c}`.

    On a linear field the `alpha1`-weighted cells and the weighted bonds then exert opposite forces node by
    node, as the modulus `C(x)` does in the morphing energy.
    """
    n = weight.shape[0]
    cover = np.zeros(n - 1)
    for k, c_k in zip(stencil.offsets, stencil.coefficients):
        for j in range(k):
            # bond (c - j, c - j + k) covers cell c
            cells = np.arange(j, n - 1)
            cover[cells] += c_k * k * weight[cells - j, k - 1]
    return 1.0 - stencil.h**2 / local_coefficient * cover


def assemble_arlequin_saddle(
    grid: Grid1D,
    decomposition: Decomposition,
    kernel: Kernel,
    beta: BlendingFunction | None = None,
    kappa0: float = 1.0,
    kappa1: float = 1.0,
    f: Callable[..., np.ndarray] | None = None,
    g: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SaddleSystem:
    """Assemble the Arlequin saddle system.

    The nonlocal field `u2` lives on `[x_lo, o_hi]` with bonds weighted by `beta((x + x') / 2)`, the local
    field `u1` on `[o_lo, x_hi]` with cells weighted by `alpha1` from `local_cell_weights`, so that the two
    stiffnesses add up to the full one on linear fields. The multiplier couples them through
    `kappa0 int psi v + kappa1 int psi' v'` over the overlap; `kappa0 > 0` lets it carry the net force
    handed over from one field to the other.

    Parameters
    ----------
    grid:
        The grid.
    decomposition:
        An overlap decomposition whose overlap is at least `2 delta` wide.
    kernel:
        The kernel.
    beta:
        Nonlocal bond weight `alpha2`; by default piecewise linear across the overlap pulled in by
        `delta / 2` at both ends.
    kappa0, kappa1:
        Non-negative coupling parameters; `kappa1` must be positive.
    f:
        Load, split as `h alpha1 f` and `h (1 - alpha1) f` with `alpha1` averaged onto the nodes.
    g:
        Boundary data on the layer `omega_p` and at `x_hi`.

    Raises
    ------
    IllPosedCoupling
        `kappa1 = 0` or a negative parameter.
    OverlapTooSmall
    ModeMismatch
    RankDeficientCoupling
    """
    if kappa0 < 0.0 or kappa1 < 0.0:
        raise IllPosedCoupling(f"coupling parameters must be non-negative, found kappa0={kappa0}, kappa1={kappa1}")
    if kappa1 == 0.0:
        raise IllPosedCoupling("kappa1 = 0: the well-posedness of the coupling is not established")
    if decomposition.mode is not DecompositionMode.OVERLAP:
        raise ModeMismatch(f"arlequin needs an overlap decomposition, found {decomposition.mode}")
    overlap = decomposition.interval("omega_o")
    if overlap.width < 2.0 * kernel.delta * (1.0 - 1e-12):
        raise OverlapTooSmall(f"arlequin needs an overlap of at least 2 delta, found {overlap.width}")
    half = 0.5 * kernel.delta
    beta = beta or BlendingFunction(BlendingShape.PIECEWISE_LINEAR, (overlap.lo + half, overlap.hi - half))

    n, h = grid.n_nodes, grid.h
    i_lo, i_hi = overlap_nodes(grid, decomposition)
    dofs1 = np.arange(i_lo, n)
    dofs2 = np.arange(0, i_hi + 1)
    local_grid, nonlocal_grid = grid.subgrid(i_lo, n), grid.subgrid(0, i_hi + 1)

    stencil = discrete_moments(kernel, grid)
    weight = bond_weights(grid, stencil, beta, i_lo, i_hi)
    alpha1_cells = local_cell_weights(stencil, weight, kernel.local_coefficient)
    k1 = cell_energy(local_grid, np.arange(len(dofs1) - 1), alpha1_cells[i_lo:] * kernel.local_coefficient).hessian()
    k2 = bond_energy(nonlocal_grid, stencil, weight=weight[: i_hi + 1]).hessian()

    form = coupling_matrix(grid, i_hi - i_lo + 1, kappa0, kappa1)
    check_rank(form)
    c1 = np.zeros((form.shape[0], len(dofs1)))
    c1[:, : i_hi - i_lo + 1] = form
    c2 = np.zeros((form.shape[0], len(dofs2)))
    c2[:, i_lo:] = form

    alpha1 = 0.5 * (np.concatenate([[0.0], alpha1_cells]) + np.concatenate([alpha1_cells, [1.0]]))
    load = np.zeros(n) if f is None else np.asarray(f(grid.x, h), dtype=float)
    l1 = h * alpha1[dofs1] * load[dofs1]
    l2 = h * (1.0 - alpha1[dofs2]) * load[dofs2]

    data = (lambda x: np.zeros_like(x)) if g is None else g
    layer = decomposition.indices(grid, "omega_p")
    constrained1 = {len(dofs1) - 1: float(data(grid.x[[n - 1]])[0])}
    constrained2 = dict(zip(layer.tolist(), np.asarray(data(grid.x[layer]), dtype=float).tolist()))
    _logger.debug(dict(n1=len(dofs1), n2=len(dofs2), multipliers=form.shape[0], kappa0=kappa0, kappa1=kappa1))
    return SaddleSystem(grid, k1, k2, c1, c2, l1, l2, dofs1, dofs2, constrained1, constrained2, alpha1)
