"""Assembly of the coupled operators that live in a single linear system."""

import logging
from collections.abc import Callable

import numpy as np

from ltn_lab.errors import MethodSpecError, MissingBoundaryLayer
from ltn_lab.models.blending import BlendingFunction, eval_blending
from ltn_lab.models.decomposition import Decomposition
from ltn_lab.models.grid import Grid1D
from ltn_lab.models.horizon import HorizonFunction, variable_stencils
from ltn_lab.models.kernel import Kernel, discrete_moments
from ltn_lab.models.method_spec import Method, MethodSpec
from ltn_lab.models.systems import EnergyForm, LinearSystem, OperatorRows
from ltn_lab.operators.constraints import apply_dirichlet_constraints
from ltn_lab.operators.reference import (
    assemble_local_operator,
    assemble_nonlocal_operator,
    bond_energy,
    cell_energy,
)

_logger = logging.getLogger(__name__)

Assembly = tuple[OperatorRows, EnergyForm | None]


def _horizon(spec: MethodSpec, kernel: Kernel) -> HorizonFunction:
    if spec.horizon is None:
        raise MethodSpecError(f"{spec.method} requires a horizon function")
    if spec.horizon.delta_max != kernel.delta:
        raise MethodSpecError(f"horizon delta_max={spec.horizon.delta_max} differs from the kernel horizon {kernel.delta}")
    return spec.horizon


def _blending(spec: MethodSpec) -> BlendingFunction:
    if spec.blending is None:
        raise MethodSpecError(f"{spec.method} requires a blending function")
    return spec.blending


def boundary_nodes(grid: Grid1D, decomposition: Decomposition, method: Method) -> tuple[np.ndarray, np.ndarray]:
    """Constrained nodes `(left, right)`: the layer `omega_p`, and the last node or a right layer of width delta."""
    left = decomposition.indices(grid, "omega_p")
    if method is Method.NONLOCAL_ONLY:
        right = np.arange(grid.n_nodes - len(left), grid.n_nodes)
    else:
        right = np.array([grid.n_nodes - 1])
    return left, right


def free_nodes(grid: Grid1D, decomposition: Decomposition, method: Method) -> np.ndarray:
    """Nodes whose rows hold the operator."""
    left, right = boundary_nodes(grid, decomposition, method)
    return np.arange(left.max() + 1 if left.size else 0, right.min())


def _energy_rows(grid: Grid1D, free: np.ndarray, energy: EnergyForm) -> Assembly:
    operator = -energy.hessian() / grid.h
    return OperatorRows(grid.n_nodes, free, operator[free]), energy


def _split(free: np.ndarray, grid: Grid1D, decomposition: Decomposition, name: str) -> np.ndarray:
    return np.intersect1d(free, decomposition.indices(grid, name))


def _local_only(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    free = free_nodes(grid, decomposition, spec.method)
    energy = cell_energy(grid, np.arange(grid.n_nodes - 1), kernel.local_coefficient)
    return assemble_local_operator(grid, free, kernel), energy


def _nonlocal_only(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    free = free_nodes(grid, decomposition, spec.method)
    energy = bond_energy(grid, discrete_moments(kernel, grid))
    return assemble_nonlocal_operator(grid, free, kernel), energy


def _splice(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    free = free_nodes(grid, decomposition, spec.method)
    nonlocal_rows = assemble_nonlocal_operator(grid, _split(free, grid, decomposition, "omega_nl"), kernel)
    local_rows = assemble_local_operator(grid, _split(free, grid, decomposition, "omega_l"), kernel)
    return OperatorRows.merge(nonlocal_rows, local_rows), None


def _blended_rows(grid: Grid1D, nodes: np.ndarray, spec: MethodSpec, kernel: Kernel) -> OperatorRows:
    """Blended rows: beta-weighted bond sum minus its second-order Taylor expansion plus the full local term."""
    stencil = discrete_moments(kernel, grid)
    m, h = stencil.m, grid.h
    if len(nodes) and (nodes.min() - m < 0 or nodes.max() + m > grid.n_nodes - 1):
        raise MissingBoundaryLayer(f"blended rows on nodes [{nodes.min()}, {nodes.max()}] need {m} nodes on each side")
    beta = eval_blending(_blending(spec), grid.x)
    offsets = np.concatenate([-stencil.offsets[::-1], stencil.offsets])
    coefficients = np.concatenate([stencil.coefficients[::-1], stencil.coefficients])
    xi = offsets * h
    matrix = np.zeros((len(nodes), grid.n_nodes))
    for r, i in enumerate(nodes):
        neighbours = i + offsets
        bond = coefficients * 0.5 * (beta[i] + beta[neighbours])
        matrix[r, neighbours] += bond
        matrix[r, i] -= bond.sum()
        first = -0.5 * float(np.sum(coefficients * beta[neighbours] * xi))
        second = kernel.local_coefficient - 0.5 * float(np.sum(bond * xi**2))
        matrix[r, i + 1] += first / (2.0 * h) + second / h**2
        matrix[r, i - 1] += -first / (2.0 * h) + second / h**2
        matrix[r, i] -= 2.0 * second / h**2
    return OperatorRows(grid.n_nodes, nodes, matrix)


def _blended(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    free = free_nodes(grid, decomposition, spec.method)
    return (
        OperatorRows.merge(
            assemble_nonlocal_operator(grid, _split(free, grid, decomposition, "omega_nl"), kernel),
            _blended_rows(grid, _split(free, grid, decomposition, "omega_t"), spec, kernel),
            assemble_local_operator(grid, _split(free, grid, decomposition, "omega_l"), kernel),
        ),
        None,
    )


def qnl_energy(grid: Grid1D, decomposition: Decomposition, kernel: Kernel) -> EnergyForm:
    """Quasi-nonlocal energy.

    Bonds whose left end lies at or left of `x*` keep their nonlocal energy. Every other bond of length
    `k h` is replaced by `k` times the sum of its squared cell increments, which puts weight
    `a_c = h/2 sum_k c_k k min(k, c - s)` on cell `c > s`, where `s` is the node at `x*`.
    """
    stencil = discrete_moments(kernel, grid)
    s = grid.index_of(decomposition.interval("gamma").lo)
    if s + stencil.m > grid.n_nodes - 1:
        raise MissingBoundaryLayer(f"the node at x* needs {stencil.m} nodes on its right")
    keep = np.arange(grid.n_nodes) <= s
    cells = np.arange(s + 1, grid.n_nodes - 1)
    k = stencil.offsets
    depth = np.minimum(k[None, :], (cells - s)[:, None])
    weights = 0.5 * grid.h * (depth * (stencil.coefficients * k)[None, :]).sum(axis=1)
    return bond_energy(grid, stencil, keep=keep) + EnergyForm(grid.n_nodes, cells=(cells, weights))


def _qnl(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    return _energy_rows(grid, free_nodes(grid, decomposition, spec.method), qnl_energy(grid, decomposition, kernel))


def morphing_energy(grid: Grid1D, spec: MethodSpec, kernel: Kernel) -> EnergyForm:
    """Morphing energy: bonds weighted by `(beta_p + beta_q) / 2` and cells carrying the modulus `C(x)`.

    `C(x) = (1 - beta(x)) c + 1/4 sum_j c_j (beta(x) - beta(x + xi_j)) xi_j^2` at cell midpoints.
    """
    stencil = discrete_moments(kernel, grid)
    n, m = grid.n_nodes, stencil.m
    blending = _blending(spec)
    beta = eval_blending(blending, grid.x)
    weight = np.zeros((n, m))
    for k in range(1, m + 1):
        weight[: n - k, k - 1] = 0.5 * (beta[: n - k] + beta[k:])
    midpoints = 0.5 * (grid.x[:-1] + grid.x[1:])
    beta_mid = eval_blending(blending, midpoints)
    modulus = (1.0 - beta_mid) * kernel.local_coefficient
    for c_k, xi in zip(stencil.coefficients, stencil.xi):
        for shifted in (midpoints + xi, midpoints - xi):
            modulus = modulus + 0.25 * c_k * (beta_mid - eval_blending(blending, shifted)) * xi**2
    return bond_energy(grid, stencil, weight=weight) + cell_energy(grid, np.arange(n - 1), modulus)


def _morphing(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    return _energy_rows(grid, free_nodes(grid, decomposition, spec.method), morphing_energy(grid, spec, kernel))


def shrinking_horizon_energy(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> EnergyForm:
    """Variable-horizon energy `1/4 sum gamma(x, x') (u(x') - u(x))^2` left of the interface, local cells right of it.

    Nodes left of the interface carry per-node normalized stencils for `delta(x)` floored at `h`, nodes at or right
    of it the three-point local stencil `c / h^2`. A bond `p < q` gets `kappa = h (c_{p, q-p} + c_{q, q-p}) / 4`, so
    a bond crossing the interface is weighted by both of its ends.
    """
    hf = _horizon(spec, kernel)
    gamma = grid.index_of(decomposition.interval("gamma").lo)
    n = grid.n_nodes
    stencils = variable_stencils(kernel, hf, grid.x[:gamma], grid.h, max(hf.delta_min, grid.h))
    m = stencils.shape[1]
    if gamma + m > n:
        raise MissingBoundaryLayer(f"bonds from the interface need {m} nodes on its right")
    padded = np.zeros((n, m))
    padded[:gamma] = stencils
    padded[gamma:, 0] = kernel.local_coefficient / grid.h**2
    ps, qs, kappas = [], [], []
    for k in range(1, m + 1):
        p = np.arange(0, min(gamma, n - k))
        kappa = 0.25 * grid.h * (padded[p, k - 1] + padded[p + k, k - 1])
        mask = kappa != 0.0
        ps.append(p[mask])
        qs.append(p[mask] + k)
        kappas.append(kappa[mask])
    bonds = EnergyForm(n, bonds=(np.concatenate(ps), np.concatenate(qs), np.concatenate(kappas)))
    return bonds + cell_energy(grid, np.arange(gamma, n - 1), kernel.local_coefficient)


def _shrinking_horizon(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    energy = shrinking_horizon_energy(grid, decomposition, spec, kernel)
    return _energy_rows(grid, free_nodes(grid, decomposition, spec.method), energy)


def partial_stress_matrix(grid: Grid1D, nodes: np.ndarray, spec: MethodSpec, kernel: Kernel) -> np.ndarray:
    """Rows mapping nodal values to `sigma_j = 1/2 sum_k c_jk k h (u_{j+k} - u_{j-k})` at `nodes`.

    Stencils are normalized per node for `delta(x_j)` floored at `2 h`.

    Raises
    ------
    MissingBoundaryLayer
        A node has fewer than `m` neighbours on one side.
    """
    hf = _horizon(spec, kernel)
    floor = max(hf.delta_min, 2.0 * grid.h)
    m = round(hf.delta_max / grid.h)
    nodes = np.asarray(nodes, dtype=int)
    if len(nodes) and (nodes.min() - m < 0 or nodes.max() + m > grid.n_nodes - 1):
        raise MissingBoundaryLayer(f"partial stress on [{nodes.min()}, {nodes.max()}] needs {m} nodes per side")
    k = np.arange(1, m + 1)
    stencils = variable_stencils(kernel, hf, grid.x[nodes], grid.h, floor)
    matrix = np.zeros((len(nodes), grid.n_nodes))
    for r, j in enumerate(nodes):
        matrix[r, j + k] += 0.5 * stencils[r] * k * grid.h
        matrix[r, j - k] -= 0.5 * stencils[r] * k * grid.h
    return matrix


def partial_stress(
    grid: Grid1D, u: np.ndarray, spec: MethodSpec, kernel: Kernel, nodes: np.ndarray | None = None
) -> np.ndarray:
    """The partial stress `sigma_j` of the field `u`, on every node with a full neighbourhood by default.

    A quadratic `u = a x^2` gives `sigma_j = 2 a c x_j` with `c` the local coefficient, whatever `delta(x)`.

    Examples
    --------
    ```python
    partial_stress(grid, grid.x**2, MethodSpec("partial_stress", horizon=horizon), kernel)
    ```
    """
    if nodes is None:
        m = round(_horizon(spec, kernel).delta_max / grid.h)
        nodes = np.arange(m, grid.n_nodes - m)
    return partial_stress_matrix(grid, nodes, spec, kernel) @ np.asarray(u, dtype=float)


def partial_stress_rows(grid: Grid1D, nodes: np.ndarray, spec: MethodSpec, kernel: Kernel) -> OperatorRows:
    """Rows `(sigma_{i+1} - sigma_{i-1}) / (2 h)` of the partial stress."""
    nodes = np.asarray(nodes, dtype=int)
    plus = partial_stress_matrix(grid, nodes + 1, spec, kernel)
    minus = partial_stress_matrix(grid, nodes - 1, spec, kernel)
    return OperatorRows(grid.n_nodes, nodes, (plus - minus) / (2.0 * grid.h))


def _partial_stress(grid: Grid1D, decomposition: Decomposition, spec: MethodSpec, kernel: Kernel) -> Assembly:
    free = free_nodes(grid, decomposition, spec.method)
    return (
        OperatorRows.merge(
            assemble_nonlocal_operator(grid, _split(free, grid, decomposition, "omega_nl"), kernel),
            partial_stress_rows(grid, _split(free, grid, decomposition, "omega_t"), spec, kernel),
            assemble_local_operator(grid, _split(free, grid, decomposition, "omega_l"), kernel),
        ),
        None,
    )


_ASSEMBLERS: dict[Method, Callable[[Grid1D, Decomposition, MethodSpec, Kernel], Assembly]] = {
    Method.LOCAL_ONLY: _local_only,
    Method.NONLOCAL_ONLY: _nonlocal_only,
    Method.SPLICE: _splice,
    Method.BLENDED: _blended,
    Method.QNL: _qnl,
    Method.MORPHING: _morphing,
    Method.SHRINKING_HORIZON: _shrinking_horizon,
    Method.PARTIAL_STRESS: _partial_stress,
}


def assemble_coupled_operator(
    grid: Grid1D,
    decomposition: Decomposition,
    spec: MethodSpec,
    kernel: Kernel,
    f: Callable[..., np.ndarray] | None = None,
) -> LinearSystem:
    """Assemble the operator of a reference model or single-system coupling method.

    Rows of the constrained nodes are left empty for `apply_dirichlet_constraints`. The right-hand side
    is `-f(x_i)` on operator rows, for the problem `-L u = f`.

    Parameters
    ----------
    grid:
        The grid.
    decomposition:
        Its decomposition; the geometry must fit the method.
    spec:
        The method.
    kernel:
        The kernel.
    f:
        Optional load, called as `f(x, h)`.

    Returns
    -------
    LinearSystem
        Carries the method's `EnergyForm` when the operator is an energy Hessian.

    Raises
    ------
    ModeMismatch
    MissingBoundaryLayer
    MethodSpecError
        The method is solved by a dedicated solver and has no single operator.
    """
    if spec.method not in _ASSEMBLERS:
        raise MethodSpecError(f"{spec.method} couples two systems and has no single assembled operator")
    spec.check_mode(decomposition)
    rows, energy = _ASSEMBLERS[spec.method](grid, decomposition, spec, kernel)
    rhs = np.zeros(grid.n_nodes)
    if f is not None:
        rhs[rows.rows] = -np.asarray(f(grid.x, grid.h))[rows.rows]
    _logger.debug(dict(method=str(spec.method), rows=len(rows.rows), n=grid.n_nodes))
    return LinearSystem(grid, rows.dense(), rhs, method=str(spec.method), energy=energy)


def assemble_problem(
    grid: Grid1D,
    decomposition: Decomposition,
    spec: MethodSpec,
    kernel: Kernel,
    f: Callable[..., np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
) -> LinearSystem:
    """Assemble the operator with load `f` and impose `g` on the boundary layer and the right boundary."""
    system = assemble_coupled_operator(grid, decomposition, spec, kernel, f)
    left, right = boundary_nodes(grid, decomposition, spec.method)
    system = apply_dirichlet_constraints(system, left, g, delta=kernel.delta)
    return apply_dirichlet_constraints(system, right, g)
