"""Fourier coefficients of the ordered-simplex kernel and truncation error.

A coefficient for index tuple (j_1, ..., j_k) is the iterated integral

    int_t^T psi_k phi_{j_k}(t_k) int_t^{t_k} ... int_t^{t_2} psi_1 phi_{j_1}(t_1) dt_1 ... dt_k,

with j_1 attached to the innermost level.  It is evaluated on a shared
breakpoint-aligned panel grid: each level multiplies the running
antiderivative by its weight/basis factor and integrates again, which is
exact whenever the per-panel integrands are polynomials of degree below the
node count (always true for Legendre/Haar/Walsh with polynomial weights).
The trigonometric system gets oscillation-matched panels plus a panel
doubling check.

Tensors are indexed ``values[j_1, ..., j_k]``; serialized rows iterate with
j_1 fastest-varying.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import BasisSystem, basis_matrix, breakpoints, eval_basis, parse_basis
from .errors import BasisIndexError, CapacityError, DomainError, NumericError
from .kernel import IntegralSpec, eval_weight, kernel_l2_norm_sq
from .quadrature import PanelGrid, gauss_rule, panel_grid

DEFAULT_MAX_ENTRIES = 10**8
FORMAT_VERSION = "1"


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    """Dense coefficient array for one integral spec, basis, and truncation."""

    spec: IntegralSpec
    basis: BasisSystem
    orders: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(self.orders) != self.spec.k:
            raise DomainError(f"need {self.spec.k} truncation orders, got {len(self.orders)}")
        if any(p < 0 for p in self.orders):
            raise DomainError("truncation orders must be >= 0")
        shape = tuple(p + 1 for p in self.orders)
        if self.values.shape != shape:
            raise DomainError(f"values shape {self.values.shape} != {shape}")
        if not np.all(np.isfinite(self.values)):
            raise NumericError("coefficient tensor contains non-finite entries")

    def index_tuples(self):
        """All index tuples in serialization order (j_1 fastest-varying)."""
        for rev in np.ndindex(*self.values.shape[::-1]):
            yield rev[::-1]


def _quad_plan(spec: IntegralSpec, basis: BasisSystem, level_max_j) -> PanelGrid:
    """Panel grid + node count for iterated integrals with basis indices up
    to level_max_j[l] at level l."""
    iv = spec.iv
    deg_weights = sum(w.degree for w in spec.weights)
    k = spec.k
    cuts: set[float] = set()
    if basis in (BasisSystem.HAAR, BasisSystem.WALSH):
        for jm in level_max_j:
            for j in range(jm + 1):
                cuts.update(breakpoints(basis, j, iv))
    if basis is BasisSystem.LEGENDRE:
        nodes = max(16, sum(level_max_j) + deg_weights + k + 1)
        return panel_grid(iv.t, iv.T, [], nodes=nodes)
    if basis is BasisSystem.TRIGONOMETRIC:
        periods = sum((j + 1) // 2 for j in level_max_j)
        return panel_grid(iv.t, iv.T, [], nodes=max(24, deg_weights + k + 8),
                          min_panels=max(2, 2 * periods + 2))
    nodes = max(16, deg_weights + k + 1)
    return panel_grid(iv.t, iv.T, sorted(cuts), nodes=nodes)


def _refine(spec: IntegralSpec, basis: BasisSystem, grid: PanelGrid) -> PanelGrid:
    iv = spec.iv
    cuts = [float(x) for x in grid.ends[:-1]]
    return panel_grid(iv.t, iv.T, cuts, nodes=grid.nodes, min_panels=2 * grid.n_panels)


def _sweep(spec: IntegralSpec, basis: BasisSystem, orders: tuple[int, ...],
           grid: PanelGrid) -> np.ndarray:
    """All coefficients for the given truncation orders in one pass."""
    iv = spec.iv
    flat = grid.nodes_x.ravel()
    shape2 = grid.nodes_x.shape
    _, w = gauss_rule(grid.nodes)
    node_w = grid.half[:, None] * w[None, :]
    state = np.ones((1,) + shape2)
    k = spec.k
    for level in range(k):
        p = orders[level]
        factor = basis_matrix(basis, p, flat, iv).reshape((p + 1,) + shape2)
        factor = factor * np.asarray(eval_weight(spec.weights[level], flat, iv)).reshape(shape2)
        if level == k - 1:
            totals = np.tensordot(state, factor * node_w, axes=([1, 2], [1, 2]))
            return totals.reshape(tuple(q + 1 for q in orders))
        prod = state[:, None, :, :] * factor[None, :, :, :]
        cum, _ = grid.cumulative(prod)
        state = cum.reshape((-1,) + shape2)
    raise AssertionError("unreachable")


def _with_refinement(spec: IntegralSpec, basis: BasisSystem, orders, compute):
    """Run `compute(grid)`; for the trigonometric system confirm against a
    panel-doubled grid, refining until agreement or the cap."""
    grid = _quad_plan(spec, basis, orders)
    result = compute(grid)
    if basis is not BasisSystem.TRIGONOMETRIC:
        return result
    for _ in range(5):
        finer_grid = _refine(spec, basis, grid)
        finer = compute(finer_grid)
        scale = max(1.0, float(np.max(np.abs(finer))))
        if float(np.max(np.abs(result - finer))) <= 1e-12 * scale:
            return finer
        grid, result = finer_grid, finer
    raise NumericError("coefficient quadrature did not converge under panel refinement")


def fourier_coefficient(spec: IntegralSpec, basis: BasisSystem, jtuple) -> float:
    """Single generalized Fourier coefficient for the index tuple
    (j_1, ..., j_k), j_1 innermost."""
    jt = tuple(int(j) for j in jtuple)
    if len(jt) != spec.k:
        raise DomainError(f"need {spec.k} basis indices, got {len(jt)}")
    if any(j < 0 for j in jt):
        raise BasisIndexError("basis indices must be >= 0")

    def compute(grid: PanelGrid) -> np.ndarray:
        flat = grid.nodes_x.ravel()
        shape2 = grid.nodes_x.shape
        _, w = gauss_rule(grid.nodes)
        node_w = grid.half[:, None] * w[None, :]
        state = np.ones(shape2)
        for level, j in enumerate(jt):
            psi = np.asarray(eval_weight(spec.weights[level], flat, spec.iv)).reshape(shape2)
            phi = np.asarray(eval_basis(basis, j, flat, spec.iv)).reshape(shape2)
            integrand = state * psi * phi
            if level == spec.k - 1:
                return np.asarray(float(np.sum(integrand * node_w)))
            cum, _ = grid.cumulative(integrand)
            state = cum
        raise AssertionError("unreachable")

    return float(_with_refinement(spec, basis, jt, compute))


def coefficient_tensor(spec: IntegralSpec, basis: BasisSystem, orders,
                       max_entries: int = DEFAULT_MAX_ENTRIES) -> CoefficientTensor:
    """All coefficients up to the given truncation orders.

    Equivalent to calling :func:`fourier_coefficient` tuple by tuple, but
    computed in one shared-grid pass; the result does not depend on
    evaluation order or parallelism.
    """
    orders_t = tuple(int(p) for p in orders)
    if len(orders_t) != spec.k:
        raise DomainError(f"need {spec.k} truncation orders, got {len(orders_t)}")
    if any(p < 0 for p in orders_t):
        raise DomainError("truncation orders must be >= 0")
    entries = math.prod(p + 1 for p in orders_t)
    if entries > max_entries:
        raise CapacityError(f"tensor would hold {entries} entries > cap {max_entries}")
    values = _with_refinement(spec, basis, orders_t,
                              lambda grid: _sweep(spec, basis, orders_t, grid))
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return CoefficientTensor(spec=spec, basis=basis, orders=orders_t, values=values)


def sum_squared(tensor: CoefficientTensor) -> float:
    """Exact-order-independent sum of squared coefficients."""
    flat = tensor.values.ravel()
    if flat.size <= 1 << 20:
        return math.fsum(float(v) * float(v) for v in flat)
    return float(np.sum(flat * flat))


def parseval_residual(spec: IntegralSpec, tensor: CoefficientTensor) -> float:
    """Squared L2 mass of the kernel not captured by the tensor.

    Tiny negative round-off is clamped to zero with a warning; a deficit
    beyond round-off scale indicates a tensor inconsistent with the spec and
    raises :class:`NumericError`.
    """
    if tensor.spec != spec:
        raise DomainError("tensor was built for a different integral spec")
    total = kernel_l2_norm_sq(spec)
    residual = total - sum_squared(tensor)
    if residual < 0.0:
        if -residual > 1e-10 * max(total, 1e-300):
            raise NumericError(
                f"coefficient mass exceeds kernel norm by {-residual:.3e}; tensor inconsistent")
        warnings.warn(f"clamping negative Parseval residual {residual:.3e} to 0",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    return residual


def ms_error_bound(k: int, residual: float) -> float:
    """Mean-square truncation bound k! * residual (Wiener components only)."""
    if residual < 0.0:
        raise DomainError("residual must be >= 0")
    if k < 1:
        raise DomainError("k must be >= 1")
    if k > 20:
        raise CapacityError(f"k = {k} exceeds the factorial guard (20)")
    return math.factorial(k) * residual


def moment_bound_2n(n: int, k: int, residual: float) -> float:
    """Degree-2n moment bound (k!)^{2n} (n(2n-1))^{n(k-1)} (2n-1)!! residual^n."""
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    if residual < 0.0:
        raise DomainError("residual must be >= 0")
    double_fact = math.prod(range(1, 2 * n, 2))
    try:
        bound = (float(math.factorial(k)) ** (2 * n)
                 * float(n * (2 * n - 1)) ** (n * (k - 1))
                 * double_fact * residual**n)
    except OverflowError as exc:
        raise CapacityError(f"moment bound overflows for n={n}, k={k}") from exc
    if math.isinf(bound):
        raise CapacityError(f"moment bound overflows for n={n}, k={k}")
    return bound


def write_coefficient_table(path, tensor: CoefficientTensor) -> None:
    """Write the documented table format: one JSON header line, a CSV column
    header, then one row per tuple (j_1 fastest) with 17-significant-digit
    values (binary round-trip exact)."""
    header = {
        "format_version": FORMAT_VERSION,
        "spec": tensor.spec.to_json(),
        "basis": tensor.basis.value,
        "orders": list(tensor.orders),
    }
    k = tensor.spec.k
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        fh.write(",".join(f"j{l + 1}" for l in range(k)) + ",value\n")
        for jt in tensor.index_tuples():
            fh.write(",".join(str(j) for j in jt) + f",{tensor.values[jt]:.17g}\n")


def read_coefficient_table(path) -> CoefficientTensor:
    """Read a table produced by :func:`write_coefficient_table`."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as exc:
            raise DomainError(f"coefficient table header is not valid JSON: {exc}") from exc
        for field in ("format_version", "spec", "basis", "orders"):
            if field not in header:
                raise DomainError(f"coefficient table header missing {field!r}")
        if header["format_version"] != FORMAT_VERSION:
            raise DomainError(f"unsupported table format version {header['format_version']!r}")
        spec = IntegralSpec.from_json(header["spec"])
        basis = parse_basis(header["basis"])
        orders = tuple(int(p) for p in header["orders"])
        shape = tuple(p + 1 for p in orders)
        values = np.full(shape, np.nan)
        fh.readline()  # column header
        count = 0
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != spec.k + 1:
                raise DomainError(f"bad coefficient row: {line!r}")
            jt = tuple(int(p) for p in parts[:-1])
            if any(not 0 <= j < dim for j, dim in zip(jt, shape)):
                raise DomainError(f"coefficient row index out of range: {line!r}")
            values[jt] = float(parts[-1])
            count += 1
    if count != math.prod(shape) or np.any(np.isnan(values)):
        raise DomainError("coefficient table does not cover every index tuple")
    values.setflags(write=False)
    return CoefficientTensor(spec=spec, basis=basis, orders=orders, values=values)
