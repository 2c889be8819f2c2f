"""Complete orthonormal systems of L2([t, T]) used by the expansion.

Four interchangeable systems are supported: scaled Legendre polynomials,
the trigonometric system, Haar wavelets, and Rademacher-Walsh functions.
The discontinuous systems (Haar, Walsh) evaluate right-continuously at
their jump points, and :func:`breakpoints` exposes those jumps so that
quadrature panels and simulation grids can be aligned with them.

Index conventions
-----------------
Every system is addressed by a single flat index ``j >= 0``:

* Legendre: ``j`` is the polynomial degree.
* Trigonometric: ``j = 0`` is the constant, ``j = 2r-1`` the sine and
  ``j = 2r`` the cosine with ``r`` full periods.
* Haar: ``j = 0`` is the constant; ``j >= 1`` maps to level
  ``n = floor(log2(j))`` and in-level position ``j - 2**n + 1`` in
  ``1..2**n``, i.e. levels are enumerated in blocks of increasing ``n``.
* Walsh: ``j = 0`` is the constant; ``j >= 1`` maps to a nonempty set
  ``{m_1 < ... < m_q}`` of Rademacher factors.  Index blocks are ordered
  by increasing ``max m``, and within a block subsets are ordered
  lexicographically as ascending tuples.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisIndexError, DomainError
from .quadrature import gauss_rule, panel_grid

# Index guards: Legendre recurrence is well behaved far beyond practical
# truncation orders; Haar/Walsh caps keep 2**level arithmetic in range.
LEGENDRE_MAX_DEGREE = 1000
HAAR_MAX_LEVEL = 48
WALSH_MAX_FACTOR = 48


@dataclass(frozen=True)
class Interval:
    """Time interval [t, T] with t < T, both finite."""

    t: float
    T: float

    def __post_init__(self):
        t, big_t = float(self.t), float(self.T)
        if not (math.isfinite(t) and math.isfinite(big_t)):
            raise DomainError("interval endpoints must be finite")
        if not big_t > t:
            raise DomainError(f"interval requires T > t, got [{t}, {big_t}]")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "T", big_t)

    @property
    def length(self) -> float:
        return self.T - self.t


class BasisSystem(enum.Enum):
    LEGENDRE = "legendre"
    TRIGONOMETRIC = "trigonometric"
    HAAR = "haar"
    WALSH = "walsh"


_BASIS_ALIASES = {
    "legendre": BasisSystem.LEGENDRE,
    "trigonometric": BasisSystem.TRIGONOMETRIC,
    "haar": BasisSystem.HAAR,
    "walsh": BasisSystem.WALSH,
    "rademacher-walsh": BasisSystem.WALSH,
    "rademacher_walsh": BasisSystem.WALSH,
}


def parse_basis(name: str) -> BasisSystem:
    """Resolve a config/CLI basis name (case-insensitive)."""
    try:
        return _BASIS_ALIASES[name.strip().lower()]
    except KeyError:
        known = ", ".join(sorted(set(_BASIS_ALIASES))) or ""
        raise DomainError(f"unknown basis {name!r}; expected one of: {known}") from None


def haar_unflatten(j: int) -> tuple[int, int]:
    """Map flat Haar index j >= 1 to (level n, in-level position 1..2**n)."""
    if j < 1:
        raise BasisIndexError("flat Haar index must be >= 1 for wavelet levels")
    n = j.bit_length() - 1
    if n > HAAR_MAX_LEVEL:
        raise BasisIndexError(f"Haar level {n} exceeds cap {HAAR_MAX_LEVEL}")
    return n, j - (1 << n) + 1


def walsh_subset(j: int) -> tuple[int, ...]:
    """Map flat Walsh index j >= 1 to its Rademacher factor set.

    Blocks of fixed ``M = max(subset)`` occupy ``j in [2**(M-1), 2**M - 1]``;
    within a block subsets are in lexicographic order of ascending tuples.
    """
    if j < 1:
        raise BasisIndexError("flat Walsh index must be >= 1 for non-constant functions")
    m_max = j.bit_length()
    if m_max > WALSH_MAX_FACTOR:
        raise BasisIndexError(f"Walsh factor {m_max} exceeds cap {WALSH_MAX_FACTOR}")
    rank = j - (1 << (m_max - 1))
    subset: list[int] = []
    lo = 1
    while True:
        if lo == m_max:
            subset.append(m_max)
            break
        a = lo
        while True:
            block = 1 if a == m_max else (1 << (m_max - 1 - a))
            if rank < block:
                break
            rank -= block
            a += 1
        subset.append(a)
        if a == m_max:
            break
        lo = a + 1
    return tuple(subset)


def _check_index(system: BasisSystem, j: int) -> None:
    if j < 0:
        raise BasisIndexError(f"basis index must be >= 0, got {j}")
    if system is BasisSystem.LEGENDRE and j > LEGENDRE_MAX_DEGREE:
        raise BasisIndexError(f"Legendre degree {j} exceeds cap {LEGENDRE_MAX_DEGREE}")
    if system is BasisSystem.HAAR and j >= 1:
        haar_unflatten(j)
    if system is BasisSystem.WALSH and j >= 1:
        walsh_subset(j)


def _unit_coord(s: np.ndarray, iv: Interval) -> np.ndarray:
    u = (s - iv.t) / iv.length
    if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
        raise DomainError(f"point outside [{iv.t}, {iv.T}]")
    return np.clip(u, 0.0, 1.0)


def _legendre_values(j: int, x: np.ndarray) -> np.ndarray:
    p_prev = np.ones_like(x)
    if j == 0:
        return p_prev
    p_cur = x.copy()
    for n in range(1, j):
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    return p_cur


def _haar_unit(j: int, u: np.ndarray) -> np.ndarray:
    n, pos = haar_unflatten(j)
    left = (pos - 1) / 2.0**n
    mid = left + 1.0 / 2.0 ** (n + 1)
    right = pos / 2.0**n
    amp = 2.0 ** (n / 2.0)
    return np.where((u >= left) & (u < mid), amp,
                    np.where((u >= mid) & (u < right), -amp, 0.0))


def _walsh_unit(j: int, u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    for m in walsh_subset(j):
        out = out * np.where(np.floor(2.0**m * u).astype(np.int64) % 2 == 0, 1.0, -1.0)
    return out


def eval_basis(system: BasisSystem, j: int, s, iv: Interval):
    """Evaluate the j-th basis function of the system at s in [t, T].

    Accepts a scalar or an ndarray of points; at jump points of Haar/Walsh
    the right-continuous value is returned.
    """
    _check_index(system, j)
    s_arr = np.asarray(s, dtype=float)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    root = math.sqrt(iv.length)
    if system is BasisSystem.LEGENDRE:
        x = 2.0 * _unit_coord(s_arr, iv) - 1.0
        vals = math.sqrt(2 * j + 1) / root * _legendre_values(j, x)
    elif system is BasisSystem.TRIGONOMETRIC:
        u = _unit_coord(s_arr, iv)
        if j == 0:
            vals = np.full_like(u, 1.0 / root)
        else:
            r = (j + 1) // 2
            phase = 2.0 * math.pi * r * u
            vals = math.sqrt(2.0) / root * (np.sin(phase) if j % 2 == 1 else np.cos(phase))
    elif system is BasisSystem.HAAR:
        u = _unit_coord(s_arr, iv)
        vals = np.full_like(u, 1.0 / root) if j == 0 else _haar_unit(j, u) / root
    else:
        u = _unit_coord(s_arr, iv)
        vals = np.full_like(u, 1.0 / root) if j == 0 else _walsh_unit(j, u) / root
    return float(vals[0]) if scalar else vals


def basis_matrix(system: BasisSystem, jmax: int, s: np.ndarray, iv: Interval) -> np.ndarray:
    """Stack eval_basis for j = 0..jmax over an array of points.

    Shape (jmax+1, len(s)).  The Legendre rows share one recurrence sweep.
    """
    _check_index(system, jmax)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if system is BasisSystem.LEGENDRE:
        x = 2.0 * _unit_coord(s_arr, iv) - 1.0
        rows = np.empty((jmax + 1, s_arr.size))
        rows[0] = 1.0
        if jmax >= 1:
            rows[1] = x
        for n in range(1, jmax):
            rows[n + 1] = ((2 * n + 1) * x * rows[n] - n * rows[n - 1]) / (n + 1)
        scale = np.sqrt((2.0 * np.arange(jmax + 1) + 1.0) / iv.length)
        return scale[:, None] * rows
    return np.stack([np.atleast_1d(eval_basis(system, j, s_arr, iv))
                     for j in range(jmax + 1)])


def breakpoints(system: BasisSystem, j: int, iv: Interval) -> list[float]:
    """Interior jump points of the j-th basis function, ascending.

    Continuous systems (Legendre, trigonometric) and the constant j = 0
    return an empty list.
    """
    _check_index(system, j)
    if system in (BasisSystem.LEGENDRE, BasisSystem.TRIGONOMETRIC) or j == 0:
        return []
    if system is BasisSystem.HAAR:
        n, pos = haar_unflatten(j)
        unit = [(pos - 1) / 2.0**n, (pos - 1) / 2.0**n + 1.0 / 2.0 ** (n + 1), pos / 2.0**n]
    else:
        subset = walsh_subset(j)
        m_max = subset[-1]
        unit = []
        for i in range(1, 2**m_max):
            # the product jumps where an odd number of factors jump
            flips = sum(1 for m in subset if i % (1 << (m_max - m)) == 0)
            if flips % 2 == 1:
                unit.append(i / 2.0**m_max)
    return [iv.t + u * iv.length for u in unit if 0.0 < u < 1.0]


def integrate_basis(system: BasisSystem, j: int, iv: Interval) -> float:
    """Integral of the j-th basis function over [t, T].

    Closed forms for Legendre/trigonometric/Haar (sqrt(T-t) for j = 0, zero
    otherwise); Walsh is summed over its dyadic panels, which is exact for a
    piecewise-constant function.
    """
    _check_index(system, j)
    root = math.sqrt(iv.length)
    if j == 0:
        return root
    if system is BasisSystem.WALSH:
        m_max = walsh_subset(j)[-1]
        panels = 1 << m_max
        mids = (np.arange(panels) + 0.5) / panels
        signs = _walsh_unit(j, mids)
        return float(signs.sum()) * iv.length / panels / root
    return 0.0


def _gram_piecewise_constant(system: BasisSystem, p: int, iv: Interval) -> np.ndarray:
    """Gram matrix for Haar/Walsh via exact sign patterns.

    Every product phi_i phi_j is constant on the unified dyadic grid, so each
    entry is (amplitude product) * (signed panel count) * (panel width).  The
    amplitude product is an exact power of two on the diagonal and the signed
    count cancels exactly off it, giving a bitwise-exact identity.
    """
    if system is BasisSystem.HAAR:
        levels = [0] + [haar_unflatten(j)[0] for j in range(1, p + 1)]
        depth = max(levels) + 1
    else:
        factors = [0] + [walsh_subset(j)[-1] for j in range(1, p + 1)]
        depth = max(factors)
    panels = 1 << depth
    mids = (np.arange(panels) + 0.5) / panels
    signs = np.empty((p + 1, panels))
    signs[0] = 1.0
    for j in range(1, p + 1):
        if system is BasisSystem.HAAR:
            n, _ = haar_unflatten(j)
            signs[j] = _haar_unit(j, mids) / 2.0 ** (n / 2.0)
        else:
            signs[j] = _walsh_unit(j, mids)
    counts = signs @ signs.T
    if system is BasisSystem.HAAR:
        half_sum = np.add.outer(levels, levels)
        amp = np.where(half_sum % 2 == 0, 1.0, math.sqrt(2.0)) * 2.0 ** (half_sum // 2)
    else:
        amp = np.ones_like(counts)
    width = iv.length / panels
    return amp * counts * width / iv.length


def gram_matrix(system: BasisSystem, p: int, iv: Interval) -> np.ndarray:
    """Matrix of inner products <phi_i, phi_j> for i, j = 0..p.

    Piecewise-constant systems reduce to exact dyadic panel sums; the other
    systems use composite Gauss panels with enough nodes for the product
    degree (Legendre) or enough panels per period (trigonometric).
    """
    if p < 0:
        raise DomainError("gram_matrix requires p >= 0")
    _check_index(system, p)
    if system in (BasisSystem.HAAR, BasisSystem.WALSH):
        return _gram_piecewise_constant(system, p, iv)
    if system is BasisSystem.LEGENDRE:
        # product degree up to 2p; n nodes integrate degree 2n-1 exactly
        grid = panel_grid(iv.t, iv.T, [], nodes=max(16, p + 1))
    else:
        r_max = (p + 1) // 2
        grid = panel_grid(iv.t, iv.T, [], nodes=24, min_panels=max(2, 4 * r_max + 2))
    pts = grid.nodes_x.ravel()
    phi = basis_matrix(system, p, pts, iv)
    _, w = gauss_rule(grid.nodes)
    node_w = (grid.half[:, None] * w[None, :]).ravel()
    return (phi * node_w) @ phi.T
