"""Seeded Gaussian pools, Wiener paths, and the discretized pathwise oracle.

All randomness is counter-derived: every stream is keyed by the user seed
plus a (domain, index) spawn key, so any entry depends only on the seed and
its own coordinates.  Pools can be enlarged and paths generated in parallel
without perturbing existing values, and identical seeds give bit-identical
results regardless of thread count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .basis import BasisSystem, Interval, basis_matrix, breakpoints, integrate_basis
from .errors import CompatibilityError, DomainError, GridCompatibilityError
from .kernel import IntegralSpec, eval_weight

_POOL_DOMAIN = 0
_PATH_DOMAIN = 1
_SUBSEED_DOMAIN = 2


def _stream(seed: int, domain: int, index: int) -> Generator:
    ss = SeedSequence(int(seed) % 2**64, spawn_key=(domain, index))
    return Generator(Philox(ss))


def path_seed(seed: int, path_index: int) -> int:
    """Derive an independent per-path seed from a master seed."""
    ss = SeedSequence(int(seed) % 2**64, spawn_key=(_SUBSEED_DOMAIN, int(path_index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class GaussianPool:
    """Basis-integral variables by component and basis index.

    Row 0 holds the deterministic time-component values (plain integrals of
    the basis functions); rows 1..m hold the Gaussian coefficients of the
    Wiener components.
    """

    iv: Interval
    basis: BasisSystem
    m: int
    jmax: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.m + 1, self.jmax + 1):
            raise DomainError(f"pool values must have shape {(self.m + 1, self.jmax + 1)}")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("pool contains non-finite entries")


@dataclass(frozen=True, eq=False)
class WienerPath:
    """Increments of an m-dimensional Wiener process on a uniform grid."""

    iv: Interval
    m: int
    N: int
    increments: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.N < 1:
            raise DomainError("path needs m >= 1 and N >= 1")
        if self.increments.shape != (self.m, self.N):
            raise DomainError(f"increments must have shape {(self.m, self.N)}")

    @property
    def dt(self) -> float:
        return self.iv.length / self.N


def _deterministic_row(iv: Interval, basis: BasisSystem, jmax: int) -> np.ndarray:
    return np.array([integrate_basis(basis, j, iv) for j in range(jmax + 1)])


def gaussian_pool(iv: Interval, basis: BasisSystem, m: int, jmax: int,
                  seed: int) -> GaussianPool:
    """Pool of independent standard normals for components 1..m, with the
    deterministic time-component row filled from basis integrals.

    Entry (i, j) depends only on (seed, i, j): enlarging jmax extends each
    row without changing existing entries.
    """
    if m < 1 or jmax < 0:
        raise DomainError("need m >= 1 and jmax >= 0")
    values = np.empty((m + 1, jmax + 1))
    values[0] = _deterministic_row(iv, basis, jmax)
    for i in range(1, m + 1):
        values[i] = _stream(seed, _POOL_DOMAIN, i).standard_normal(jmax + 1)
    values.setflags(write=False)
    return GaussianPool(iv=iv, basis=basis, m=m, jmax=jmax, values=values)


def brownian_path(iv: Interval, m: int, N: int, seed: int) -> WienerPath:
    """Uniform-grid Wiener increments, Normal(0, (T-t)/N) i.i.d. per entry.

    Component rows come from per-component streams, so entry (i, l) depends
    only on (seed, i, l).
    """
    if m < 1 or N < 1:
        raise DomainError("need m >= 1 and N >= 1")
    dt = iv.length / N
    root = math.sqrt(dt)
    increments = np.empty((m, N))
    for i in range(1, m + 1):
        increments[i - 1] = root * _stream(seed, _PATH_DOMAIN, i).standard_normal(N)
    increments.setflags(write=False)
    return WienerPath(iv=iv, m=m, N=N, increments=increments)


@lru_cache(maxsize=16)
def _grid_basis(basis: BasisSystem, t: float, big_t: float, n_steps: int,
                jmax: int) -> np.ndarray:
    iv = Interval(t, big_t)
    left = t + np.arange(n_steps) * (iv.length / n_steps)
    phi = basis_matrix(basis, jmax, left, iv)
    phi.setflags(write=False)
    return phi


def _require_breakpoints_on_grid(basis: BasisSystem, iv: Interval, n_steps: int,
                                 jmax: int) -> None:
    dt = iv.length / n_steps
    for j in range(jmax + 1):
        for b in breakpoints(basis, j, iv):
            steps = (b - iv.t) / dt
            if abs(steps - round(steps)) * dt > 1e-9 * iv.length:
                raise GridCompatibilityError(
                    f"basis jump at {b} not on the N={n_steps} grid "
                    f"(use a power-of-two N for Haar/Walsh)")


def zeta_from_path(path: WienerPath, basis: BasisSystem, jmax: int) -> GaussianPool:
    """Left-point discretization of the basis-integral variables along a path.

    Row 0 is exact (plain basis integrals); rows i >= 1 are the Ito sums
    sum_l phi_j(tau_l) dW_l.  The grid must contain all basis jump points.
    """
    if jmax < 0:
        raise DomainError("jmax must be >= 0")
    iv = path.iv
    _require_breakpoints_on_grid(basis, iv, path.N, jmax)
    phi = _grid_basis(basis, iv.t, iv.T, path.N, jmax)
    values = np.empty((path.m + 1, jmax + 1))
    values[0] = _deterministic_row(iv, basis, jmax)
    values[1:] = path.increments @ phi.T
    values.setflags(write=False)
    return GaussianPool(iv=iv, basis=basis, m=path.m, jmax=jmax, values=values)


def path_iterated_integral(spec: IntegralSpec, path: WienerPath) -> float:
    """Ordered grid sum approximating the iterated integral along the path.

    Computes sum over l_k > ... > l_1 of prod psi_l(tau_{l_l}) dW^{(i_l)}
    by cumulative prefix recursion in O(k N); time components use dt in
    place of the Wiener increment.
    """
    if spec.iv != path.iv:
        raise CompatibilityError("spec and path are on different intervals")
    if spec.max_index > path.m:
        raise CompatibilityError(
            f"spec uses component {spec.max_index} but path has m = {path.m}")
    iv = spec.iv
    left = iv.t + np.arange(path.N) * path.dt
    running = None
    for level in range(spec.k):
        i_l = spec.indices[level]
        dw = np.full(path.N, path.dt) if i_l == 0 else path.increments[i_l - 1]
        factor = np.asarray(eval_weight(spec.weights[level], left, iv)) * dw
        if running is None:
            running = factor
        else:
            prefix = np.empty(path.N)
            prefix[0] = 0.0
            np.cumsum(running[:-1], out=prefix[1:])
            running = factor * prefix
    return float(np.sum(running))
