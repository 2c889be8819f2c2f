"""Composite Gauss-Legendre panel quadrature with in-panel antiderivatives.

The panel grid splits [t, T] at prescribed interior points (basis jumps) and
optionally refines each segment until a minimum panel count is reached.  On
every panel the integrand is sampled at the same Gauss nodes; the cumulative
matrix turns those samples into values of the antiderivative at the nodes,
which is what the iterated (simplex) integrals need.  Both operations are
exact whenever the integrand restricted to a panel is a polynomial of degree
at most ``nodes - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1], cached and read-only."""
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _legendre_rows(x: np.ndarray, degree: int) -> np.ndarray:
    """P_n(x) for n = 0..degree, shape (degree+1, len(x))."""
    rows = np.empty((degree + 1, x.size))
    rows[0] = 1.0
    if degree >= 1:
        rows[1] = x
    for n in range(1, degree):
        rows[n + 1] = ((2 * n + 1) * x * rows[n] - n * rows[n - 1]) / (n + 1)
    return rows


@lru_cache(maxsize=None)
def cumulative_matrix(nodes: int) -> np.ndarray:
    """Matrix K with (K f)(i) = integral of the interpolant of f from -1 to x_i.

    f holds samples at the Gauss nodes; the interpolant is the unique
    polynomial of degree nodes-1 through them, recovered via the discrete
    Legendre transform (exact at Gauss points).
    """
    x, w = gauss_rule(nodes)
    p = _legendre_rows(x, nodes)  # P_0..P_nodes at the nodes
    # Legendre coefficients of the interpolant: c_n = (2n+1)/2 * sum w_i P_n(x_i) f_i
    scale = (2.0 * np.arange(nodes) + 1.0) / 2.0
    to_coeffs = scale[:, None] * p[:nodes] * w[None, :]
    # g_n(x) = integral of P_n from -1 to x:  g_0 = P_1 + P_0,
    # g_n = (P_{n+1} - P_{n-1}) / (2n+1) for n >= 1
    g = np.empty((nodes, nodes))
    g[:, 0] = p[1] + p[0]
    for n in range(1, nodes):
        g[:, n] = (p[n + 1] - p[n - 1]) / (2 * n + 1)
    k = g @ to_coeffs
    k.setflags(write=False)
    return k


@dataclass(frozen=True)
class PanelGrid:
    """Panelization of [t, T] with shared Gauss nodes on every panel.

    nodes_x has shape (n_panels, nodes); half holds the panel half-widths.
    """

    starts: np.ndarray
    ends: np.ndarray
    half: np.ndarray
    nodes_x: np.ndarray
    nodes: int

    @property
    def n_panels(self) -> int:
        return self.starts.size

    def integrate_samples(self, samples: np.ndarray) -> np.ndarray:
        """Per-panel integrals from samples of shape (..., n_panels, nodes)."""
        _, w = gauss_rule(self.nodes)
        flat = samples.reshape(-1, self.nodes)
        return self.half * (flat @ w).reshape(samples.shape[:-1])

    def cumulative(self, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Antiderivative values (from t) at every node, plus the total.

        Returns (cum_nodes, total) where cum_nodes has the shape of samples
        and total the shape of samples without the last two axes.
        """
        per_panel = self.integrate_samples(samples)
        shifted = np.zeros_like(per_panel)
        shifted[..., 1:] = np.cumsum(per_panel, axis=-1)[..., :-1]
        kmat = cumulative_matrix(self.nodes)
        flat = samples.reshape(-1, self.nodes)
        in_panel = (flat @ kmat.T).reshape(samples.shape)
        in_panel *= self.half[:, None]
        return shifted[..., None] + in_panel, per_panel.sum(axis=-1)


def panel_grid(t: float, big_t: float, breakpoints, nodes: int = 16,
               min_panels: int = 1) -> PanelGrid:
    """Build a panel grid split at the given interior points.

    Segments between consecutive split points are subdivided further until
    the whole interval holds at least ``min_panels`` panels of roughly equal
    width.
    """
    cuts = [t]
    for b in sorted(set(float(b) for b in breakpoints)):
        if t < b < big_t:
            cuts.append(b)
    cuts.append(big_t)
    starts: list[float] = []
    ends: list[float] = []
    length = big_t - t
    for a, b in zip(cuts[:-1], cuts[1:]):
        pieces = max(1, int(np.ceil((b - a) / length * min_panels)))
        edges = np.linspace(a, b, pieces + 1)
        starts.extend(edges[:-1])
        ends.extend(edges[1:])
    starts_a = np.asarray(starts)
    ends_a = np.asarray(ends)
    half = (ends_a - starts_a) / 2.0
    mid = (ends_a + starts_a) / 2.0
    x, _ = gauss_rule(nodes)
    nodes_x = mid[:, None] + half[:, None] * x[None, :]
    for arr in (starts_a, ends_a, half, nodes_x):
        arr.setflags(write=False)
    return PanelGrid(starts_a, ends_a, half, nodes_x, nodes)
