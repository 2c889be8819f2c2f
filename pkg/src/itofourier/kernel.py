"""Weight functions, integral specifications, and the ordered-simplex kernel.

The target object is the iterated Ito integral of multiplicity k with
polynomial weights psi_l and component indices i_l (0 denotes the time
component).  Its kernel on the hypercube [t, T]^k is the product of the
weights on the ordered simplex t_1 < ... < t_k and zero elsewhere; the
squared L2 norm of that kernel is the total mass available to the Fourier
coefficients.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .basis import Interval
from .errors import ArityError, DomainError


@dataclass(frozen=True)
class Weight:
    """Polynomial weight psi(s) = sum_q coeffs[q] * (s - t)**q on [t, T]."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise DomainError("weight needs at least one polynomial coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        return {"poly": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj) -> "Weight":
        if not isinstance(obj, dict) or set(obj) != {"poly"}:
            raise DomainError(f'weight JSON must be {{"poly": [...]}}, got {obj!r}')
        return cls(tuple(obj["poly"]))


CONSTANT_ONE = Weight((1.0,))


@dataclass(frozen=True)
class IntegralSpec:
    """An iterated Ito integral: interval, multiplicity, components, weights.

    indices[l] = 0 selects the d-tau component for level l+1; positive
    entries select Wiener components.
    """

    iv: Interval
    k: int
    indices: tuple[int, ...]
    weights: tuple[Weight, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"multiplicity must be >= 1, got {self.k}")
        if len(self.indices) != self.k or len(self.weights) != self.k:
            raise ArityError(
                f"need {self.k} indices and weights, got {len(self.indices)}/{len(self.weights)}")
        if any(i < 0 for i in self.indices):
            raise DomainError("component indices must be >= 0")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def max_index(self) -> int:
        return max(self.indices)

    def to_json(self) -> dict:
        return {
            "t": self.iv.t,
            "T": self.iv.T,
            "k": self.k,
            "indices": list(self.indices),
            "weights": [w.to_json() for w in self.weights],
        }

    @classmethod
    def from_json(cls, obj) -> "IntegralSpec":
        required = {"t", "T", "k", "indices", "weights"}
        if not isinstance(obj, dict):
            raise DomainError("integral spec JSON must be an object")
        unknown = set(obj) - required
        if unknown:
            raise DomainError(f"unknown integral spec fields: {sorted(unknown)}")
        missing = required - set(obj)
        if missing:
            raise DomainError(f"integral spec missing fields: {sorted(missing)}")
        return cls(
            iv=Interval(obj["t"], obj["T"]),
            k=int(obj["k"]),
            indices=tuple(int(i) for i in obj["indices"]),
            weights=tuple(Weight.from_json(w) for w in obj["weights"]),
        )


def spec_from_json_text(text: str) -> IntegralSpec:
    return IntegralSpec.from_json(json.loads(text))


def eval_weight(w: Weight, s, iv: Interval):
    """Horner evaluation of the weight polynomial at s in [t, T]."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < iv.t - 1e-12 * iv.length) or np.any(s_arr > iv.T + 1e-12 * iv.length):
        raise DomainError(f"weight evaluated outside [{iv.t}, {iv.T}]")
    u = s_arr - iv.t
    acc = np.full_like(u, w.coeffs[-1])
    for c in reversed(w.coeffs[:-1]):
        acc = acc * u + c
    return float(acc) if acc.ndim == 0 else acc


def eval_kernel(spec: IntegralSpec, point) -> float:
    """Kernel value at a point of [t, T]^k: product of weights if the
    coordinates are strictly increasing, zero otherwise (k = 1 has no
    ordering constraint)."""
    pt = [float(x) for x in point]
    if len(pt) != spec.k:
        raise ArityError(f"kernel point needs {spec.k} coordinates, got {len(pt)}")
    for x in pt:
        if x < spec.iv.t or x > spec.iv.T:
            raise DomainError(f"kernel coordinate {x} outside [{spec.iv.t}, {spec.iv.T}]")
    if any(a >= b for a, b in zip(pt[:-1], pt[1:])):
        return 0.0
    out = 1.0
    for w, x in zip(spec.weights, pt):
        out *= eval_weight(w, x, spec.iv)
    return out


def kernel_l2_norm_sq(spec: IntegralSpec) -> float:
    """Exact integral of the squared kernel over the hypercube.

    Squared polynomial weights integrate in closed form, so the iterated
    simplex integral is evaluated symbolically level by level.
    """
    poly = np.polynomial.Polynomial
    acc = poly([1.0])
    for w in spec.weights:
        acc = (poly(list(w.coeffs)) ** 2 * acc).integ()
    return float(acc(spec.iv.length))


def constant_spec(iv: Interval, indices) -> IntegralSpec:
    """Spec with unit weights for the given component indices."""
    indices = tuple(int(i) for i in indices)
    return IntegralSpec(iv=iv, k=len(indices), indices=indices,
                        weights=(CONSTANT_ONE,) * len(indices))
