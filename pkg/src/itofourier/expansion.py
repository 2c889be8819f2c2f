"""Truncated expansions of the iterated integral from coefficients and pools.

Two independent evaluation routes are provided.  The general route sums,
for every index tuple, the product of pooled variables plus the
sign-alternating pair-partition corrections (pairs must carry equal nonzero
components and equal basis indices).  The explicit route evaluates the same
bracket for k <= 7 from tables frozen below, constructing the bracket tensor
term by term; it shares no enumeration or contraction code with the general
route and serves as its oracle.

The reference polynomials in (delta, variance) reproduce the equal-weight,
equal-component integral in closed form and double as a third route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .coefficients import CoefficientTensor
from .errors import CompatibilityError, DomainError, UnsupportedMultiplicityError
from .partitions import pair_partitions
from .stochastic import GaussianPool

MAX_MULTIPLICITY = 10

# Frozen pair/singleton term tables for the explicit k <= 7 formulas; the
# r-pair terms enter with sign (-1)**r on top of the plain product term.
_EXPLICIT_TERMS: dict[int, tuple] = {
    1: (
    ),
    2: (
        (((1, 2),), ()),
    ),
    3: (
        (((1, 2),), (3,)), (((1, 3),), (2,)), (((2, 3),), (1,)),
    ),
    4: (
        (((1, 2),), (3, 4)), (((1, 2), (3, 4)), ()), (((1, 3),), (2, 4)), (((1, 3), (2, 4)), ()),
        (((1, 4),), (2, 3)), (((1, 4), (2, 3)), ()), (((2, 3),), (1, 4)), (((2, 4),), (1, 3)),
        (((3, 4),), (1, 2)),
    ),
    5: (
        (((1, 2),), (3, 4, 5)), (((1, 2), (3, 4)), (5,)), (((1, 2), (3, 5)), (4,)),
        (((1, 2), (4, 5)), (3,)), (((1, 3),), (2, 4, 5)), (((1, 3), (2, 4)), (5,)),
        (((1, 3), (2, 5)), (4,)), (((1, 3), (4, 5)), (2,)), (((1, 4),), (2, 3, 5)),
        (((1, 4), (2, 3)), (5,)), (((1, 4), (2, 5)), (3,)), (((1, 4), (3, 5)), (2,)),
        (((1, 5),), (2, 3, 4)), (((1, 5), (2, 3)), (4,)), (((1, 5), (2, 4)), (3,)),
        (((1, 5), (3, 4)), (2,)), (((2, 3),), (1, 4, 5)), (((2, 3), (4, 5)), (1,)),
        (((2, 4),), (1, 3, 5)), (((2, 4), (3, 5)), (1,)), (((2, 5),), (1, 3, 4)),
        (((2, 5), (3, 4)), (1,)), (((3, 4),), (1, 2, 5)), (((3, 5),), (1, 2, 4)),
        (((4, 5),), (1, 2, 3)),
    ),
    6: (
        (((1, 2),), (3, 4, 5, 6)), (((1, 2), (3, 4)), (5, 6)), (((1, 2), (3, 4), (5, 6)), ()),
        (((1, 2), (3, 5)), (4, 6)), (((1, 2), (3, 5), (4, 6)), ()), (((1, 2), (3, 6)), (4, 5)),
        (((1, 2), (3, 6), (4, 5)), ()), (((1, 2), (4, 5)), (3, 6)), (((1, 2), (4, 6)), (3, 5)),
        (((1, 2), (5, 6)), (3, 4)), (((1, 3),), (2, 4, 5, 6)), (((1, 3), (2, 4)), (5, 6)),
        (((1, 3), (2, 4), (5, 6)), ()), (((1, 3), (2, 5)), (4, 6)),
        (((1, 3), (2, 5), (4, 6)), ()), (((1, 3), (2, 6)), (4, 5)),
        (((1, 3), (2, 6), (4, 5)), ()), (((1, 3), (4, 5)), (2, 6)), (((1, 3), (4, 6)), (2, 5)),
        (((1, 3), (5, 6)), (2, 4)), (((1, 4),), (2, 3, 5, 6)), (((1, 4), (2, 3)), (5, 6)),
        (((1, 4), (2, 3), (5, 6)), ()), (((1, 4), (2, 5)), (3, 6)),
        (((1, 4), (2, 5), (3, 6)), ()), (((1, 4), (2, 6)), (3, 5)),
        (((1, 4), (2, 6), (3, 5)), ()), (((1, 4), (3, 5)), (2, 6)), (((1, 4), (3, 6)), (2, 5)),
        (((1, 4), (5, 6)), (2, 3)), (((1, 5),), (2, 3, 4, 6)), (((1, 5), (2, 3)), (4, 6)),
        (((1, 5), (2, 3), (4, 6)), ()), (((1, 5), (2, 4)), (3, 6)),
        (((1, 5), (2, 4), (3, 6)), ()), (((1, 5), (2, 6)), (3, 4)),
        (((1, 5), (2, 6), (3, 4)), ()), (((1, 5), (3, 4)), (2, 6)), (((1, 5), (3, 6)), (2, 4)),
        (((1, 5), (4, 6)), (2, 3)), (((1, 6),), (2, 3, 4, 5)), (((1, 6), (2, 3)), (4, 5)),
        (((1, 6), (2, 3), (4, 5)), ()), (((1, 6), (2, 4)), (3, 5)),
        (((1, 6), (2, 4), (3, 5)), ()), (((1, 6), (2, 5)), (3, 4)),
        (((1, 6), (2, 5), (3, 4)), ()), (((1, 6), (3, 4)), (2, 5)), (((1, 6), (3, 5)), (2, 4)),
        (((1, 6), (4, 5)), (2, 3)), (((2, 3),), (1, 4, 5, 6)), (((2, 3), (4, 5)), (1, 6)),
        (((2, 3), (4, 6)), (1, 5)), (((2, 3), (5, 6)), (1, 4)), (((2, 4),), (1, 3, 5, 6)),
        (((2, 4), (3, 5)), (1, 6)), (((2, 4), (3, 6)), (1, 5)), (((2, 4), (5, 6)), (1, 3)),
        (((2, 5),), (1, 3, 4, 6)), (((2, 5), (3, 4)), (1, 6)), (((2, 5), (3, 6)), (1, 4)),
        (((2, 5), (4, 6)), (1, 3)), (((2, 6),), (1, 3, 4, 5)), (((2, 6), (3, 4)), (1, 5)),
        (((2, 6), (3, 5)), (1, 4)), (((2, 6), (4, 5)), (1, 3)), (((3, 4),), (1, 2, 5, 6)),
        (((3, 4), (5, 6)), (1, 2)), (((3, 5),), (1, 2, 4, 6)), (((3, 5), (4, 6)), (1, 2)),
        (((3, 6),), (1, 2, 4, 5)), (((3, 6), (4, 5)), (1, 2)), (((4, 5),), (1, 2, 3, 6)),
        (((4, 6),), (1, 2, 3, 5)), (((5, 6),), (1, 2, 3, 4)),
    ),
    7: (
        (((1, 2),), (3, 4, 5, 6, 7)), (((1, 2), (3, 4)), (5, 6, 7)),
        (((1, 2), (3, 4), (5, 6)), (7,)), (((1, 2), (3, 4), (5, 7)), (6,)),
        (((1, 2), (3, 4), (6, 7)), (5,)), (((1, 2), (3, 5)), (4, 6, 7)),
        (((1, 2), (3, 5), (4, 6)), (7,)), (((1, 2), (3, 5), (4, 7)), (6,)),
        (((1, 2), (3, 5), (6, 7)), (4,)), (((1, 2), (3, 6)), (4, 5, 7)),
        (((1, 2), (3, 6), (4, 5)), (7,)), (((1, 2), (3, 6), (4, 7)), (5,)),
        (((1, 2), (3, 6), (5, 7)), (4,)), (((1, 2), (3, 7)), (4, 5, 6)),
        (((1, 2), (3, 7), (4, 5)), (6,)), (((1, 2), (3, 7), (4, 6)), (5,)),
        (((1, 2), (3, 7), (5, 6)), (4,)), (((1, 2), (4, 5)), (3, 6, 7)),
        (((1, 2), (4, 5), (6, 7)), (3,)), (((1, 2), (4, 6)), (3, 5, 7)),
        (((1, 2), (4, 6), (5, 7)), (3,)), (((1, 2), (4, 7)), (3, 5, 6)),
        (((1, 2), (4, 7), (5, 6)), (3,)), (((1, 2), (5, 6)), (3, 4, 7)),
        (((1, 2), (5, 7)), (3, 4, 6)), (((1, 2), (6, 7)), (3, 4, 5)),
        (((1, 3),), (2, 4, 5, 6, 7)), (((1, 3), (2, 4)), (5, 6, 7)),
        (((1, 3), (2, 4), (5, 6)), (7,)), (((1, 3), (2, 4), (5, 7)), (6,)),
        (((1, 3), (2, 4), (6, 7)), (5,)), (((1, 3), (2, 5)), (4, 6, 7)),
        (((1, 3), (2, 5), (4, 6)), (7,)), (((1, 3), (2, 5), (4, 7)), (6,)),
        (((1, 3), (2, 5), (6, 7)), (4,)), (((1, 3), (2, 6)), (4, 5, 7)),
        (((1, 3), (2, 6), (4, 5)), (7,)), (((1, 3), (2, 6), (4, 7)), (5,)),
        (((1, 3), (2, 6), (5, 7)), (4,)), (((1, 3), (2, 7)), (4, 5, 6)),
        (((1, 3), (2, 7), (4, 5)), (6,)), (((1, 3), (2, 7), (4, 6)), (5,)),
        (((1, 3), (2, 7), (5, 6)), (4,)), (((1, 3), (4, 5)), (2, 6, 7)),
        (((1, 3), (4, 5), (6, 7)), (2,)), (((1, 3), (4, 6)), (2, 5, 7)),
        (((1, 3), (4, 6), (5, 7)), (2,)), (((1, 3), (4, 7)), (2, 5, 6)),
        (((1, 3), (4, 7), (5, 6)), (2,)), (((1, 3), (5, 6)), (2, 4, 7)),
        (((1, 3), (5, 7)), (2, 4, 6)), (((1, 3), (6, 7)), (2, 4, 5)),
        (((1, 4),), (2, 3, 5, 6, 7)), (((1, 4), (2, 3)), (5, 6, 7)),
        (((1, 4), (2, 3), (5, 6)), (7,)), (((1, 4), (2, 3), (5, 7)), (6,)),
        (((1, 4), (2, 3), (6, 7)), (5,)), (((1, 4), (2, 5)), (3, 6, 7)),
        (((1, 4), (2, 5), (3, 6)), (7,)), (((1, 4), (2, 5), (3, 7)), (6,)),
        (((1, 4), (2, 5), (6, 7)), (3,)), (((1, 4), (2, 6)), (3, 5, 7)),
        (((1, 4), (2, 6), (3, 5)), (7,)), (((1, 4), (2, 6), (3, 7)), (5,)),
        (((1, 4), (2, 6), (5, 7)), (3,)), (((1, 4), (2, 7)), (3, 5, 6)),
        (((1, 4), (2, 7), (3, 5)), (6,)), (((1, 4), (2, 7), (3, 6)), (5,)),
        (((1, 4), (2, 7), (5, 6)), (3,)), (((1, 4), (3, 5)), (2, 6, 7)),
        (((1, 4), (3, 5), (6, 7)), (2,)), (((1, 4), (3, 6)), (2, 5, 7)),
        (((1, 4), (3, 6), (5, 7)), (2,)), (((1, 4), (3, 7)), (2, 5, 6)),
        (((1, 4), (3, 7), (5, 6)), (2,)), (((1, 4), (5, 6)), (2, 3, 7)),
        (((1, 4), (5, 7)), (2, 3, 6)), (((1, 4), (6, 7)), (2, 3, 5)),
        (((1, 5),), (2, 3, 4, 6, 7)), (((1, 5), (2, 3)), (4, 6, 7)),
        (((1, 5), (2, 3), (4, 6)), (7,)), (((1, 5), (2, 3), (4, 7)), (6,)),
        (((1, 5), (2, 3), (6, 7)), (4,)), (((1, 5), (2, 4)), (3, 6, 7)),
        (((1, 5), (2, 4), (3, 6)), (7,)), (((1, 5), (2, 4), (3, 7)), (6,)),
        (((1, 5), (2, 4), (6, 7)), (3,)), (((1, 5), (2, 6)), (3, 4, 7)),
        (((1, 5), (2, 6), (3, 4)), (7,)), (((1, 5), (2, 6), (3, 7)), (4,)),
        (((1, 5), (2, 6), (4, 7)), (3,)), (((1, 5), (2, 7)), (3, 4, 6)),
        (((1, 5), (2, 7), (3, 4)), (6,)), (((1, 5), (2, 7), (3, 6)), (4,)),
        (((1, 5), (2, 7), (4, 6)), (3,)), (((1, 5), (3, 4)), (2, 6, 7)),
        (((1, 5), (3, 4), (6, 7)), (2,)), (((1, 5), (3, 6)), (2, 4, 7)),
        (((1, 5), (3, 6), (4, 7)), (2,)), (((1, 5), (3, 7)), (2, 4, 6)),
        (((1, 5), (3, 7), (4, 6)), (2,)), (((1, 5), (4, 6)), (2, 3, 7)),
        (((1, 5), (4, 7)), (2, 3, 6)), (((1, 5), (6, 7)), (2, 3, 4)),
        (((1, 6),), (2, 3, 4, 5, 7)), (((1, 6), (2, 3)), (4, 5, 7)),
        (((1, 6), (2, 3), (4, 5)), (7,)), (((1, 6), (2, 3), (4, 7)), (5,)),
        (((1, 6), (2, 3), (5, 7)), (4,)), (((1, 6), (2, 4)), (3, 5, 7)),
        (((1, 6), (2, 4), (3, 5)), (7,)), (((1, 6), (2, 4), (3, 7)), (5,)),
        (((1, 6), (2, 4), (5, 7)), (3,)), (((1, 6), (2, 5)), (3, 4, 7)),
        (((1, 6), (2, 5), (3, 4)), (7,)), (((1, 6), (2, 5), (3, 7)), (4,)),
        (((1, 6), (2, 5), (4, 7)), (3,)), (((1, 6), (2, 7)), (3, 4, 5)),
        (((1, 6), (2, 7), (3, 4)), (5,)), (((1, 6), (2, 7), (3, 5)), (4,)),
        (((1, 6), (2, 7), (4, 5)), (3,)), (((1, 6), (3, 4)), (2, 5, 7)),
        (((1, 6), (3, 4), (5, 7)), (2,)), (((1, 6), (3, 5)), (2, 4, 7)),
        (((1, 6), (3, 5), (4, 7)), (2,)), (((1, 6), (3, 7)), (2, 4, 5)),
        (((1, 6), (3, 7), (4, 5)), (2,)), (((1, 6), (4, 5)), (2, 3, 7)),
        (((1, 6), (4, 7)), (2, 3, 5)), (((1, 6), (5, 7)), (2, 3, 4)),
        (((1, 7),), (2, 3, 4, 5, 6)), (((1, 7), (2, 3)), (4, 5, 6)),
        (((1, 7), (2, 3), (4, 5)), (6,)), (((1, 7), (2, 3), (4, 6)), (5,)),
        (((1, 7), (2, 3), (5, 6)), (4,)), (((1, 7), (2, 4)), (3, 5, 6)),
        (((1, 7), (2, 4), (3, 5)), (6,)), (((1, 7), (2, 4), (3, 6)), (5,)),
        (((1, 7), (2, 4), (5, 6)), (3,)), (((1, 7), (2, 5)), (3, 4, 6)),
        (((1, 7), (2, 5), (3, 4)), (6,)), (((1, 7), (2, 5), (3, 6)), (4,)),
        (((1, 7), (2, 5), (4, 6)), (3,)), (((1, 7), (2, 6)), (3, 4, 5)),
        (((1, 7), (2, 6), (3, 4)), (5,)), (((1, 7), (2, 6), (3, 5)), (4,)),
        (((1, 7), (2, 6), (4, 5)), (3,)), (((1, 7), (3, 4)), (2, 5, 6)),
        (((1, 7), (3, 4), (5, 6)), (2,)), (((1, 7), (3, 5)), (2, 4, 6)),
        (((1, 7), (3, 5), (4, 6)), (2,)), (((1, 7), (3, 6)), (2, 4, 5)),
        (((1, 7), (3, 6), (4, 5)), (2,)), (((1, 7), (4, 5)), (2, 3, 6)),
        (((1, 7), (4, 6)), (2, 3, 5)), (((1, 7), (5, 6)), (2, 3, 4)),
        (((2, 3),), (1, 4, 5, 6, 7)), (((2, 3), (4, 5)), (1, 6, 7)),
        (((2, 3), (4, 5), (6, 7)), (1,)), (((2, 3), (4, 6)), (1, 5, 7)),
        (((2, 3), (4, 6), (5, 7)), (1,)), (((2, 3), (4, 7)), (1, 5, 6)),
        (((2, 3), (4, 7), (5, 6)), (1,)), (((2, 3), (5, 6)), (1, 4, 7)),
        (((2, 3), (5, 7)), (1, 4, 6)), (((2, 3), (6, 7)), (1, 4, 5)),
        (((2, 4),), (1, 3, 5, 6, 7)), (((2, 4), (3, 5)), (1, 6, 7)),
        (((2, 4), (3, 5), (6, 7)), (1,)), (((2, 4), (3, 6)), (1, 5, 7)),
        (((2, 4), (3, 6), (5, 7)), (1,)), (((2, 4), (3, 7)), (1, 5, 6)),
        (((2, 4), (3, 7), (5, 6)), (1,)), (((2, 4), (5, 6)), (1, 3, 7)),
        (((2, 4), (5, 7)), (1, 3, 6)), (((2, 4), (6, 7)), (1, 3, 5)),
        (((2, 5),), (1, 3, 4, 6, 7)), (((2, 5), (3, 4)), (1, 6, 7)),
        (((2, 5), (3, 4), (6, 7)), (1,)), (((2, 5), (3, 6)), (1, 4, 7)),
        (((2, 5), (3, 6), (4, 7)), (1,)), (((2, 5), (3, 7)), (1, 4, 6)),
        (((2, 5), (3, 7), (4, 6)), (1,)), (((2, 5), (4, 6)), (1, 3, 7)),
        (((2, 5), (4, 7)), (1, 3, 6)), (((2, 5), (6, 7)), (1, 3, 4)),
        (((2, 6),), (1, 3, 4, 5, 7)), (((2, 6), (3, 4)), (1, 5, 7)),
        (((2, 6), (3, 4), (5, 7)), (1,)), (((2, 6), (3, 5)), (1, 4, 7)),
        (((2, 6), (3, 5), (4, 7)), (1,)), (((2, 6), (3, 7)), (1, 4, 5)),
        (((2, 6), (3, 7), (4, 5)), (1,)), (((2, 6), (4, 5)), (1, 3, 7)),
        (((2, 6), (4, 7)), (1, 3, 5)), (((2, 6), (5, 7)), (1, 3, 4)),
        (((2, 7),), (1, 3, 4, 5, 6)), (((2, 7), (3, 4)), (1, 5, 6)),
        (((2, 7), (3, 4), (5, 6)), (1,)), (((2, 7), (3, 5)), (1, 4, 6)),
        (((2, 7), (3, 5), (4, 6)), (1,)), (((2, 7), (3, 6)), (1, 4, 5)),
        (((2, 7), (3, 6), (4, 5)), (1,)), (((2, 7), (4, 5)), (1, 3, 6)),
        (((2, 7), (4, 6)), (1, 3, 5)), (((2, 7), (5, 6)), (1, 3, 4)),
        (((3, 4),), (1, 2, 5, 6, 7)), (((3, 4), (5, 6)), (1, 2, 7)),
        (((3, 4), (5, 7)), (1, 2, 6)), (((3, 4), (6, 7)), (1, 2, 5)),
        (((3, 5),), (1, 2, 4, 6, 7)), (((3, 5), (4, 6)), (1, 2, 7)),
        (((3, 5), (4, 7)), (1, 2, 6)), (((3, 5), (6, 7)), (1, 2, 4)),
        (((3, 6),), (1, 2, 4, 5, 7)), (((3, 6), (4, 5)), (1, 2, 7)),
        (((3, 6), (4, 7)), (1, 2, 5)), (((3, 6), (5, 7)), (1, 2, 4)),
        (((3, 7),), (1, 2, 4, 5, 6)), (((3, 7), (4, 5)), (1, 2, 6)),
        (((3, 7), (4, 6)), (1, 2, 5)), (((3, 7), (5, 6)), (1, 2, 4)),
        (((4, 5),), (1, 2, 3, 6, 7)), (((4, 5), (6, 7)), (1, 2, 3)),
        (((4, 6),), (1, 2, 3, 5, 7)), (((4, 6), (5, 7)), (1, 2, 3)),
        (((4, 7),), (1, 2, 3, 5, 6)), (((4, 7), (5, 6)), (1, 2, 3)),
        (((5, 6),), (1, 2, 3, 4, 7)), (((5, 7),), (1, 2, 3, 4, 6)), (((6, 7),), (1, 2, 3, 4, 5)),
    ),
}


@dataclass(frozen=True)
class ExpansionResult:
    """Value of one truncated expansion plus bookkeeping."""

    value: float
    terms_evaluated: int
    orders: tuple[int, ...]


def _check_compatible(tensor: CoefficientTensor, pool: GaussianPool) -> None:
    spec = tensor.spec
    if pool.iv != spec.iv:
        raise CompatibilityError("pool and tensor live on different intervals")
    if pool.basis is not tensor.basis:
        raise CompatibilityError(
            f"pool basis {pool.basis.value} != tensor basis {tensor.basis.value}")
    if spec.max_index > pool.m:
        raise CompatibilityError(
            f"tensor uses component {spec.max_index} but pool has m = {pool.m}")
    if max(tensor.orders) > pool.jmax:
        raise CompatibilityError(
            f"tensor order {max(tensor.orders)} exceeds pool jmax = {pool.jmax}")


def _pool_rows(tensor: CoefficientTensor, pool: GaussianPool) -> list[np.ndarray]:
    shape = tensor.values.shape
    return [pool.values[tensor.spec.indices[level], :shape[level]]
            for level in range(tensor.spec.k)]


def truncated_expansion(tensor: CoefficientTensor, pool: GaussianPool) -> ExpansionResult:
    """General expansion: for every index tuple, the coefficient multiplies
    the product of pooled variables minus/plus the pair-partition correction
    terms.  Terms are evaluated as fixed-order contractions (one per
    partition) and accumulated with exact summation, so the result does not
    depend on evaluation parallelism."""
    spec = tensor.spec
    k = spec.k
    if k > MAX_MULTIPLICITY:
        raise UnsupportedMultiplicityError(
            f"multiplicity {k} exceeds supported cap {MAX_MULTIPLICITY}")
    _check_compatible(tensor, pool)
    shape = tensor.values.shape
    idx = spec.indices
    zeta = _pool_rows(tensor, pool)
    terms: list[float] = []
    for r in range(k // 2 + 1):
        sign = -1.0 if r % 2 else 1.0
        for part in pair_partitions(k, r):
            if not all(idx[a - 1] == idx[b - 1] and idx[a - 1] != 0
                       for a, b in part.pairs):
                continue
            slices = [slice(None)] * k
            labels = [0] * k
            for s, (a, b) in enumerate(part.pairs):
                d = min(shape[a - 1], shape[b - 1])
                slices[a - 1] = slices[b - 1] = slice(0, d)
                labels[a - 1] = labels[b - 1] = s
            operands = [tensor.values[tuple(slices)], labels]
            for w, q in enumerate(part.singles):
                labels[q - 1] = len(part.pairs) + w
                operands.extend([zeta[q - 1], [labels[q - 1]]])
            operands.append([])
            terms.append(sign * float(np.einsum(*operands)))
    return ExpansionResult(value=math.fsum(terms),
                           terms_evaluated=int(np.prod(shape)),
                           orders=tensor.orders)


def explicit_expansion(tensor: CoefficientTensor, pool: GaussianPool) -> ExpansionResult:
    """Hard-coded k <= 7 formulas evaluated via an explicit bracket tensor.

    The bracket starts as the outer product of the pooled rows; every frozen
    term whose component indicators hold adds its signed singleton product
    on the diagonal slice where the paired basis indices agree.  The value
    is the full contraction of the coefficient tensor with the bracket.
    """
    spec = tensor.spec
    k = spec.k
    if k > 7:
        raise UnsupportedMultiplicityError(
            f"explicit formulas cover k <= 7, got k = {k}")
    _check_compatible(tensor, pool)
    shape = tensor.values.shape
    idx = spec.indices
    zeta = _pool_rows(tensor, pool)
    bracket = reduce(np.multiply.outer, zeta).reshape(shape).copy()
    for pairs, singles in _EXPLICIT_TERMS[k]:
        if not all(idx[a - 1] == idx[b - 1] and idx[a - 1] != 0 for a, b in pairs):
            continue
        sign = -1.0 if len(pairs) % 2 else 1.0
        ndim = len(pairs) + len(singles)
        index: list[np.ndarray] = [np.empty(0, dtype=int)] * k
        for s, (a, b) in enumerate(pairs):
            d = min(shape[a - 1], shape[b - 1])
            diag = np.arange(d).reshape((1,) * s + (d,) + (1,) * (ndim - s - 1))
            index[a - 1] = diag
            index[b - 1] = diag
        term = np.full((1,) * ndim, sign)
        for w, q in enumerate(singles):
            pos = len(pairs) + w
            axis_shape = (1,) * pos + (shape[q - 1],) + (1,) * (ndim - pos - 1)
            index[q - 1] = np.arange(shape[q - 1]).reshape(axis_shape)
            term = term * zeta[q - 1].reshape(axis_shape)
        bracket[tuple(index)] += np.broadcast_to(
            term, np.broadcast_shapes(*(ix.shape for ix in index)))
    labels = list(range(k))
    value = float(np.einsum(tensor.values, labels, bracket, labels, []))
    return ExpansionResult(value=value,
                           terms_evaluated=int(np.prod(shape)),
                           orders=tensor.orders)


def hermite_reference(k: int, delta: float, variance: float) -> float:
    """Closed-form equal-weight, equal-component integral value.

    delta is the (possibly truncated) weighted Wiener integral and variance
    the corresponding quadratic mass; k ranges over 1..7.
    """
    if not 1 <= k <= 7:
        raise UnsupportedMultiplicityError(f"reference polynomials cover k in 1..7, got {k}")
    if variance < 0.0:
        raise DomainError("variance must be >= 0")
    d, v = float(delta), float(variance)
    if k == 1:
        poly = d
    elif k == 2:
        poly = d**2 - v
    elif k == 3:
        poly = d**3 - 3 * d * v
    elif k == 4:
        poly = d**4 - 6 * d**2 * v + 3 * v**2
    elif k == 5:
        poly = d**5 - 10 * d**3 * v + 15 * d * v**2
    elif k == 6:
        poly = d**6 - 15 * d**4 * v + 45 * d**2 * v**2 - 15 * v**3
    else:
        poly = d**7 - 21 * d**5 * v + 105 * d**3 * v**2 - 105 * d * v**3
    return poly / math.factorial(k)
