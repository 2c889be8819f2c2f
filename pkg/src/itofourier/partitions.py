"""Partitions of {1..k} into r unordered pairs plus singletons.

These index the sign-alternating correction terms of the general expansion:
each partition selects r index pairs that must carry equal components and
equal basis indices, with the remaining k - 2r positions contributing plain
Gaussian factors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError


@dataclass(frozen=True)
class PairPartition:
    """Canonical form: pairs sorted internally and by first element,
    singles ascending; together they cover {1..k} exactly once."""

    pairs: tuple[tuple[int, int], ...]
    singles: tuple[int, ...]

    def __post_init__(self):
        seen = sorted([g for p in self.pairs for g in p] + list(self.singles))
        k = len(seen)
        if seen != list(range(1, k + 1)):
            raise DomainError(f"partition entries must cover 1..{k} exactly once: {seen}")
        if any(a >= b for a, b in self.pairs):
            raise DomainError("each pair must be internally sorted")
        if list(self.pairs) != sorted(self.pairs) or list(self.singles) != sorted(self.singles):
            raise DomainError("pairs and singles must be in canonical order")

    @property
    def k(self) -> int:
        return 2 * len(self.pairs) + len(self.singles)

    def format(self) -> str:
        pairs = "".join(f"({a} {b})" for a, b in self.pairs)
        return pairs + "|" + " ".join(str(q) for q in self.singles)


def partition_count(k: int, r: int) -> int:
    """Number of partitions of {1..k} into r pairs and k-2r singletons."""
    _check_kr(k, r)
    return math.factorial(k) // (2**r * math.factorial(r) * math.factorial(k - 2 * r))


def _check_kr(k: int, r: int) -> None:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if r < 0 or 2 * r > k:
        raise DomainError(f"need 0 <= 2r <= k, got k={k}, r={r}")


def _matchings(elements: tuple[int, ...]):
    """Perfect matchings of an even-sized sorted tuple; the smallest
    unmatched element always leads the next pair."""
    if not elements:
        yield ()
        return
    head, rest = elements[0], elements[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in _matchings(remaining):
            yield ((head, partner),) + tail


@lru_cache(maxsize=None)
def pair_partitions(k: int, r: int) -> tuple[PairPartition, ...]:
    """All partitions of {1..k} into r pairs plus singletons, each exactly
    once in canonical form, ordered lexicographically by pair list."""
    _check_kr(k, r)
    out = []
    universe = tuple(range(1, k + 1))
    for paired in itertools.combinations(universe, 2 * r):
        singles = tuple(x for x in universe if x not in paired)
        for pairs in _matchings(paired):
            out.append(PairPartition(pairs=tuple(sorted(pairs)), singles=singles))
    out.sort(key=lambda p: (p.pairs, p.singles))
    return tuple(out)
