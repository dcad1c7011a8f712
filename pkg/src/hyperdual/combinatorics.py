"""Summation indices and the pole-pairing maps.

Compositions of K into n parts index the hypergeometric sums; r-subsets of
{1..n} index the kernel-function sums. For a shift p the compositions whose
u_1-dependent denominators vanish at u_1 = q^p u_2 split into two groups,
I_p and II_p, exchanged by phi_p(k) = (k_2 - p, k_1 + p, k_3, ..., k_n).
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterator

from .errors import DomainError

Composition = tuple
IndexSubset = tuple


def compositions(n: int, K: int) -> Iterator[Composition]:
    """Yield all n-tuples of non-negative integers summing to K, lexicographically
    decreasing in the first part (so (2,0), (1,1), (0,2) for n=K=2)."""
    if n < 1:
        raise DomainError(f"number of parts must be >= 1, got {n}")
    if K < 0:
        raise DomainError(f"total must be >= 0, got {K}")
    if n == 1:
        yield (K,)
        return
    for first in range(K, -1, -1):
        for rest in compositions(n - 1, K - first):
            yield (first, *rest)


def subsets(n: int, r: int) -> Iterator[IndexSubset]:
    """Yield every r-element subset of {1, ..., n} as a sorted tuple."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= r <= n:
        raise DomainError(f"subset size must satisfy 0 <= r <= n, got r={r}, n={n}")
    return itertools.combinations(range(1, n + 1), r)


class PoleSet(enum.Enum):
    IN_I = "InI_p"
    IN_II = "InII_p"
    NEITHER = "Neither"


def pole_set_membership(k: Composition, p: int) -> PoleSet:
    if len(k) < 2:
        raise DomainError("membership needs a composition with at least two parts")
    k1, k2 = k[0], k[1]
    in_first = k1 >= k2 + 1 - p and k2 >= p
    in_second = k1 >= -p and k2 >= k1 + 1 + p
    assert not (in_first and in_second), f"I_p and II_p overlap at k={k}, p={p}"
    if in_first:
        return PoleSet.IN_I
    if in_second:
        return PoleSet.IN_II
    return PoleSet.NEITHER


def phi_map(k: Composition, p: int) -> Composition:
    """(k_1, k_2, k') -> (k_2 - p, k_1 + p, k'); defined on I_p and II_p only."""
    if pole_set_membership(k, p) is PoleSet.NEITHER:
        raise DomainError(f"k={tuple(k)} lies in neither I_{p} nor II_{p}")
    return (k[1] - p, k[0] + p, *k[2:])


def pole_set(n: int, K: int, p: int, which: PoleSet = PoleSet.IN_I) -> list:
    """All compositions of K into n parts belonging to ``which``."""
    return [k for k in compositions(n, K) if pole_set_membership(k, p) is which]
