"""Brute-force validation oracles.

Everything here recomputes quantities from first principles: assignment
distributions by iterating every size-m subset of an explicit unit list,
compatibility by scanning candidate integer solutions, and acceptance
frontiers by testing every N10 directly against the defining condition.
Deliberately slow; used only to cross-check the fast paths.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Literal

from .errors import ScaleGuard
from .randtest import p_one_sided, p_two_sided
from .tables import ObservedTable, PotentialTable

__all__ = [
    "units_from_table",
    "enumerate_assignments",
    "brute_compatibility",
    "brute_frontier",
]

MAX_ENUM_N = 14


def units_from_table(N: PotentialTable) -> list[tuple[int, int]]:
    """Canonical per-unit potential outcome list summarized by N."""
    return (
        [(1, 1)] * N.N11 + [(1, 0)] * N.N10 + [(0, 1)] * N.N01 + [(0, 0)] * N.N00
    )


def enumerate_assignments(
    units: list[tuple[int, int]], m: int
) -> list[tuple[Fraction, Fraction]]:
    """Exact distribution of the estimate over all size-m treated subsets."""
    n = len(units)
    if n > MAX_ENUM_N:
        raise ScaleGuard(f"full assignment enumeration limited to n <= {MAX_ENUM_N}, got {n}")
    total = math.comb(n, m)
    counts: dict[Fraction, int] = {}
    idx = range(n)
    for treated in combinations(idx, m):
        tset = set(treated)
        resp_treated = sum(units[j][0] for j in tset)
        resp_control = sum(units[j][1] for j in idx if j not in tset)
        est = Fraction(resp_treated, m) - Fraction(resp_control, n - m)
        counts[est] = counts.get(est, 0) + 1
    return sorted((v, Fraction(c, total)) for v, c in counts.items())


def brute_compatibility(N: PotentialTable, nobs: ObservedTable) -> bool:
    """Compatibility by direct search for an integer treated-count solution.

    Scans the number of always-responders assigned to treatment and checks
    the box constraints on the three forced counts.
    """
    for x11 in range(0, N.N11 + 1):
        x10 = nobs.n11 - x11
        x01 = N.N11 + N.N01 - nobs.n01 - x11
        x00 = x11 + nobs.n01 + nobs.n10 - N.N11 - N.N01
        if 0 <= x10 <= N.N10 and 0 <= x01 <= N.N01 and 0 <= x00 <= N.N00:
            return True
    return False


def brute_frontier(
    N11: int,
    N01: int,
    nobs: ObservedTable,
    alpha: Fraction,
    statistic: Literal["one_sided", "two_sided"] = "two_sided",
) -> int:
    """Definitional minimum accepted N10 for a (N11, N01) cell.

    Tests every N10 from 0 up; falls back to one above the last N10 keeping
    the effect at or below the observed estimate (two-sided) or to n+1
    (one-sided) when nothing is accepted.
    """
    n = nobs.n
    ntau_obs = nobs.tau_hat * n
    for N10 in range(0, n - N11 - N01 + 1):
        N = PotentialTable(N11, N10, N01, n - N11 - N10 - N01)
        if statistic == "two_sided":
            if N.ntau > ntau_obs:
                break
            if p_two_sided(N, nobs) >= alpha:
                return N10
        else:
            if p_one_sided(N, nobs) >= alpha:
                return N10
    if statistic == "two_sided":
        return math.floor(N01 + ntau_obs) + 1
    return n + 1
