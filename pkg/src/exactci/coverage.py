"""Exact coverage evaluation of interval methods by full enumeration.

For a fixed design (n, m) and a true potential table, the probability that a
method's interval covers the true effect is a finite exact sum over the
multivariate hypergeometric treated-count splits: each split induces one
observed table, and the method is evaluated once per distinct induced table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .errors import ScaleGuard
from .randtest import _iter_splits
from .tables import ObservedTable, PotentialTable

__all__ = ["CoverageReport", "exact_coverage_sweep", "induced_observed"]

MAX_COVERAGE_N = 14

CIFn = Callable[[ObservedTable], tuple[int, int]]


@dataclass(frozen=True)
class CoverageReport:
    n: int
    m: int
    alpha: Fraction
    per_table: tuple[tuple[PotentialTable, Fraction], ...]

    @property
    def min_coverage(self) -> Fraction:
        return min(c for _, c in self.per_table)

    @property
    def mean_coverage(self) -> Fraction:
        return sum(c for _, c in self.per_table) / len(self.per_table)

    def violators(self, level: Fraction) -> list[tuple[PotentialTable, Fraction]]:
        return [(N, c) for N, c in self.per_table if c < level]


def induced_observed(
    N: PotentialTable, m: int, split: tuple[int, int, int, int]
) -> ObservedTable:
    """Observed table produced by N under a given treated-count split."""
    x11, x10, x01, _ = split
    n11 = x11 + x10
    n01 = (N.N11 - x11) + (N.N01 - x01)
    return ObservedTable(n11, m - n11, n01, N.n - m - n01)


def _iter_potential_tables(n: int):
    for N11 in range(n + 1):
        for N10 in range(n - N11 + 1):
            for N01 in range(n - N11 - N10 + 1):
                yield PotentialTable(N11, N10, N01, n - N11 - N10 - N01)


def exact_coverage_sweep(
    n: int,
    m: int,
    alpha: Fraction,
    ci_fn: CIFn,
) -> CoverageReport:
    """Exact coverage of ci_fn for every potential table of size n.

    ci_fn maps an observed table to an (n*tau lower, upper) interval; results
    are cached per distinct observed table so each interval is computed once.
    """
    if n > MAX_COVERAGE_N:
        raise ScaleGuard(f"exact coverage sweep limited to n <= {MAX_COVERAGE_N}, got {n}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got m={m}")
    cache: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    cn = comb(n, m)
    rows = []
    for N in _iter_potential_tables(n):
        covered = 0
        for x11, x10, x01, x00, w in _iter_splits(N, m):
            nobs = induced_observed(N, m, (x11, x10, x01, x00))
            key = nobs.as_tuple()
            ci = cache.get(key)
            if ci is None:
                ci = ci_fn(nobs)
                cache[key] = ci
            if ci[0] <= N.ntau <= ci[1]:
                covered += w
        rows.append((N, Fraction(covered, cn)))
    return CoverageReport(n, m, Fraction(alpha), tuple(rows))
