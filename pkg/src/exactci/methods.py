"""Confidence interval constructions for the average causal effect.

Five constructions, all with guaranteed finite-sample coverage:

* ``ci_bonferroni``: intersect two marginal hypergeometric count intervals.
* ``ci_margin_inversion``: invert tests whose statistic depends on the
  potential table only through the control-response margin, so no
  randomization tests are needed.
* ``ci_two_sided_frontier``: invert two-sided randomization tests, using the
  monotone acceptance frontier to keep the number of tests O(n^2).
* ``ci_one_sided``: one-sided analogue of the frontier inversion.
* ``ci_brute_force``: test every compatible potential table directly; the
  O(n^4)-tests baseline and the reference the frontier method is checked
  against.

Every result carries the count of randomization tests performed (one test =
one p-value evaluation for one candidate table; frontier fallback assignments
count zero).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .errors import EmptyAcceptance, InvalidLevel
from .hypergeom import ci_count
from .randtest import PValueMode, TestCounter, make_p_evaluator
from .tables import (
    ObservedTable,
    PotentialTable,
    attainable_ntau_range,
    is_compatible,
    iter_cell_decompositions,
    iter_compatible,
)

__all__ = [
    "MethodResult",
    "FrontierScan",
    "METHOD_IDS",
    "ci_bonferroni",
    "ci_margin_inversion",
    "ci_two_sided_frontier",
    "ci_one_sided",
    "ci_brute_force",
    "frontier_scan",
    "compute_ci",
]

METHOD_IDS = (
    "bonferroni",
    "margin_inversion",
    "two_sided_frontier",
    "one_sided_lower",
    "one_sided_upper",
    "brute_force",
)


@dataclass(frozen=True)
class MethodResult:
    """A confidence interval for the effect plus run instrumentation."""

    method: str
    table: ObservedTable
    alpha: Fraction
    ci_ntau: tuple[int, int]
    tests: int
    mode: str
    elapsed_ms: float

    @property
    def ci_tau(self) -> tuple[Fraction, Fraction]:
        n = self.table.n
        return (Fraction(self.ci_ntau[0], n), Fraction(self.ci_ntau[1], n))


@dataclass
class FrontierScan:
    """Result of one lower-side frontier sweep.

    frontiers maps (N11, N01) to the minimum accepted N10 (fallback value when
    nothing in range is accepted). accepted_ntau collects n*tau over
    compatible tables on or above the frontier.
    """

    frontiers: dict[tuple[int, int], int] = field(default_factory=dict)
    accepted_ntau: set[int] = field(default_factory=set)
    tests: int = 0


def _check_alpha(alpha: Fraction) -> Fraction:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise InvalidLevel(f"alpha must be in (0, 1), got {alpha}")
    return alpha


def frontier_scan(
    nobs: ObservedTable,
    alpha: Fraction,
    statistic: Literal["one_sided", "two_sided"] = "two_sided",
    mode: PValueMode = PValueMode.exact(),
) -> FrontierScan:
    """Lower-side acceptance sweep over (N11, N01) cells.

    For each N11, N01 increases from 0 and the N10 search resumes from the
    previous frontier value, which the frontier's monotonicity in N01
    justifies. Candidates beyond the observed estimate (two-sided) or with a
    negative forced fourth cell are skipped without testing; if no candidate
    is accepted the frontier takes its fallback value (one above the last
    admissible N10 for two-sided, n+1 for one-sided).

    Two-sided scans require m <= n - m; the caller conjugates by a treatment
    label switch otherwise.
    """
    alpha = _check_alpha(alpha)
    n, m = nobs.n, nobs.m
    if statistic == "two_sided" and m > n - m:
        raise ValueError("two-sided frontier scan requires m <= n - m; switch treatment labels first")
    counter = TestCounter()
    p_eval = make_p_evaluator(nobs, statistic, mode, counter)
    two_sided = statistic == "two_sided"
    ntau_obs = nobs.tau_hat * n
    floor_nt = math.floor(ntau_obs)  # exact: Fraction floor
    out = FrontierScan()
    for N11 in range(0, nobs.n11 + nobs.n01 + 1):
        carry = 0
        for N01 in range(0, n - N11 + 1):
            avail = n - N11 - N01  # max N10 keeping the fourth cell non-negative
            hi = min(N01 + floor_nt, avail) if two_sided else avail
            frontier = None
            N10 = carry
            while N10 <= hi:
                N = PotentialTable(N11, N10, N01, n - N11 - N10 - N01)
                if p_eval(N) >= alpha:
                    frontier = N10
                    break
                N10 += 1
            if frontier is None:
                frontier = (N01 + floor_nt + 1) if two_sided else (n + 1)
            out.frontiers[(N11, N01)] = frontier
            carry = max(frontier, 0)
            for N10 in range(max(frontier, 0), hi + 1):
                N = PotentialTable(N11, N10, N01, n - N11 - N10 - N01)
                if is_compatible(N, nobs):
                    out.accepted_ntau.add(N10 - N01)
    out.tests = counter.count
    return out


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1000.0


def ci_bonferroni(nobs: ObservedTable, alpha: Fraction, refine: bool = False) -> MethodResult:
    """Intersect marginal count intervals for the two response totals.

    Each margin gets a level 1 - alpha/2 hypergeometric interval; the
    difference interval is clipped to the attainable n*tau range. No
    randomization tests.
    """
    alpha = _check_alpha(alpha)

    def run() -> tuple[int, int]:
        n, m = nobs.n, nobs.m
        t_lo, t_hi = ci_count(n, m, nobs.n11, alpha / 2, refine=refine)
        c_lo, c_hi = ci_count(n, n - m, nobs.n01, alpha / 2, refine=refine)
        a_lo, a_hi = attainable_ntau_range(nobs)
        return (max(t_lo - c_hi, a_lo), min(t_hi - c_lo, a_hi))

    ci, ms = _timed(run)
    return MethodResult("bonferroni", nobs, alpha, ci, 0, "exact", ms)


def ci_margin_inversion(nobs: ObservedTable, alpha: Fraction, refine: bool = False) -> MethodResult:
    """Invert tests that depend only on the control-response margin.

    The test statistic is a monotone function of the control responders drawn
    into the control arm, so its null distribution depends on the potential
    table only through that margin; acceptance reduces to a level 1 - alpha
    hypergeometric interval for the margin, and the interval endpoints are the
    extreme effects over compatible tables with an accepted margin.
    """
    alpha = _check_alpha(alpha)

    def run() -> tuple[int, int]:
        n, m = nobs.n, nobs.m
        g_lo, g_hi = ci_count(n, n - m, nobs.n01, alpha, refine=refine)
        g_lo = max(g_lo, nobs.n01)
        g_hi = min(g_hi, n - nobs.n00)
        accepted = [
            N.ntau for N in iter_compatible(nobs) if g_lo <= N.nplus1 <= g_hi
        ]
        if not accepted:
            raise EmptyAcceptance(
                f"no compatible table with control-response margin in [{g_lo}, {g_hi}]"
            )
        return (min(accepted), max(accepted))

    ci, ms = _timed(run)
    return MethodResult("margin_inversion", nobs, alpha, ci, 0, "exact", ms)


def ci_two_sided_frontier(
    nobs: ObservedTable,
    alpha: Fraction,
    mode: PValueMode = PValueMode.exact(),
) -> MethodResult:
    """Two-sided randomization-test inversion via the monotone frontier.

    The side below the observed estimate is scanned directly; the side above
    is the same scan after switching outcome labels (which negates effects).
    Designs with m > n - m are conjugated by a treatment label switch.
    """
    alpha = _check_alpha(alpha)

    def run() -> tuple[tuple[int, int], int]:
        switched = nobs.m > nobs.n - nobs.m
        work = nobs.switch_z() if switched else nobs
        below = frontier_scan(work, alpha, "two_sided", mode)
        above = frontier_scan(work.switch_y(), alpha, "two_sided", mode)
        accepted = set(below.accepted_ntau) | {-k for k in above.accepted_ntau}
        if switched:
            accepted = {-k for k in accepted}
        if not accepted:
            raise EmptyAcceptance("two-sided frontier accepted no compatible table")
        return (min(accepted), max(accepted)), below.tests + above.tests

    (ci, tests), ms = _timed(run)
    return MethodResult("two_sided_frontier", nobs, alpha, ci, tests, mode.variant, ms)


def ci_one_sided(
    nobs: ObservedTable,
    alpha: Fraction,
    direction: Literal["lower", "upper"] = "lower",
    mode: PValueMode = PValueMode.exact(),
) -> MethodResult:
    """One-sided randomization-test inversion via the monotone frontier.

    The lower interval always reaches up to the maximum attainable effect
    (n11 + n00)/n; the upper interval is the outcome-label conjugate.
    """
    alpha = _check_alpha(alpha)

    def run() -> tuple[tuple[int, int], int]:
        work = nobs if direction == "lower" else nobs.switch_y()
        scan = frontier_scan(work, alpha, "one_sided", mode)
        if not scan.accepted_ntau:
            raise EmptyAcceptance("one-sided frontier accepted no compatible table")
        lo = min(scan.accepted_ntau)
        hi = work.n11 + work.n00
        if direction == "upper":
            lo, hi = -hi, -lo
        return (lo, hi), scan.tests

    (ci, tests), ms = _timed(run)
    method = "one_sided_lower" if direction == "lower" else "one_sided_upper"
    return MethodResult(method, nobs, alpha, ci, tests, mode.variant, ms)


def ci_brute_force(
    nobs: ObservedTable,
    alpha: Fraction,
    mode: PValueMode = PValueMode.exact(),
) -> MethodResult:
    """Test every compatible potential table; reference implementation.

    Candidates come from the cell-wise decomposition enumeration, one
    randomization test each, so the count is (n11+1)(n10+1)(n01+1)(n00+1)
    (duplicated tables are retested, as in the classical baseline).
    """
    alpha = _check_alpha(alpha)

    def run() -> tuple[tuple[int, int], int]:
        counter = TestCounter()
        p_eval = make_p_evaluator(nobs, "two_sided", mode, counter)
        accepted = [N.ntau for N in iter_cell_decompositions(nobs) if p_eval(N) >= alpha]
        if not accepted:
            raise EmptyAcceptance("no compatible table accepted at this level")
        return (min(accepted), max(accepted)), counter.count

    (ci, tests), ms = _timed(run)
    return MethodResult("brute_force", nobs, alpha, ci, tests, mode.variant, ms)


def compute_ci(
    method: str,
    nobs: ObservedTable,
    alpha: Fraction,
    mode: PValueMode = PValueMode.exact(),
    refine: bool = False,
) -> MethodResult:
    """Dispatch by method id (see METHOD_IDS)."""
    if method == "bonferroni":
        return ci_bonferroni(nobs, alpha, refine=refine)
    if method == "margin_inversion":
        return ci_margin_inversion(nobs, alpha, refine=refine)
    if method == "two_sided_frontier":
        return ci_two_sided_frontier(nobs, alpha, mode)
    if method == "one_sided_lower":
        return ci_one_sided(nobs, alpha, "lower", mode)
    if method == "one_sided_upper":
        return ci_one_sided(nobs, alpha, "upper", mode)
    if method == "brute_force":
        return ci_brute_force(nobs, alpha, mode)
    raise ValueError(f"unknown method {method!r}; expected one of {METHOD_IDS}")
