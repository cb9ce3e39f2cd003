"""Shared enumeration helpers and exhaustive sweep implementations.

The sweep functions assert structural properties (monotonicity of p-values
under unit moves, frontier characterizations, contiguity of accepted effect
sets) over every table of a given size. Both the property tests and the
acceptance suite call them, at their respective sizes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from exactci.methods import frontier_scan
from exactci.randtest import p_one_sided, p_two_sided
from exactci.tables import (
    CONTROL_SIDE_MOVES,
    MOVES,
    ObservedTable,
    PotentialTable,
    is_compatible,
)


def observed_tables(n: int) -> Iterator[ObservedTable]:
    """All observed tables of size n with both arms non-empty."""
    for n11 in range(n + 1):
        for n10 in range(n - n11 + 1):
            m = n11 + n10
            if m == 0 or m == n:
                continue
            for n01 in range(n - m + 1):
                yield ObservedTable(n11, n10, n01, n - m - n01)


def potential_tables(n: int) -> Iterator[PotentialTable]:
    """All potential tables of size n."""
    for N11 in range(n + 1):
        for N10 in range(n - N11 + 1):
            for N01 in range(n - N11 - N10 + 1):
                yield PotentialTable(N11, N10, N01, n - N11 - N10 - N01)


def tau_hat_grid(n: int, m: int) -> list[Fraction]:
    """All values the estimate can take under a design (n, m)."""
    return sorted(
        {
            Fraction(a, m) - Fraction(b, n - m)
            for a in range(m + 1)
            for b in range(n - m + 1)
        }
    )


def _obs_with_estimate(n: int, m: int, t_obs: Fraction) -> ObservedTable:
    """Some observed table of design (n, m) whose estimate equals t_obs."""
    for a in range(m + 1):
        b_frac = (Fraction(a, m) - t_obs) * (n - m)
        if b_frac.denominator == 1 and 0 <= b_frac <= n - m:
            return ObservedTable(a, m - a, int(b_frac), n - m - int(b_frac))
    raise ValueError(f"estimate {t_obs} not attainable for n={n}, m={m}")


def check_p1_move_monotonicity(n: int) -> None:
    """One-sided p-values never decrease under any unit move.

    Checked as stochastic dominance of the null distributions, which covers
    every possible observed estimate at once.
    """
    from exactci.randtest import _scaled_atoms

    for m in range(1, n):
        for N in potential_tables(n):
            base = dict(_scaled_atoms(N.as_tuple(), m))
            for mv in MOVES:
                shifted = N.shifted(mv.delta)
                if shifted is None:
                    continue
                moved = dict(_scaled_atoms(shifted.as_tuple(), m))
                thresholds = sorted(set(base) | set(moved))
                tail_base = 0
                tail_moved = 0
                # walk thresholds from the top; compare upper tails
                for t in reversed(thresholds):
                    tail_base += base.get(t, 0)
                    tail_moved += moved.get(t, 0)
                    assert tail_moved >= tail_base, (
                        f"dominance violated at n={n}, m={m}, N={N.as_tuple()}, "
                        f"move={mv.delta}, threshold={t}"
                    )


def check_p2_move_monotonicity(n: int, balanced: bool) -> None:
    """Two-sided p-values never decrease under moves, below the estimate.

    balanced=False: designs with m <= n/2 and the control-side moves only.
    balanced=True: designs with m = n/2 and all four moves.
    """
    for m in range(1, n):
        if balanced and 2 * m != n:
            continue
        if not balanced and 2 * m > n:
            continue
        moves = MOVES if balanced else CONTROL_SIDE_MOVES
        grid = tau_hat_grid(n, m)
        obs_by_estimate = {t: _obs_with_estimate(n, m, t) for t in grid}
        for N in potential_tables(n):
            for mv in moves:
                shifted = N.shifted(mv.delta)
                if shifted is None:
                    continue
                for t_obs in grid:
                    if shifted.tau > t_obs:  # both taus must sit at or below t_obs
                        continue
                    nobs = obs_by_estimate[t_obs]
                    assert p_two_sided(shifted, nobs) >= p_two_sided(N, nobs), (
                        f"p2 monotonicity violated at n={n}, m={m}, "
                        f"N={N.as_tuple()}, move={mv.delta}, t_obs={t_obs}"
                    )


def check_one_sided_frontier_characterization(n: int, alphas: tuple[Fraction, ...]) -> None:
    """p1 >= alpha holds exactly for tables at or above the scan's frontier."""
    for nobs in observed_tables(n):
        for alpha in alphas:
            scan = frontier_scan(nobs, alpha, "one_sided")
            for N in potential_tables(n):
                key = (N.N11, N.N01)
                if key not in scan.frontiers:  # scan covers N11 <= n11 + n01
                    continue
                accepted = p_one_sided(N, nobs) >= alpha
                at_or_above = N.N10 >= scan.frontiers[key]
                assert accepted == at_or_above, (
                    f"one-sided frontier mismatch at nobs={nobs.as_tuple()}, "
                    f"alpha={alpha}, N={N.as_tuple()}"
                )


def check_two_sided_frontier_characterization(n: int, alphas: tuple[Fraction, ...]) -> None:
    """In balanced designs, p2 >= alpha iff at or above the frontier (below the estimate)."""
    if n % 2:
        return
    for nobs in observed_tables(n):
        if nobs.m * 2 != n:
            continue
        for alpha in alphas:
            scan = frontier_scan(nobs, alpha, "two_sided")
            for N in potential_tables(n):
                if N.tau > nobs.tau_hat:
                    continue
                key = (N.N11, N.N01)
                if key not in scan.frontiers:  # scan covers N11 <= n11 + n01
                    continue
                accepted = p_two_sided(N, nobs) >= alpha
                at_or_above = N.N10 >= scan.frontiers[key]
                assert accepted == at_or_above, (
                    f"two-sided frontier mismatch at nobs={nobs.as_tuple()}, "
                    f"alpha={alpha}, N={N.as_tuple()}"
                )


def accepted_ntau_two_sided(nobs: ObservedTable, alpha: Fraction) -> set[int]:
    """Accepted n*tau values of the two-sided frontier inversion (both sides)."""
    work = nobs.switch_z() if nobs.m > nobs.n - nobs.m else nobs
    below = frontier_scan(work, alpha, "two_sided").accepted_ntau
    above = {-k for k in frontier_scan(work.switch_y(), alpha, "two_sided").accepted_ntau}
    out = below | above
    if work is not nobs:
        out = {-k for k in out}
    return out


def check_contiguity(n: int, alphas: tuple[Fraction, ...]) -> None:
    """Accepted n*tau sets form contiguous integer ranges.

    Two-sided: balanced designs. One-sided: all designs, with the upper
    endpoint pinned at n11 + n00.
    """
    for nobs in observed_tables(n):
        for alpha in alphas:
            scan = frontier_scan(nobs, alpha, "one_sided")
            acc = scan.accepted_ntau
            assert acc, f"one-sided acceptance empty for {nobs.as_tuple()}, alpha={alpha}"
            assert max(acc) == nobs.n11 + nobs.n00
            assert max(acc) - min(acc) + 1 == len(acc), (
                f"one-sided acceptance has gaps for {nobs.as_tuple()}, alpha={alpha}"
            )
            if nobs.m * 2 == n:
                acc2 = accepted_ntau_two_sided(nobs, alpha)
                assert acc2, f"two-sided acceptance empty for {nobs.as_tuple()}"
                assert max(acc2) - min(acc2) + 1 == len(acc2), (
                    f"two-sided acceptance has gaps for {nobs.as_tuple()}, alpha={alpha}"
                )


def check_compatibility_agreement(n: int) -> None:
    """Closed-form compatibility equals the brute-force integer-solution scan."""
    from exactci.oracle import brute_compatibility

    for nobs in observed_tables(n):
        for N in potential_tables(n):
            assert is_compatible(N, nobs) == brute_compatibility(N, nobs), (
                f"compatibility mismatch: nobs={nobs.as_tuple()}, N={N.as_tuple()}"
            )


def check_unbiasedness(n: int) -> None:
    """The null distribution's mean equals the table's effect, exactly."""
    from exactci.randtest import null_dist

    for m in range(1, n):
        for N in potential_tables(n):
            mean = sum(v * p for v, p in null_dist(N, m))
            assert mean == N.tau, f"bias at N={N.as_tuple()}, m={m}: {mean} != {N.tau}"


def check_null_dist_vs_assignment_enumeration(n: int) -> None:
    """Split-based null distribution equals full assignment enumeration."""
    from exactci.oracle import enumerate_assignments, units_from_table
    from exactci.randtest import null_dist

    for m in range(1, n):
        for N in potential_tables(n):
            assert null_dist(N, m) == enumerate_assignments(units_from_table(N), m), (
                f"null distribution mismatch at N={N.as_tuple()}, m={m}"
            )
