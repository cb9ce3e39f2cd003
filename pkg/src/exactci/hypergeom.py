"""Exact hypergeometric probabilities and exact count-parameter intervals.

X ~ HyperGeo(marked, total, sample) is the number of marked units in a simple
random sample of `sample` units drawn from `total` units of which `marked`
carry the attribute. Probabilities are exact rationals built from big-integer
binomial coefficients.

`ci_count` inverts the two exact tails at level alpha (equal-tail, strict
inequality), giving a gap-free interval for the marked count with guaranteed
coverage at least 1 - alpha for every true value. An optional refinement pass
shrinks endpoints as long as exhaustively verified coverage is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InvalidLevel

__all__ = ["HyperGeomSpec", "pmf", "tail_ge", "tail_le", "ci_count"]


@dataclass(frozen=True)
class HyperGeomSpec:
    """Parameters (marked, total, sample) of a hypergeometric draw."""

    marked: int
    total: int
    sample: int

    def __post_init__(self) -> None:
        if not 0 <= self.marked <= self.total:
            raise ValueError(f"need 0 <= marked <= total, got {self}")
        if not 0 <= self.sample <= self.total:
            raise ValueError(f"need 0 <= sample <= total, got {self}")

    @property
    def support(self) -> tuple[int, int]:
        lo = max(0, self.sample - (self.total - self.marked))
        hi = min(self.sample, self.marked)
        return (lo, hi)


@lru_cache(maxsize=200_000)
def _weight(marked: int, total: int, sample: int, x: int) -> int:
    """Unnormalized pmf numerator C(marked, x) * C(total-marked, sample-x)."""
    return comb(marked, x) * comb(total - marked, sample - x)


def pmf(spec: HyperGeomSpec, x: int) -> Fraction:
    """P(X = x), exact; zero off the support."""
    lo, hi = spec.support
    if x < lo or x > hi:
        return Fraction(0)
    return Fraction(
        _weight(spec.marked, spec.total, spec.sample, x),
        comb(spec.total, spec.sample),
    )


def tail_ge(spec: HyperGeomSpec, x: int) -> Fraction:
    """P(X >= x), exact; nondecreasing in the marked count."""
    lo, hi = spec.support
    if x <= lo:
        return Fraction(1)
    if x > hi:
        return Fraction(0)
    num = sum(_weight(spec.marked, spec.total, spec.sample, j) for j in range(x, hi + 1))
    return Fraction(num, comb(spec.total, spec.sample))


def tail_le(spec: HyperGeomSpec, x: int) -> Fraction:
    """P(X <= x), exact; nonincreasing in the marked count."""
    lo, hi = spec.support
    if x >= hi:
        return Fraction(1)
    if x < lo:
        return Fraction(0)
    num = sum(_weight(spec.marked, spec.total, spec.sample, j) for j in range(lo, x + 1))
    return Fraction(num, comb(spec.total, spec.sample))


def _check_alpha(alpha: Fraction) -> Fraction:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise InvalidLevel(f"alpha must be in (0, 1), got {alpha}")
    return alpha


@lru_cache(maxsize=20_000)
def _suffix_weights(total: int, sample: int) -> tuple[tuple[int, ...], ...]:
    """suffix[marked][x] = unnormalized P(X >= x) for each marked count."""
    rows = []
    for marked in range(total + 1):
        suffix = [0] * (sample + 2)
        for x in range(sample, -1, -1):
            suffix[x] = suffix[x + 1] + _weight(marked, total, sample, x)
        rows.append(tuple(suffix))
    return tuple(rows)


@lru_cache(maxsize=20_000)
def _equal_tail_tables(total: int, sample: int, alpha: Fraction) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Endpoint arrays (lo[x], hi[x]) of the equal-tail inversion for all x.

    Both arrays are nondecreasing in x; the scans exploit that. Tail
    comparisons run on cleared denominators: W/cn > p/q  <=>  W*q > p*cn.
    """
    suffix = _suffix_weights(total, sample)
    cn = comb(total, sample)
    half = alpha / 2
    p, q = half.numerator, half.denominator
    bound = p * cn
    lo = [0] * (sample + 1)
    marked = 0
    for x in range(sample + 1):
        if x > 0:
            marked = lo[x - 1]
        while suffix[marked][x] * q <= bound:
            marked += 1  # terminates: suffix[total][x] = cn and cn*q > bound
        lo[x] = marked
    hi = [0] * (sample + 1)
    marked = total
    for x in range(sample, -1, -1):
        if x < sample:
            marked = hi[x + 1]
        while (cn - suffix[marked][x + 1]) * q <= bound:
            marked -= 1  # terminates: prefix at marked=0 is cn
        hi[x] = marked
    return tuple(lo), tuple(hi)


def _equal_tail_endpoints(total: int, sample: int, x: int, alpha: Fraction) -> tuple[int, int]:
    los, his = _equal_tail_tables(total, sample, alpha)
    return los[x], his[x]


def _coverage_ok(total: int, sample: int, lo: list[int], hi: list[int], alpha: Fraction) -> bool:
    """Exact coverage >= 1 - alpha for every marked count, given per-x endpoints."""
    cn = comb(total, sample)
    p, q = alpha.numerator, alpha.denominator
    for marked in range(0, total + 1):
        slo = max(0, sample - (total - marked))
        shi = min(sample, marked)
        covered = sum(
            _weight(marked, total, sample, x)
            for x in range(slo, shi + 1)
            if lo[x] <= marked <= hi[x]
        )
        # covered / cn >= 1 - p/q  <=>  covered*q >= (q - p)*cn
        if covered * q < (q - p) * cn:
            return False
    return True


def _refined_endpoints(total: int, sample: int, alpha: Fraction) -> tuple[list[int], list[int]]:
    """Admissible shrinking of the equal-tail endpoints.

    Greedily trims one endpoint at a time (widest intervals first), keeping
    endpoint monotonicity in x and exhaustive exact coverage. Deterministic.
    """
    lo = []
    hi = []
    for x in range(sample + 1):
        a, b = _equal_tail_endpoints(total, sample, x, alpha)
        lo.append(a)
        hi.append(b)
    improved = True
    while improved:
        improved = False
        order = sorted(range(sample + 1), key=lambda x: (-(hi[x] - lo[x]), x))
        for x in order:
            for arr, step in ((lo, 1), (hi, -1)):
                if lo[x] + (1 if step == 1 else 0) > hi[x] - (1 if step == -1 else 0):
                    continue
                trial = list(arr)
                trial[x] += step
                # keep lo, hi nondecreasing in x
                mono = all(trial[i] <= trial[i + 1] for i in range(sample))
                if not mono:
                    continue
                ok = (
                    _coverage_ok(total, sample, trial, hi, alpha)
                    if arr is lo
                    else _coverage_ok(total, sample, lo, trial, alpha)
                )
                if ok:
                    arr[x] += step
                    improved = True
    return lo, hi


@lru_cache(maxsize=10_000)
def _refined_cached(total: int, sample: int, alpha: Fraction) -> tuple[tuple[int, ...], tuple[int, ...]]:
    lo, hi = _refined_endpoints(total, sample, alpha)
    return tuple(lo), tuple(hi)


def ci_count(
    total: int,
    sample: int,
    x: int,
    alpha: Fraction,
    refine: bool = False,
) -> tuple[int, int]:
    """Exact interval for the marked count given an observed draw x.

    Equal-tail inversion: keeps every marked count whose two exact tail
    probabilities at x are both strictly above alpha/2. `refine=True` applies
    the coverage-preserving shrinking pass.
    """
    alpha = _check_alpha(alpha)
    if not 0 <= x <= sample <= total:
        raise ValueError(f"need 0 <= x <= sample <= total, got x={x}, sample={sample}, total={total}")
    if refine:
        los, his = _refined_cached(total, sample, alpha)
        return los[x], his[x]
    return _equal_tail_endpoints(total, sample, x, alpha)
