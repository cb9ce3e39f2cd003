"""Table algebra for completely randomized experiments with binary outcomes.

An observed table counts units by (treatment, observed outcome); a potential
table counts units by their joint potential outcomes (response under treatment,
response under control). The average causal effect of a potential table lives
on the grid {k/n}, and a potential table is compatible with an observed table
exactly when some unit-level arrangement of potential outcomes could have
produced the observed counts under the realized assignment.

All arithmetic is exact: counts are Python ints and effect values are
`fractions.Fraction`. Floating point never decides anything here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import DegenerateArm, SizeMismatch

__all__ = [
    "ObservedTable",
    "PotentialTable",
    "TableMove",
    "MOVES",
    "CONTROL_SIDE_MOVES",
    "is_compatible",
    "enumerate_compatible",
    "attainable_ntau_range",
    "switch_y",
    "switch_z",
]


@dataclass(frozen=True)
class ObservedTable:
    """Observed counts (n11, n10, n01, n00) by (assignment, outcome) cell.

    n11: treated with outcome 1, n10: treated with outcome 0,
    n01: control with outcome 1, n00: control with outcome 0.
    """

    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self) -> None:
        for c in (self.n11, self.n10, self.n01, self.n00):
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"counts must be non-negative integers, got {self}")
        if self.m == 0 or self.n - self.m == 0:
            raise DegenerateArm(
                f"both arms must be non-empty: m={self.m}, n-m={self.n - self.m}"
            )

    @property
    def n(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00

    @property
    def m(self) -> int:
        """Number of treated units."""
        return self.n11 + self.n10

    @property
    def tau_hat(self) -> Fraction:
        """Unbiased difference-in-means estimate n11/m - n01/(n-m)."""
        return Fraction(self.n11, self.m) - Fraction(self.n01, self.n - self.m)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n11, self.n10, self.n01, self.n00)

    def switch_y(self) -> "ObservedTable":
        """Relabel the outcome (1 <-> 0); negates tau_hat."""
        return ObservedTable(self.n10, self.n11, self.n00, self.n01)

    def switch_z(self) -> "ObservedTable":
        """Relabel the treatment (swap arms); negates tau_hat, m <-> n-m."""
        return ObservedTable(self.n01, self.n00, self.n11, self.n10)


@dataclass(frozen=True)
class PotentialTable:
    """Latent counts (N11, N10, N01, N00) by joint potential-outcome type.

    N_ik counts units with response i under treatment and k under control.
    """

    N11: int
    N10: int
    N01: int
    N00: int

    def __post_init__(self) -> None:
        for c in (self.N11, self.N10, self.N01, self.N00):
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"counts must be non-negative integers, got {self}")

    @property
    def n(self) -> int:
        return self.N11 + self.N10 + self.N01 + self.N00

    @property
    def n1plus(self) -> int:
        """Units responding under treatment."""
        return self.N11 + self.N10

    @property
    def nplus1(self) -> int:
        """Units responding under control."""
        return self.N11 + self.N01

    @property
    def ntau(self) -> int:
        """n times the average causal effect; always an integer."""
        return self.N10 - self.N01

    @property
    def tau(self) -> Fraction:
        """Average causal effect (N10 - N01)/n."""
        return Fraction(self.ntau, self.n)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.N11, self.N10, self.N01, self.N00)

    def switch_y(self) -> "PotentialTable":
        """Relabel the outcome; negates tau."""
        return PotentialTable(self.N00, self.N01, self.N10, self.N11)

    def switch_z(self) -> "PotentialTable":
        """Relabel the treatment; negates tau."""
        return PotentialTable(self.N11, self.N01, self.N10, self.N00)

    def shifted(self, delta: tuple[int, int, int, int]) -> "PotentialTable | None":
        """Apply an additive move; None if any count would go negative."""
        cells = tuple(c + d for c, d in zip(self.as_tuple(), delta))
        if any(c < 0 for c in cells):
            return None
        return PotentialTable(*cells)


@dataclass(frozen=True)
class TableMove:
    """Unit step on potential tables that raises n*tau by exactly 1.

    A move changes one unit's potential outcomes. The control-side moves flip
    a single control potential outcome from 1 to 0 (treated margin unchanged);
    they are the subset for which two-sided p-value monotonicity holds in
    unbalanced designs.
    """

    delta: tuple[int, int, int, int]
    control_side: bool


MOVES: tuple[TableMove, ...] = (
    TableMove((0, 1, 0, -1), False),
    TableMove((-1, 1, 0, 0), True),
    TableMove((1, 0, -1, 0), False),
    TableMove((0, 0, -1, 1), True),
)

CONTROL_SIDE_MOVES: tuple[TableMove, ...] = tuple(mv for mv in MOVES if mv.control_side)

Table = Union[ObservedTable, PotentialTable]


def switch_y(x: Table) -> Table:
    return x.switch_y()


def switch_z(x: Table) -> Table:
    return x.switch_z()


def is_compatible(N: PotentialTable, nobs: ObservedTable) -> bool:
    """Whether some unit-level arrangement summarized by N yields nobs.

    Equivalent to the existence of an integer count x11 of always-responders
    assigned to treatment satisfying four box constraints.
    """
    if N.n != nobs.n:
        raise SizeMismatch(f"potential table has n={N.n}, observed table n={nobs.n}")
    lo = max(
        0,
        nobs.n11 - N.N10,
        N.N11 - nobs.n01,
        N.nplus1 - nobs.n10 - nobs.n01,
    )
    hi = min(
        N.N11,
        nobs.n11,
        N.nplus1 - nobs.n01,
        N.n - N.N10 - nobs.n01 - nobs.n10,
    )
    return lo <= hi


def iter_compatible(nobs: ObservedTable) -> Iterator[PotentialTable]:
    """Yield compatible potential tables in lexicographic (N11, N10, N01) order.

    N11 cannot exceed n11 + n01 for any compatible table, which bounds the
    outer loop.
    """
    n = nobs.n
    for N11 in range(0, nobs.n11 + nobs.n01 + 1):
        for N10 in range(0, n - N11 + 1):
            for N01 in range(0, n - N11 - N10 + 1):
                N = PotentialTable(N11, N10, N01, n - N11 - N10 - N01)
                if is_compatible(N, nobs):
                    yield N


def enumerate_compatible(nobs: ObservedTable) -> list[PotentialTable]:
    """All potential tables compatible with nobs, deterministically ordered."""
    return list(iter_compatible(nobs))


def iter_cell_decompositions(nobs: ObservedTable) -> Iterator[PotentialTable]:
    """Yield one potential table per cell-wise latent-type decomposition.

    Each observed cell's units are split over the two latent types they could
    belong to: treated responders are (1,1) or (1,0), treated non-responders
    (0,1) or (0,0), control responders (1,1) or (0,1), control non-responders
    (1,0) or (0,0). Every choice yields a compatible table and every
    compatible table arises from at least one choice, but distinct choices
    can repeat a table. The number of candidates is
    (n11+1)(n10+1)(n01+1)(n00+1), which is how the brute-force inversion
    baseline enumerates (and counts) its tests.
    """
    for a in range(nobs.n11 + 1):  # treated responders of type (1,1)
        for b in range(nobs.n10 + 1):  # treated non-responders of type (0,1)
            for c in range(nobs.n01 + 1):  # control responders of type (1,1)
                for d in range(nobs.n00 + 1):  # control non-responders of type (1,0)
                    yield PotentialTable(
                        a + c,
                        (nobs.n11 - a) + d,
                        b + (nobs.n01 - c),
                        (nobs.n10 - b) + (nobs.n00 - d),
                    )


def attainable_ntau_range(nobs: ObservedTable) -> tuple[int, int]:
    """Closed integer range of n*tau values any compatible table can take."""
    return (-(nobs.n10 + nobs.n01), nobs.n11 + nobs.n00)
