"""Counting Kneser graphs by determining number.

f(r) counts the pairs (n,k) with n > 2k whose graph needs exactly r
sets.  Any graph with value at most r has n <= 2^r - 1 (fewer than
2^r signatures exist, and n = 2^r would force k = n/2), so the
candidate space per r is finite: every pair in it is resolved by a
proven closed form where one applies and by the exact search otherwise.
F(r) is the cumulative count over values up to r.

The module also carries the interval brackets used to squeeze f(r)
between counting estimates, the exact rational forms of those
estimates (halves appear, so Fraction rather than float), and a
cross-check against the folklore size-threshold rule that is *not*
trusted as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import known_exact
from .core import (
    BudgetExceededError,
    InvalidInputError,
    KneserInstance,
    OutOfRangeError,
    Regime,
)
from .search import Certificate, SearchBudget, det_exact

# Resolved determining numbers, shared across calls.  Only settled values
# are stored, so a later call with a bigger budget can still make progress.
_DET_CACHE: dict[tuple[int, int], tuple[int, Certificate]] = {}


def _resolve(n: int, k: int, budget: SearchBudget | None
             ) -> tuple[int | None, Certificate, int | None]:
    """(value, method, decided_up_to); value None when the budget ran out."""
    key = (n, k)
    hit = _DET_CACHE.get(key)
    if hit is not None:
        return hit[0], hit[1], None
    inst = KneserInstance(n, k, Regime.DETERMINING)
    exact = known_exact(inst)
    if exact is not None:
        out = (exact.value, Certificate.CLOSED_FORM)
    else:
        res = det_exact(inst, budget)
        if res.value is None:
            return None, Certificate.BUDGET_EXCEEDED, res.decided_up_to
        out = (res.value, Certificate.EXACT_SEARCH)
    _DET_CACHE[key] = out
    return out[0], out[1], None


def determining_number(n: int, k: int, budget: SearchBudget | None = None
                       ) -> tuple[int, Certificate]:
    """Determining number of K(n,k), closed form first, search fallback.

    Settled values are cached module-wide (they never depend on the
    budget).  Raises BudgetExceededError when the search gives up.
    """
    value, method, decided = _resolve(n, k, budget)
    if value is None:
        raise BudgetExceededError(
            f"({n},{k}) undecided beyond r={decided} within budget")
    return value, method


@dataclass(frozen=True)
class CensusRecord:
    """All pairs with determining number exactly r, plus the running total.

    methods is parallel to members.  When partial is set, some candidate
    pairs could not be resolved within budget (listed in unresolved) and
    f and F count only what was settled, so both are lower bounds.
    """

    r: int
    f: int
    F: int
    members: tuple[tuple[int, int], ...]
    methods: tuple[Certificate, ...]
    partial: bool = False
    unresolved: tuple[tuple[int, int], ...] = ()


def f_count(r: int, budget: SearchBudget | None = None) -> CensusRecord:
    """Census of determining number exactly r over its finite candidate space.

    Scans every (n,k) with 2k < n <= 2^r - 1 in lexicographic order.  A
    budget-exhausted pair still stays out of the census when the search
    at least ruled out all sizes up to r; otherwise it is reported as
    unresolved and the record is marked partial rather than guessed at.
    """
    if r < 2:
        raise InvalidInputError(f"f_count needs r >= 2, got {r}")
    members: list[tuple[int, int]] = []
    methods: list[Certificate] = []
    unresolved: list[tuple[int, int]] = []
    below = 0
    for n in range(3, 1 << r):
        for k in range(1, (n - 1) // 2 + 1):
            value, method, decided = _resolve(n, k, budget)
            if value is None:
                if decided is None or decided < r:
                    unresolved.append((n, k))
                continue
            if value == r:
                members.append((n, k))
                methods.append(method)
            elif value < r:
                below += 1
    return CensusRecord(r, len(members), below + len(members),
                        tuple(members), tuple(methods),
                        bool(unresolved), tuple(unresolved))


def census_csv(records: list[CensusRecord] | tuple[CensusRecord, ...]) -> str:
    """CSV dump of census members: r,n,k,det,method (LF line ends)."""
    lines = ["r,n,k,det,method"]
    for rec in records:
        for (n, k), method in zip(rec.members, rec.methods):
            lines.append(f"{rec.r},{n},{k},{rec.r},{method.value}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Bracket:
    """k-intervals bracketing {k : Det(K(t,k)) <= r} for ground size t.

    A is sufficient (every k in it works), B is necessary (every k that
    works lies in it); both are inclusive and share the upper end, and A
    may be empty when its lower end overshoots.  B never outruns A by
    more than three values.
    """

    t: int
    r: int
    A: tuple[int, int]
    B: tuple[int, int]

    @staticmethod
    def _span(iv: tuple[int, int]) -> tuple[int, ...]:
        return tuple(range(iv[0], iv[1] + 1))

    def a_values(self) -> tuple[int, ...]:
        return self._span(self.A)

    def b_values(self) -> tuple[int, ...]:
        return self._span(self.B)


def brackets(t: int, r: int) -> Bracket:
    """The sufficient/necessary k-intervals at ground size t for value <= r."""
    if not 3 <= t <= (1 << r) - 1:
        raise OutOfRangeError(f"brackets needs 3 <= t <= 2^r - 1, "
                              f"got t={t}, r={r}")
    hi = -(-t // 2) - 1
    a_lo = -(-2 * t // r) - 1
    b_lo = (2 * t - 2) // r - 1
    return Bracket(t, r, (a_lo, hi), (b_lo, hi))


def F_lower_formula(r: int) -> Fraction:
    """Exact rational lower estimate for the cumulative count F(r)."""
    if r < 1:
        raise InvalidInputError(f"F_lower_formula needs r >= 1, got {r}")
    bulk = Fraction(2) ** (2 * r - 2) - Fraction(2) ** (r - 2) - Fraction(3, 2)
    return Fraction(r - 4, r) * bulk - 2 ** r + 3


def F_upper_formula(r: int) -> Fraction:
    """Exact rational upper estimate: the lower one plus 3(2^r - 3)."""
    return F_lower_formula(r) + 3 * (2 ** r - 3)


@dataclass(frozen=True)
class GrowthRow:
    """The three growth inequalities checked at one r (all use f(r+1))."""

    r: int
    sum_ok: bool        # f(r+1) >= f(2) + ... + f(r)
    doubling_ok: bool   # F(r+1) >= 2 F(r)
    convex_ok: bool     # f(r+1) + f(r-1) >= 2 f(r)


@dataclass(frozen=True)
class GrowthReport:
    r_max: int
    rows: tuple[GrowthRow, ...]
    partial: bool

    def all_ok(self) -> bool:
        return all(row.sum_ok and row.doubling_ok and row.convex_ok
                   for row in self.rows)


def growth_check(r_max: int, budget: SearchBudget | None = None
                 ) -> GrowthReport:
    """Check the growth inequalities for every computable r up to r_max.

    Stops early (and marks the report partial) as soon as some needed
    f value cannot be computed exactly within the budget.
    """
    if r_max < 3:
        raise InvalidInputError(f"growth_check needs r_max >= 3, got {r_max}")
    f_vals: dict[int, int] = {}
    F_vals: dict[int, int] = {}
    partial = False
    for s in range(2, r_max + 2):
        rec = f_count(s, budget)
        if rec.partial:
            partial = True
            break
        f_vals[s], F_vals[s] = rec.f, rec.F
    rows = []
    for r in range(3, r_max + 1):
        if r + 1 not in f_vals:
            partial = True
            break
        rows.append(GrowthRow(
            r,
            f_vals[r + 1] >= sum(f_vals[s] for s in range(2, r + 1)),
            F_vals[r + 1] >= 2 * F_vals[r],
            f_vals[r + 1] + f_vals[r - 1] >= 2 * f_vals[r]))
    return GrowthReport(r_max, tuple(rows), partial)


def coverage_rule_disagreements(r: int, budget: SearchBudget | None = None
                                ) -> tuple[tuple[int, int], ...]:
    """Pairs where the size-threshold shortcut mispredicts "value <= r".

    The shortcut claims Det(K(t,k)) <= r exactly when
    t <= floor(r(k+1)/2) + 1.  It is proven only on restricted ranges,
    so it is never used as ground truth here; this scan compares it
    against resolved values over the whole candidate space for r and
    returns every (t,k) where the two sides differ.  Unresolved pairs
    are skipped.
    """
    if r < 2:
        raise InvalidInputError(f"needs r >= 2, got {r}")
    bad: list[tuple[int, int]] = []
    for t in range(3, 1 << r):
        for k in range(1, (t - 1) // 2 + 1):
            value, _, decided = _resolve(t, k, budget)
            if value is None:
                if decided is not None and decided >= r:
                    value_le_r = False
                else:
                    continue
            else:
                value_le_r = value <= r
            claims_le_r = t <= r * (k + 1) // 2 + 1
            if claims_le_r != value_le_r:
                bad.append((t, k))
    return tuple(bad)
