"""Exact computation of the minimum determining-set size by search.

A family of r k-subsets of {1..n} with pairwise-distinct element signatures
is the same thing as a choice of n distinct columns from {0,1}^r whose
vector sum is (k, ..., k): column e is the signature of element e and row i
lists the members of the i-th set.  det_decision searches over that column
space directly; det_exact scans r upward from the proven lower bound.

The DFS picks columns in strictly increasing (popcount, value) key order,
which kills column-order symmetry; weight-major order matters because a
determining family always has column density k/n < 1/2, so solutions are
dominated by low-popcount columns and the first descent tends to hit one.
Row symmetry is broken by a packing rule: rows that received identical bits
so far are interchangeable, so within each such group the next column must
place its 1-bits on the lowest-index rows.  Every solution can be
row-permuted into this form (popcount is invariant under row permutations,
so permuting within tied groups can only lower the value key), and the
restriction loses nothing.

naive_det_exact is an intentionally separate oracle for cross-checking: it
enumerates families of actual k-subsets and tests pair separation directly,
sharing no code with the matrix search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

from .bounds import lower_bound
from .core import (BudgetExceededError, Family, InternalInconsistencyError,
                   InvalidInputError, KneserInstance)

DEFAULT_NODE_LIMIT = 10**9
MAX_SEARCH_ROWS = 64  # candidate space is 2**r; refuse anything beyond this


class Certificate(Enum):
    EXACT_SEARCH = "exact-search"
    CLOSED_FORM = "closed-form"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class SearchBudget:
    """Limits for det_exact / det_decision.

    max_r None means "up to the proven upper bound n-k".  node_limit counts
    DFS extension attempts across the whole call.  time_limit is wall-clock
    seconds, checked every few thousand nodes.
    """

    max_r: int | None = None
    node_limit: int | None = DEFAULT_NODE_LIMIT
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.max_r is not None and self.max_r < 1:
            raise InvalidInputError("max_r must be >= 1")
        if self.node_limit is not None and self.node_limit < 1:
            raise InvalidInputError("node_limit must be >= 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InvalidInputError("time_limit must be positive")


@dataclass(frozen=True)
class DetResult:
    value: int | None            # None when the budget ran out first
    witness: Family | None
    certificate: Certificate
    decided_up_to: int | None    # largest r proven infeasible, if any


class _Meter:
    """Shared node/time accounting for one det_exact or det_decision call."""

    __slots__ = ("nodes_left", "deadline", "tick")

    def __init__(self, budget: SearchBudget):
        self.nodes_left = budget.node_limit if budget.node_limit is not None else -1
        self.deadline = (time.monotonic() + budget.time_limit
                         if budget.time_limit is not None else None)
        self.tick = 0

    def spend(self) -> None:
        if self.nodes_left > 0:
            self.nodes_left -= 1
            if self.nodes_left == 0:
                raise BudgetExceededError("search node limit reached")
        self.tick += 1
        if self.deadline is not None and self.tick % 4096 == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceededError("search time limit reached")


def _min_total_popcount(n: int, r: int) -> int:
    """Smallest possible total popcount of n distinct values from {0,1}^r."""
    left, acc, w = n, 0, 0
    while left > 0:
        c = comb(r, w)
        take = c if c < left else left
        acc += take * w
        left -= take
        w += 1
    return acc


_BINOM_SUFFIX: dict[int, list[int]] = {}


def _binom_suffix(a: int) -> list[int]:
    """tab[w] = number of a-bit values with popcount >= w."""
    tab = _BINOM_SUFFIX.get(a)
    if tab is None:
        tab = [0] * (a + 2)
        for w in range(a, -1, -1):
            tab[w] = tab[w + 1] + comb(a, w)
        _BINOM_SUFFIX[a] = tab
    return tab


def _floor_submask(m: int, x: int) -> int:
    """Largest s with s subset-of m and s <= x (requires x >= 0)."""
    res = 0
    for b in range(max(m.bit_length(), x.bit_length()) - 1, -1, -1):
        if (x >> b) & 1:
            if (m >> b) & 1:
                res |= 1 << b
            else:
                return res | (m & ((1 << b) - 1))
    return res


def _next_with_weight(x: int, w: int, a: int) -> int | None:
    """Smallest value >= x with exactly w bits set, below 2^a, else None."""
    if x >= (1 << a):
        return None
    if x.bit_count() == w:
        return x
    # next larger value shares a prefix with x above some bit b where x is 0,
    # sets b, and takes the cheapest tail; the lowest workable b wins
    for b in range(a):
        if (x >> b) & 1:
            continue
        t = w - (x >> (b + 1)).bit_count() - 1
        if 0 <= t <= b:
            return ((((x >> (b + 1)) << 1) | 1) << b) | ((1 << t) - 1)
    return None


def _gosper_next(c: int) -> int:
    """Next larger value with the same popcount (c > 0)."""
    u = c & -c
    up = c + u
    return up | ((c ^ up) >> (u.bit_length() + 1))


def _decide(n: int, k: int, r: int, meter: _Meter) -> list[int] | None:
    """Columns of a solution in (popcount, value) key order, or None."""
    size = 1 << r
    half = size >> 1
    # each row can appear in at most `half` columns and be absent from at
    # most `half`, so k and n - k are both capped
    if n > size or k > half or n - half > k:
        return None
    # n distinct columns bound the total popcount r*k from both sides
    min_pop = _min_total_popcount(n, r)
    if not min_pop <= r * k <= n * r - min_pop:
        return None

    demands = [k] * r
    total = k * r
    need_mask = size - 1
    blocks = [(0, r)]  # interval blocks of rows still mutually tied
    chosen: list[int] = []

    def dfs(w_prev: int, v_prev: int, m: int) -> bool:
        nonlocal need_mask, total, blocks
        if m == 0:
            return total == 0
        active = need_mask.bit_count()
        if total > m * active or m * w_prev > total:
            return False
        # remaining picks are submasks of need_mask with popcount >= w_prev
        if _binom_suffix(active)[min(w_prev, active + 1)] < m:
            return False
        if active == 0:
            return False
        suff = _binom_suffix(active - 1)
        ones = suff[w_prev - 1 if w_prev > 0 else 0]
        zeros = suff[min(w_prev, active)]
        max_d = 0
        min_d = m + 1
        for d in demands:
            if d:
                if d > max_d:
                    max_d = d
                if d < min_d:
                    min_d = d
        if max_d > m or max_d > ones or m - min_d > zeros:
            return False

        pos = []
        mm = need_mask
        while mm:
            bit = mm & -mm
            pos.append(bit)
            mm ^= bit

        for w in range(w_prev, active + 1):
            if m * w > total:
                return False
            if w == w_prev and v_prev >= 0:
                cf = 0
                fl = _floor_submask(need_mask, v_prev)
                for j, bit in enumerate(pos):
                    if fl & bit:
                        cf |= 1 << j
                c = _next_with_weight(cf + 1, w, active)
            else:
                c = _next_with_weight(0, w, active)
            while c is not None and c < (1 << active):
                s = 0
                cc = c
                while cc:
                    cc_bit = cc & -cc
                    s |= pos[cc_bit.bit_length() - 1]
                    cc ^= cc_bit
                meter.spend()
                ok = True
                for lo, sz in blocks:
                    if sz > 1:
                        x = (s >> lo) & ((1 << sz) - 1)
                        if x & (x + 1):
                            ok = False
                            break
                if ok:
                    saved = (blocks, need_mask, total)
                    new_blocks = []
                    for lo, sz in blocks:
                        if sz == 1:
                            new_blocks.append((lo, sz))
                            continue
                        wb = ((s >> lo) & ((1 << sz) - 1)).bit_count()
                        if 0 < wb < sz:
                            new_blocks.append((lo, wb))
                            new_blocks.append((lo + wb, sz - wb))
                        else:
                            new_blocks.append((lo, sz))
                    blocks = new_blocks
                    v = s
                    while v:
                        bit = v & -v
                        i = bit.bit_length() - 1
                        demands[i] -= 1
                        if demands[i] == 0:
                            need_mask &= ~bit
                        v ^= bit
                    total -= w
                    chosen.append(s)

                    if dfs(w, s, m - 1):
                        return True

                    chosen.pop()
                    v = s
                    while v:
                        bit = v & -v
                        demands[bit.bit_length() - 1] += 1
                        v ^= bit
                    blocks, need_mask, total = saved
                if w == 0:
                    break
                c = _gosper_next(c)
        return False

    return chosen if dfs(0, -1, n) else None


def _columns_to_family(inst: KneserInstance, r: int, cols: list[int]) -> Family:
    # column j (ascending) is the signature of element j+1; bit i of a
    # column means membership in the (i+1)-th set
    sets = []
    for i in range(r):
        sets.append(tuple(e for e, c in enumerate(cols, start=1) if (c >> i) & 1))
    return Family.of(inst, sets)


def det_decision(inst: KneserInstance, r: int,
                 budget: SearchBudget | None = None
                 ) -> tuple[bool, Family | None]:
    """Is there a determining family of exactly r sets?  Never guesses:
    raises BudgetExceededError rather than returning a wrong boolean."""
    if r < 1:
        raise InvalidInputError("r must be >= 1")
    if r > MAX_SEARCH_ROWS:
        raise InvalidInputError(f"r > {MAX_SEARCH_ROWS} is outside the "
                                "supported search range")
    meter = _Meter(budget if budget is not None else SearchBudget())
    cols = _decide(inst.n, inst.k, r, meter)
    if cols is None:
        return False, None
    return True, _columns_to_family(inst, r, cols)


def det_exact(inst: KneserInstance,
              budget: SearchBudget | None = None) -> DetResult:
    """Smallest r admitting a determining family, found by upward scan.

    The scan starts at the proven lower bound and is guaranteed to stop by
    r = n - k.  The witness is the first solution in the search's canonical
    order (columns ascending by popcount then value, tied rows packed low),
    so reruns are byte-stable.
    """
    budget = budget if budget is not None else SearchBudget()
    cap = budget.max_r if budget.max_r is not None else inst.n - inst.k
    meter = _Meter(budget)
    decided = None
    for r in range(lower_bound(inst), cap + 1):
        if r > MAX_SEARCH_ROWS:
            break
        try:
            cols = _decide(inst.n, inst.k, r, meter)
        except BudgetExceededError:
            return DetResult(None, None, Certificate.BUDGET_EXCEEDED, decided)
        if cols is not None:
            wit = _columns_to_family(inst, r, cols)
            return DetResult(r, wit, Certificate.EXACT_SEARCH, decided)
        decided = r
    return DetResult(None, None, Certificate.BUDGET_EXCEEDED, decided)


def naive_det_exact(n: int, k: int) -> int:
    """Brute-force oracle sharing nothing with the matrix search.

    Enumerates unordered families of r distinct k-subsets for r = 1, 2, ...
    and tests the original separation condition pair by pair.  A greedy
    most-new-pairs pass answers most feasible levels outright; the DFS that
    settles the rest prunes on the union of separations still reachable.
    Exponential; fine up to n around 11.
    """
    if k < 1 or n <= 2 * k:
        raise InvalidInputError("need k >= 1 and n > 2k")
    pairs = list(combinations(range(1, n + 1), 2))
    full = (1 << len(pairs)) - 1
    sep_masks = []
    for v in combinations(range(1, n + 1), k):
        vs = set(v)
        mask = 0
        for j, (a, b) in enumerate(pairs):
            if (a in vs) != (b in vs):
                mask |= 1 << j
        sep_masks.append(mask)

    count = len(sep_masks)
    suffix_or = [0] * (count + 1)
    for i in range(count - 1, -1, -1):
        suffix_or[i] = suffix_or[i + 1] | sep_masks[i]

    def greedy_covers(r: int) -> bool:
        acc = 0
        for _ in range(r):
            if acc == full:
                return True
            best, best_gain = -1, 0
            for i, mask in enumerate(sep_masks):
                gain = (mask | acc).bit_count() - acc.bit_count()
                if gain > best_gain:
                    best, best_gain = i, gain
            if best < 0:
                return False
            acc |= sep_masks[best]
        return acc == full

    def exists(r: int) -> bool:
        # levels come in ascending order, so no smaller family covers and a
        # set contributing no new pair can be skipped without loss
        def rec(start: int, depth: int, acc: int) -> bool:
            if depth == r:
                return acc == full
            if acc | suffix_or[start] != full:
                return False
            for i in range(start, count - (r - depth) + 1):
                nxt = acc | sep_masks[i]
                if nxt == acc:
                    continue
                if rec(i + 1, depth + 1, nxt):
                    return True
            return False
        return rec(0, 0, 0)

    for r in range(1, n - k + 1):
        if greedy_covers(r) or exists(r):
            return r
    raise InternalInconsistencyError(
        f"no determining family of size <= n-k for ({n},{k})")
