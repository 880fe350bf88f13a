"""Closed-form bounds and known exact values for the determining number.

Each rule is tagged with a short stable string so reports and CSV output can
say where a number came from:

  lower:  log2        -- n+1 distinct signatures need ceil(log2(n+1)) rows
          occupancy   -- counting element occurrences: r(k+1) >= 2n-2
  upper:  n-minus-k       -- sliding windows of consecutive elements
          k-triangle      -- k sets suffice while n <= k(k+1)/2
          r-triangle:r=R  -- R sets of size R on R(R+1)/2+1 elements,
                             pairwise meeting in one point (needs R <= k)
          odd-line-shift  -- extend a minimum family on n = 2k+1 one
                             element at a time
  exact:  singletons, odd-line, even-line-pow2, mersenne-point,
          grid-point:d=D, grid-gap:d=D
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import InternalInconsistencyError, KneserInstance


def ceil_log2(x: int) -> int:
    """ceil(log2(x)) for x >= 1, by bit length (no floats)."""
    return (x - 1).bit_length()


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lower_bound(inst: KneserInstance) -> int:
    return max(ceil_log2(inst.n + 1), ceil_div(2 * inst.n - 2, inst.k + 1))


def _lower_candidates(inst: KneserInstance) -> list[tuple[int, str]]:
    return [(ceil_log2(inst.n + 1), "log2"),
            (ceil_div(2 * inst.n - 2, inst.k + 1), "occupancy")]


def _upper_candidates(inst: KneserInstance) -> list[tuple[int, str]]:
    n, k = inst.n, inst.k
    out = [(n - k, "n-minus-k")]
    if 2 * k <= n <= k * (k + 1) // 2:
        out.append((k, "k-triangle"))
    for r in range(3, k + 1):
        if n <= r * (r + 1) // 2 + 1:
            out.append((r, f"r-triangle:r={r}"))
            break
    if n >= 2 * k + 1:
        out.append((ceil_log2(2 * k + 2) + (n - 2 * k - 1), "odd-line-shift"))
    return out


def upper_bound(inst: KneserInstance) -> int:
    return min(v for v, _ in _upper_candidates(inst))


@dataclass(frozen=True)
class ExactValue:
    value: int
    rules: tuple[str, ...]


def known_exact(inst: KneserInstance) -> ExactValue | None:
    """Exact determining number when a proven case applies, else None.

    All applicable rules must agree; a disagreement would mean one of them
    is implemented wrong and raises InternalInconsistencyError.
    """
    n, k = inst.n, inst.k
    hits: list[tuple[int, str]] = []

    if k == 1:
        hits.append((n - 1, "singletons"))
    if n == 2 * k + 1:
        hits.append((ceil_log2(n + 1), "odd-line"))
    if n == 2 * k + 2 and n & (n - 1) == 0:
        hits.append((ceil_log2(n + 1), "even-line-pow2"))
    if (n + 1) & n == 0 and k == (n + 1) // 2 - 1:
        hits.append(((n + 1).bit_length() - 1, "mersenne-point"))

    # n sits exactly on floor(d(k+1)/2) + 1 for some d >= max(k, 3)
    d0 = (2 * (n - 1)) // (k + 1)
    for d in (d0, d0 + 1):
        if d >= max(k, 3) and d * (k + 1) // 2 + 1 == n:
            hits.append((d, f"grid-point:d={d}"))
    # or strictly between two consecutive such points, d >= max(k+1, 3)
    for d in (d0, d0 + 1, d0 + 2):
        if d >= max(k + 1, 3) and \
                (d - 1) * (k + 1) // 2 < n - 1 < d * (k + 1) // 2:
            hits.append((d, f"grid-gap:d={d}"))

    if not hits:
        return None
    values = {v for v, _ in hits}
    if len(values) > 1:
        raise InternalInconsistencyError(
            f"exact rules disagree on ({n},{k}): {hits}")
    return ExactValue(values.pop(), tuple(tag for _, tag in hits))


@dataclass(frozen=True)
class BoundsReport:
    """Combined view; lower == upper == exact.value when exact is known."""

    instance: KneserInstance
    lower: int
    lower_rules: tuple[str, ...]
    upper: int
    upper_rules: tuple[str, ...]
    exact: ExactValue | None


def bounds_report(inst: KneserInstance) -> BoundsReport:
    lo_cands = _lower_candidates(inst)
    hi_cands = _upper_candidates(inst)
    lo = max(v for v, _ in lo_cands)
    hi = min(v for v, _ in hi_cands)
    lo_rules = tuple(tag for v, tag in lo_cands if v == lo)
    hi_rules = tuple(tag for v, tag in hi_cands if v == hi)
    ex = known_exact(inst)
    if ex is not None:
        if not lo <= ex.value <= hi:
            raise InternalInconsistencyError(
                f"exact value {ex.value} outside formula bounds "
                f"[{lo},{hi}] on ({inst.n},{inst.k})")
        return BoundsReport(inst, ex.value, ex.rules, ex.value, ex.rules, ex)
    return BoundsReport(inst, lo, lo_rules, hi, hi_rules, None)
