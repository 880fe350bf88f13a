"""Vertex families of Kneser graphs and the separation test.

K(n, k) has one vertex per k-subset of {1, ..., n}.  For n > 2k every
automorphism comes from a permutation of the ground set, so a family of
vertices pins down the whole automorphism group exactly when every ground
element gets its own membership signature: no two elements may lie in
precisely the same members of the family.  Everything in this package is
built on that column-distinctness test.

Signatures are kept as integer bitmasks (bit i-1 of column(e) is set when
element e lies in the i-th set), which keeps the test cheap for the family
sizes that matter here (a few dozen sets at most).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

VertexSet = tuple[int, ...]  # sorted, duplicate-free, len == k


class KneserError(Exception):
    """Base class for errors raised by this package."""


class OutOfRangeError(KneserError, ValueError):
    """A ground element lies outside 1..n."""


class DegeneratePairError(KneserError, ValueError):
    """A pair query with a == b, for which separation is meaningless."""


class InvalidInputError(KneserError, ValueError):
    """Arguments violate a documented precondition."""


class InternalInconsistencyError(KneserError, RuntimeError):
    """A step that theory guarantees to succeed failed; indicates a bug."""


class BudgetExceededError(KneserError, RuntimeError):
    """A search ran out of its node or time budget before resolving."""


class Regime(Enum):
    # DETERMINING needs n > 2k (vertices of K(n,k) proper, connected regime);
    # AUXILIARY allows n == 2k and additionally demands full ground coverage.
    DETERMINING = "determining"
    AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class KneserInstance:
    n: int
    k: int
    regime: Regime = Regime.DETERMINING

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError(f"k must be >= 1, got {self.k}")
        if self.n < 3:
            raise InvalidInputError(f"n must be >= 3, got {self.n}")
        if self.regime is Regime.DETERMINING and self.n <= 2 * self.k:
            raise InvalidInputError(
                f"determining regime needs n > 2k, got n={self.n}, k={self.k}")
        if self.regime is Regime.AUXILIARY and self.n < 2 * self.k:
            raise InvalidInputError(
                f"auxiliary regime needs n >= 2k, got n={self.n}, k={self.k}")


def _normalize_set(elements: Iterable[int], inst: KneserInstance) -> VertexSet:
    out = tuple(sorted(elements))
    if len(set(out)) != len(out):
        raise InvalidInputError(f"duplicate element in vertex set {out}")
    if len(out) != inst.k:
        raise InvalidInputError(
            f"vertex set {out} has size {len(out)}, expected k={inst.k}")
    for e in out:
        if not 1 <= e <= inst.n:
            raise OutOfRangeError(f"element {e} outside 1..{inst.n}")
    return out


@dataclass(frozen=True)
class Family:
    """An ordered family of k-subsets of {1..n}.

    Order is kept because constructions build sets in a meaningful sequence;
    the separation semantics never depend on it.  Duplicate sets are legal
    (they never help) -- the CLI warns about them but the library accepts them.
    """

    instance: KneserInstance
    sets: tuple[VertexSet, ...]

    @staticmethod
    def of(inst: KneserInstance, sets: Iterable[Iterable[int]]) -> "Family":
        return Family(inst, tuple(_normalize_set(s, inst) for s in sets))

    @property
    def size(self) -> int:
        return len(self.sets)


def family(n: int, k: int, sets: Iterable[Iterable[int]],
           regime: Regime | None = None) -> Family:
    """Convenience constructor; picks the regime from n vs 2k when omitted."""
    if regime is None:
        regime = Regime.DETERMINING if n > 2 * k else Regime.AUXILIARY
    return Family.of(KneserInstance(n, k, regime), sets)


@dataclass(frozen=True)
class SignatureMatrix:
    """r x n boolean incidence matrix, rows as element-indexed bitmasks."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]  # rows[i] bit e-1 set iff element e in set i+1

    def column(self, e: int) -> int:
        """Signature of element e as a bitmask over rows (bit i => set i+1)."""
        if not 1 <= e <= self.n_cols:
            raise OutOfRangeError(f"element {e} outside 1..{self.n_cols}")
        sig = 0
        probe = 1 << (e - 1)
        for i, row in enumerate(self.rows):
            if row & probe:
                sig |= 1 << i
        return sig

    def columns(self) -> list[int]:
        return [self.column(e) for e in range(1, self.n_cols + 1)]

    def row_weight(self, i: int) -> int:
        return self.rows[i].bit_count()


def signature_matrix(f: Family) -> SignatureMatrix:
    rows = []
    for s in f.sets:
        mask = 0
        for e in s:
            mask |= 1 << (e - 1)
        rows.append(mask)
    return SignatureMatrix(len(f.sets), f.instance.n, tuple(rows))


def separates(f: Family, a: int, b: int) -> bool:
    """True when some member of f contains exactly one of a, b."""
    n = f.instance.n
    if not 1 <= a <= n:
        raise OutOfRangeError(f"element {a} outside 1..{n}")
    if not 1 <= b <= n:
        raise OutOfRangeError(f"element {b} outside 1..{n}")
    if a == b:
        raise DegeneratePairError(f"separation of a pair needs a != b, got {a}")
    pa, pb = 1 << (a - 1), 1 << (b - 1)
    for s in f.sets:
        mask = 0
        for e in s:
            mask |= 1 << (e - 1)
        if bool(mask & pa) != bool(mask & pb):
            return True
    return False


def membership_counts(f: Family) -> tuple[int, ...]:
    """N_e for each element e: in how many members of f it appears."""
    counts = [0] * f.instance.n
    for s in f.sets:
        for e in s:
            counts[e - 1] += 1
    return tuple(counts)


def covered_elements(f: Family) -> set[int]:
    out: set[int] = set()
    for s in f.sets:
        out.update(s)
    return out


def is_determining(f: Family) -> bool:
    """All n signature columns pairwise distinct.

    This is the fixing condition: any automorphism of K(n,k) (n > 2k) that
    maps every member of f to itself must then fix every ground element,
    hence every vertex.  The check itself is regime-agnostic.
    """
    sigs = signature_matrix(f).columns()
    return len(set(sigs)) == f.instance.n


def is_auxiliary(f: Family) -> bool:
    """Distinct signatures plus full coverage of the ground set."""
    if not is_determining(f):
        return False
    return len(covered_elements(f)) == f.instance.n


def first_unseparated_pair(f: Family) -> tuple[int, int] | None:
    """Smallest (a, b) with identical signatures, or None when determining."""
    sigs = signature_matrix(f).columns()
    seen: dict[int, int] = {}
    best: tuple[int, int] | None = None
    for e, sig in enumerate(sigs, start=1):
        if sig in seen:
            cand = (seen[sig], e)
            if best is None or cand < best:
                best = cand
        else:
            seen[sig] = e
    return best


def canonicalize(f: Family) -> Family:
    """Relabel elements by descending membership count, ties by old label.

    Set order is preserved; only ground labels move.  Deterministic, so a
    family and any relabeling of it canonicalize to the same result.
    """
    counts = membership_counts(f)
    order = sorted(range(1, f.instance.n + 1), key=lambda e: (-counts[e - 1], e))
    relabel = {old: new for new, old in enumerate(order, start=1)}
    new_sets = [tuple(sorted(relabel[e] for e in s)) for s in f.sets]
    return Family(f.instance, tuple(new_sets))


def relabel_family(f: Family, mapping: dict[int, int]) -> Family:
    """Apply a permutation of 1..n given as a dict (must be a bijection)."""
    n = f.instance.n
    if sorted(mapping) != list(range(1, n + 1)) or sorted(
            mapping.values()) != list(range(1, n + 1)):
        raise InvalidInputError("mapping is not a permutation of 1..n")
    new_sets = [tuple(sorted(mapping[e] for e in s)) for s in f.sets]
    return Family(f.instance, tuple(new_sets))


# -- serialization ------------------------------------------------------------
# One family per line: {"n": 7, "k": 3, "sets": [[1,2,3],[1,4,5],[2,4,6]]}
# Sets and their elements are written sorted ascending.

def family_to_json(f: Family) -> str:
    sets = sorted(list(s) for s in f.sets)
    return json.dumps({"n": f.instance.n, "k": f.instance.k, "sets": sets},
                      separators=(",", ":"))


def family_from_json(line: str, regime: Regime | None = None) -> Family:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad family JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InvalidInputError("family JSON must be an object")
    try:
        n, k, sets = obj["n"], obj["k"], obj["sets"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError("family JSON needs keys n, k, sets") from exc
    if not isinstance(n, int) or not isinstance(k, int) or not isinstance(sets, list):
        raise InvalidInputError("family JSON fields have wrong types")
    for s in sets:
        if not isinstance(s, list) or not all(isinstance(e, int) for e in s):
            raise InvalidInputError("family sets must be lists of integers")
    return family(n, k, sets, regime=regime)
