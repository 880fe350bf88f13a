"""Explicit determining and auxiliary families, built rather than searched.

Nothing in this module trusts its own output: every operation returns a
family that the oracles in core can certify, and the tests do exactly
that.  The recursive rules need their inputs in a small normal form
(full coverage, or exactly one missed element, with the missed element
relabeled to the top), so there is a little relabeling machinery here.
Inputs are never mutated; families are frozen values throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Family,
    InternalInconsistencyError,
    InvalidInputError,
    KneserInstance,
    Regime,
    canonicalize,
    covered_elements,
    is_auxiliary,
    is_determining,
    membership_counts,
    relabel_family,
)

# The two hand-built covering families the recursion bottoms out on.
_BASES: dict[str, tuple[int, int, tuple[tuple[int, ...], ...]]] = {
    "K42": (4, 2, ((1, 2), (1, 3), (2, 4))),
    "K63": (6, 3, ((1, 2, 3), (1, 4, 5), (2, 4, 6))),
}


@dataclass(frozen=True)
class ConstructionTrace:
    """Recursion path of a recursive construction plus its end product.

    Each step records (rule name, input instance, output instance); the
    first step is always a base family, so its two instances coincide.
    """

    steps: tuple[tuple[str, KneserInstance, KneserInstance], ...]
    final: Family


def aux_base(which: str) -> Family:
    """One of the two hand-built base families, "K42" or "K63".

    Both cover their ground set, have pairwise-distinct signatures and
    an empty overall intersection.
    """
    try:
        n, k, sets = _BASES[which]
    except KeyError:
        raise InvalidInputError(f"unknown base family {which!r}") from None
    return Family.of(KneserInstance(n, k, Regime.AUXILIARY), sets)


def _family_intersection(f: Family) -> set[int]:
    common = set(f.sets[0]) if f.sets else set()
    for s in f.sets[1:]:
        common &= set(s)
    return common


def _swap_labels(f: Family, a: int, b: int) -> Family:
    if a == b:
        return f
    mapping = {e: e for e in range(1, f.instance.n + 1)}
    mapping[a], mapping[b] = b, a
    return relabel_family(f, mapping)


def aux_double(f: Family) -> Family:
    """Double a covering family on (2k,k) to one on (4k,2k).

    Each set is unioned with its copy shifted by +2k, and the set
    {1..2k} is appended.  The shift keeps signatures distinct inside
    each half; the appended set separates an element from its shifted
    twin.  An empty overall intersection survives the doubling.
    """
    k = f.instance.k
    if f.instance.n != 2 * k or not is_auxiliary(f):
        raise InvalidInputError(
            "aux_double needs a covering family with distinct signatures on (2k,k)")
    out = KneserInstance(4 * k, 2 * k, Regime.AUXILIARY)
    doubled = [tuple(sorted(s + tuple(a + 2 * k for a in s))) for s in f.sets]
    doubled.append(tuple(range(1, 2 * k + 1)))
    return Family.of(out, doubled)


def det_lift_odd(f: Family) -> Family:
    """Lift a determining family on (2k+1,k) to one on (4k+3,2k+1).

    The input must have union exactly {1..2k} (callers relabel so the
    missed element is 2k+1) and an empty overall intersection.  Each
    output set is the input set, its copy shifted by +(2k+1), and the
    element 4k+2; the set {1..2k+1} is appended.  The output misses
    only the top element 4k+3.
    """
    k = f.instance.k
    if f.instance.n != 2 * k + 1:
        raise InvalidInputError("det_lift_odd needs an instance (2k+1,k)")
    if not is_determining(f):
        raise InvalidInputError("det_lift_odd needs a determining family")
    if covered_elements(f) != set(range(1, 2 * k + 1)):
        raise InvalidInputError("det_lift_odd needs union exactly {1..2k}")
    if _family_intersection(f):
        raise InvalidInputError("det_lift_odd needs an empty overall intersection")
    shift = 2 * k + 1
    out = KneserInstance(4 * k + 3, 2 * k + 1, Regime.DETERMINING)
    lifted = [tuple(sorted(s + tuple(a + shift for a in s) + (4 * k + 2,)))
              for s in f.sets]
    lifted.append(tuple(range(1, 2 * k + 2)))
    return Family.of(out, lifted)


def aux_set(k: int) -> ConstructionTrace:
    """Covering family with distinct signatures on (2k,k), with the trace.

    k = 2 and k = 3 are the hand-built bases; even k doubles the family
    for k/2, odd k routes the family for (k-1)/2 through the odd lift
    and rereads the result one element lower.  The overall intersection
    is empty at every stage, and the final size r satisfies
    2^(r-1) - 1 < 2k < 2^r - 1.
    """
    if k < 2:
        raise InvalidInputError(f"aux_set needs k >= 2, got {k}")
    if k in (2, 3):
        name = "K42" if k == 2 else "K63"
        base = aux_base(name)
        return ConstructionTrace((("base:" + name, base.instance, base.instance),),
                                 base)
    sub = aux_set(k // 2)
    if k % 2 == 0:
        final = aux_double(sub.final)
        step = ("double", sub.final.instance, final.instance)
        return ConstructionTrace(sub.steps + (step,), final)
    half = k // 2
    as_det = Family.of(KneserInstance(2 * half + 1, half, Regime.DETERMINING),
                       sub.final.sets)
    lifted = det_lift_odd(as_det)
    out = KneserInstance(2 * k, k, Regime.AUXILIARY)
    final = Family.of(out, lifted.sets)  # lifted sets never touch 2k+1 = 4*half+3
    return ConstructionTrace(sub.steps + (("lift-odd", as_det.instance, out),),
                             final)


def det_set_odd(k: int) -> Family:
    """Determining family on (2k+1,k) of size ceil(log2(2k+2)).

    The covering family for (2k,k) reread one element higher: the new
    element is the only one outside the union, so its all-zero
    signature stays unique.
    """
    aux = aux_set(k).final
    return Family.of(KneserInstance(2 * k + 1, k, Regime.DETERMINING), aux.sets)


def construct_triangular(r: int) -> Family:
    """r sets of size r on r(r+1)/2+1 elements, pairwise intersections 1.

    Set i reuses one element of every earlier set (the one at position
    i-1) and fills up with fresh elements.  The last fresh element of
    each set ends up in that set alone, every other used element lands
    in exactly two sets, and the top ground element is left out
    entirely, so all signatures are distinct.
    """
    if r < 3:
        raise InvalidInputError(f"construct_triangular needs r >= 3, got {r}")
    sets: list[list[int]] = [list(range(1, r + 1))]
    nxt = r + 1
    for i in range(2, r + 1):
        shared = [sets[j][i - 2] for j in range(i - 1)]
        fresh = list(range(nxt, nxt + r - i + 1))
        nxt += r - i + 1
        sets.append(shared + fresh)
    inst = KneserInstance(r * (r + 1) // 2 + 1, r, Regime.DETERMINING)
    return Family.of(inst, sets)


def triangular_diagonal(r: int) -> tuple[int, ...]:
    """The elements of construct_triangular(r) that lie in exactly one set."""
    return tuple(s[-1] for s in construct_triangular(r).sets)


def extend_n(f: Family) -> Family:
    """Reread a determining family on (n,k) as one on (n+1,k).

    Under full coverage the sets transfer unchanged (the new element is
    the only one with an all-zero signature).  Otherwise the missed
    element is relabeled to n and {1..k-1, n+1} is appended so that the
    new element gets a signature of its own.  Size grows by at most 1.
    """
    if not is_determining(f):
        raise InvalidInputError("extend_n needs a determining family")
    n, k = f.instance.n, f.instance.k
    out = KneserInstance(n + 1, k, Regime.DETERMINING)
    missed = set(range(1, n + 1)) - covered_elements(f)
    if not missed:
        return Family.of(out, f.sets)
    # at most one element can be missed, or two signatures would be zero
    g = _swap_labels(f, missed.pop(), n)
    return Family.of(out, g.sets + (tuple(range(1, k)) + (n + 1,),))


def _resort_below_top(f: Family) -> Family:
    """Relabel 1..n-1 by descending membership count; the top stays put."""
    n = f.instance.n
    counts = membership_counts(f)
    order = sorted(range(1, n), key=lambda e: (-counts[e - 1], e))
    mapping = {old: new for new, old in enumerate(order, start=1)}
    mapping[n] = n
    return relabel_family(f, mapping)


def _eliminate_top(f: Family) -> Family:
    """Rewrite f so the top ground element ends up in no set.

    Needs full coverage and distinct signatures.  One set at a time the
    top element is swapped for the smallest candidate that keeps the
    whole family's signatures pairwise distinct; labels below the top
    are re-sorted by membership count after every step.  A counting
    argument guarantees some candidate always works in the n > 2k
    regime, so exhausting them signals a bug.
    """
    top = f.instance.n
    while True:
        idx = next((i for i, s in enumerate(f.sets) if top in s), None)
        if idx is None:
            return f
        rest = tuple(e for e in f.sets[idx] if e != top)
        replaced = None
        for t in range(1, top):
            if t in f.sets[idx]:
                continue
            cand_sets = list(f.sets)
            cand_sets[idx] = tuple(sorted(rest + (t,)))
            cand = Family(f.instance, tuple(cand_sets))
            if is_determining(cand):
                replaced = cand
                break
        if replaced is None:
            raise InternalInconsistencyError(
                f"no replacement frees element {top} from set {f.sets[idx]}")
        f = _resort_below_top(replaced)


def reduce_n(f: Family) -> Family:
    """Shrink the ground set of a determining family by one element.

    Input on (n+1,k), output on (n,k), same number of sets.  An
    uncovered element is relabeled to the top and dropped.  Under full
    coverage the labels are first sorted by descending membership count
    (the top label gets the rarest element), then the top element is
    replaced set by set until it is free, each replacement checked
    against the whole family's signatures.
    """
    if not is_determining(f):
        raise InvalidInputError("reduce_n needs a determining family")
    big, k = f.instance.n, f.instance.k
    if big - 1 <= 2 * k:
        raise InvalidInputError(
            f"reduce_n output violates n > 2k: n={big - 1}, k={k}")
    out = KneserInstance(big - 1, k, Regime.DETERMINING)
    missed = set(range(1, big + 1)) - covered_elements(f)
    if missed:
        g = _swap_labels(f, missed.pop(), big)
        return Family.of(out, g.sets)
    g = _eliminate_top(canonicalize(f))
    return Family.of(out, g.sets)


def lift_nk(f: Family) -> Family:
    """Turn a determining family on (n,k) into one on (n+1,k+1).

    The family is first arranged to miss its top element n (replacing n
    set by set if everything was covered), then n is added to every
    set.  If some element lay in every input set its signature now
    collides with the all-ones signature of n; the collision is
    repaired by swapping that element out of the first set for the
    smallest workable candidate.  Size is preserved.
    """
    if not is_determining(f):
        raise InvalidInputError("lift_nk needs a determining family")
    n, k = f.instance.n, f.instance.k
    if n + 1 < 2 * k + 3:
        raise InvalidInputError(f"lift_nk needs n+1 >= 2k+3, got n={n}, k={k}")
    missed = set(range(1, n + 1)) - covered_elements(f)
    if missed:
        g = _swap_labels(f, missed.pop(), n)
    else:
        g = _eliminate_top(canonicalize(f))
    out = KneserInstance(n + 1, k + 1, Regime.DETERMINING)
    lifted = [tuple(sorted(s + (n,))) for s in g.sets]
    cand = Family.of(out, lifted)
    if is_determining(cand):
        return cand
    common = _family_intersection(cand)
    common.discard(n)
    if len(common) != 1:
        raise InternalInconsistencyError("lift collision without a unique cause")
    a = common.pop()
    first = tuple(e for e in lifted[0] if e != a)
    for t in range(1, n):
        if t in lifted[0]:
            continue
        trial = list(lifted)
        trial[0] = tuple(sorted(first + (t,)))
        repaired = Family.of(out, trial)
        if is_determining(repaired):
            return repaired
    raise InternalInconsistencyError(
        f"no replacement separates element {a} from the lift element")
