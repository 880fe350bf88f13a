"""Command-line surface.

Commands:
  det        exact determining number of one pair, with witness
  bounds     closed-form bounds and exact value for one pair
  construct  build a family (triangular | aux | det-odd | extend | reduce | lift)
  verify     check families from a JSON-lines file (or -)
  census     CSV of all pairs with determining number exactly r
  table      CSV of bounds and values for all valid pairs up to max_n
  diagram    CSV region classification over the (n,k) grid up to max_n

Data goes to standard output and is byte-stable given equal arguments
and budgets: sorted orders, LF newlines, no timestamps.  Diagnostics
and certification notes go to standard error.  Exit codes: 0 success,
2 malformed input, 3 budget exhausted, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import TextIO

from .bounds import bounds_report, known_exact
from .census import census_csv, determining_number, f_count
from .constructions import (
    aux_set,
    construct_triangular,
    det_set_odd,
    extend_n,
    lift_nk,
    reduce_n,
)
from .core import (
    BudgetExceededError,
    Family,
    InvalidInputError,
    KneserError,
    KneserInstance,
    Regime,
    family_from_json,
    family_to_json,
    first_unseparated_pair,
    is_auxiliary,
    is_determining,
)
from .search import Certificate, SearchBudget, det_decision, det_exact

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


@dataclass(frozen=True)
class RegionRow:
    """One cell of the (n,k) grid classification.

    classification is "invalid" exactly when n <= 2k; "exact-known"
    exactly when a closed form settles the pair; "upper-bound-only"
    otherwise.  value_or_bound is None only on invalid rows.
    """

    n: int
    k: int
    classification: str
    value_or_bound: int | None
    provenance: str


def diagram_rows(max_n: int) -> list[RegionRow]:
    rows: list[RegionRow] = []
    for n in range(3, max_n + 1):
        for k in range(1, n // 2 + 1):
            if n <= 2 * k:
                rows.append(RegionRow(n, k, "invalid", None, ""))
                continue
            inst = KneserInstance(n, k, Regime.DETERMINING)
            exact = known_exact(inst)
            if exact is not None:
                rows.append(RegionRow(n, k, "exact-known", exact.value,
                                      "+".join(exact.rules)))
            else:
                rep = bounds_report(inst)
                rows.append(RegionRow(n, k, "upper-bound-only", rep.upper,
                                      "+".join(rep.upper_rules)))
    return rows


def _budget(args: argparse.Namespace) -> SearchBudget:
    kwargs: dict = {}
    if getattr(args, "max_nodes", None) is not None:
        kwargs["node_limit"] = args.max_nodes
    if getattr(args, "max_seconds", None) is not None:
        kwargs["time_limit"] = args.max_seconds
    return SearchBudget(**kwargs)


def _singleton_family(inst: KneserInstance) -> Family:
    # k = 1: the n-1 singletons below n are a minimum witness
    return Family.of(inst, [[e] for e in range(1, inst.n)])


def _closed_form_witness(inst: KneserInstance, value: int,
                         budget: SearchBudget, err: TextIO) -> Family | None:
    """A witness matching a closed-form value, cheap routes first."""
    if inst.k == 1:
        return _singleton_family(inst)
    if inst.n == 2 * inst.k + 1:
        return det_set_odd(inst.k)
    try:
        found, wit = det_decision(inst, value, budget)
    except BudgetExceededError:
        print(f"witness search for ({inst.n},{inst.k}) at r={value} "
              "exceeded the budget; value stands without a witness", file=err)
        return None
    except InvalidInputError as exc:
        print(f"witness search skipped: {exc}", file=err)
        return None
    if not found:
        raise InternalInconsistencyError(
            f"closed form says {value} but no family of that size exists "
            f"on ({inst.n},{inst.k})")
    return wit


def cmd_det(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    budget = _budget(args)
    inst = KneserInstance(args.n, args.k, Regime.DETERMINING)
    exact = known_exact(inst)
    if exact is not None:
        value: int = exact.value
        certificate = Certificate.CLOSED_FORM
        witness = _closed_form_witness(inst, value, budget, err)
    else:
        res = det_exact(inst, budget)
        if res.value is None:
            ruled = (f"ruled out all sizes up to {res.decided_up_to}"
                     if res.decided_up_to is not None else "ruled out nothing")
            print(f"budget exhausted on ({inst.n},{inst.k}); {ruled}",
                  file=err)
            return EXIT_BUDGET
        value, certificate, witness = res.value, res.certificate, res.witness
    print(f"det({inst.n},{inst.k}) = {value}", file=out)
    print(f"certificate: {certificate.value}", file=out)
    if witness is not None:
        print("witness: " + family_to_json(witness), file=out)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    rep = bounds_report(KneserInstance(args.n, args.k, Regime.DETERMINING))
    print(f"lower: {rep.lower} ({'+'.join(rep.lower_rules)})", file=out)
    print(f"upper: {rep.upper} ({'+'.join(rep.upper_rules)})", file=out)
    if rep.exact is not None:
        print(f"exact: {rep.exact.value} ({'+'.join(rep.exact.rules)})",
              file=out)
    else:
        print("exact: unknown", file=out)
    return EXIT_OK


def _read_families(path: str) -> list[Family]:
    if path == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    return [family_from_json(line) for line in lines if line.strip()]


def _int_param(rule: str, param: str) -> int:
    try:
        return int(param)
    except ValueError:
        raise InvalidInputError(
            f"construct {rule} needs an integer parameter, got {param!r}"
        ) from None


def _certify(fam: Family, err: TextIO) -> None:
    if fam.instance.regime is Regime.AUXILIARY:
        kind, ok = "auxiliary", is_auxiliary(fam)
    else:
        kind, ok = "determining", is_determining(fam)
    if not ok:
        raise InternalInconsistencyError(
            f"construction output failed the {kind} check on "
            f"({fam.instance.n},{fam.instance.k})")
    print(f"certified: {kind}, {fam.size} sets on "
          f"({fam.instance.n},{fam.instance.k})", file=err)


def cmd_construct(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    rule = args.rule
    if rule == "triangular":
        fams = [construct_triangular(_int_param(rule, args.param))]
    elif rule == "aux":
        trace = aux_set(_int_param(rule, args.param))
        for name, src, dst in trace.steps:
            print(f"step: {name} ({src.n},{src.k}) -> ({dst.n},{dst.k})",
                  file=err)
        fams = [trace.final]
    elif rule == "det-odd":
        fams = [det_set_odd(_int_param(rule, args.param))]
    else:
        op = {"extend": extend_n, "reduce": reduce_n, "lift": lift_nk}[rule]
        fams = [op(f) for f in _read_families(args.param)]
        if not fams:
            raise InvalidInputError(f"construct {rule}: no families in input")
    for fam in fams:
        _certify(fam, err)
        print(family_to_json(fam), file=out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    failed = False
    if args.file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {args.file}: {exc}") from exc
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fam = family_from_json(line)
        if len(set(fam.sets)) != len(fam.sets):
            print(f"line {i}: duplicate set in family", file=err)
        if is_determining(fam):
            print(f"line {i}: PASS", file=out)
        else:
            pair = first_unseparated_pair(fam)
            assert pair is not None
            print(f"line {i}: FAIL unseparated pair ({pair[0]},{pair[1]})",
                  file=out)
            failed = True
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_census(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    rec = f_count(args.r, _budget(args))
    out.write(census_csv([rec]))
    if rec.partial:
        pairs = " ".join(f"({n},{k})" for n, k in rec.unresolved)
        print(f"partial census: unresolved pairs {pairs}", file=err)
        return EXIT_BUDGET
    print(f"f({rec.r}) = {rec.f}, F({rec.r}) = {rec.F}", file=err)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    budget = _budget(args)
    lines = ["n,k,lower,upper,exact,det"]
    unresolved: list[tuple[int, int]] = []
    for n in range(3, args.max_n + 1):
        for k in range(1, (n - 1) // 2 + 1):
            rep = bounds_report(KneserInstance(n, k, Regime.DETERMINING))
            exact_cell = "" if rep.exact is None else str(rep.exact.value)
            try:
                value, _ = determining_number(n, k, budget)
                det_cell = str(value)
            except BudgetExceededError:
                unresolved.append((n, k))
                det_cell = ""
            lines.append(f"{n},{k},{rep.lower},{rep.upper},"
                         f"{exact_cell},{det_cell}")
    out.write("\n".join(lines) + "\n")
    if unresolved:
        pairs = " ".join(f"({n},{k})" for n, k in unresolved)
        print(f"unresolved pairs left blank: {pairs}", file=err)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_diagram(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    lines = ["n,k,classification,value_or_bound,provenance"]
    for row in diagram_rows(args.max_n):
        cell = "" if row.value_or_bound is None else str(row.value_or_bound)
        lines.append(f"{row.n},{row.k},{row.classification},{cell},"
                     f"{row.provenance}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=None,
                   help="search node budget per pair (default 10^9)")
    p.add_argument("--max-seconds", type=float, default=None,
                   help="wall-clock budget per searched pair")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kneserdet",
        description="determining sets of Kneser graphs: exact values, "
                    "bounds, constructions, and the census")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("det", help="exact determining number with witness")
    d.add_argument("n", type=int)
    d.add_argument("k", type=int)
    _add_budget_flags(d)
    d.set_defaults(func=cmd_det)

    b = sub.add_parser("bounds", help="closed-form bounds for one pair")
    b.add_argument("n", type=int)
    b.add_argument("k", type=int)
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("construct", help="build and certify a family")
    c.add_argument("rule", choices=["triangular", "aux", "det-odd",
                                    "extend", "reduce", "lift"])
    c.add_argument("param",
                   help="integer (triangular: r, aux/det-odd: k) or "
                        "JSON-lines file of families (extend/reduce/lift, "
                        "- for stdin)")
    _add_budget_flags(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check families from a JSON-lines file")
    v.add_argument("file", help="path or - for stdin")
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("census", help="all pairs with value exactly r, as CSV")
    ce.add_argument("r", type=int)
    _add_budget_flags(ce)
    ce.set_defaults(func=cmd_census)

    t = sub.add_parser("table", help="bounds and values up to max_n, as CSV")
    t.add_argument("max_n", type=int)
    _add_budget_flags(t)
    t.set_defaults(func=cmd_table)

    g = sub.add_parser("diagram", help="region classification grid, as CSV")
    g.add_argument("max_n", type=int)
    g.set_defaults(func=cmd_diagram)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, sys.stdout, sys.stderr)
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except KneserError as exc:
        if isinstance(exc, ValueError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        raise  # internal inconsistency is a bug; keep the traceback


if __name__ == "__main__":
    sys.exit(main())
