"""Command-line interface.

Exit codes: 0 pass, 1 a check or conclusion failed, 2 structural error.
Standard output is JSON; ``--pretty`` switches to a short human rendering.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import constructions as C
from .algebra import HomAlgebra, LinearMap, to_scalar
from .document import load_algebra, matrix_to_json, render_algebra
from .dsl import CheckReport, IdentitySyntaxError, evaluate_identity, parse_identity
from .expectations import check_expectations
from .grading import StructureError
from .operators import OperatorKind, check_operator
from .search import SearchOverflow, SearchSpec, search_operators
from .suites import SuiteError, SuiteReport, check_multiplicative, check_suite, list_suites


class UsageError(Exception):
    pass


def _parse_bind(items: Sequence[str] | None) -> dict[str, str]:
    out = {}
    for item in items or ():
        slot, sep, prod = item.partition("=")
        if not sep or not slot or not prod:
            raise UsageError(f"--bind expects slot=product, got {item!r}")
        out[slot] = prod
    return out


def parse_map(alg: HomAlgebra, spec: str) -> LinearMap:
    """``id``, ``zero``, ``alpha``, ``<rational>*id``, ``<name>^k`` or a map named in the document."""
    spec = spec.strip()
    base, _, power = spec.partition("^")
    if base == "id":
        m = LinearMap.identity(alg.dim)
    elif base == "zero":
        m = LinearMap.zero(alg.dim)
    elif base == "alpha":
        m = alg.alpha
    elif base.endswith("*id"):
        m = LinearMap.scalar(to_scalar(base[:-3]), alg.dim)
    elif base in alg.maps:
        m = alg.maps[base]
    else:
        raise UsageError(f"unknown map {spec!r}; use id, zero, alpha, c*id or one of "
                         f"{sorted(alg.maps)}")
    return m.power(int(power)) if power else m


def _report_json(alg: HomAlgebra, r: SuiteReport | CheckReport) -> dict:
    return r.to_json(alg)


def _emit(args, payload: dict, pretty_lines: list[str]) -> None:
    if getattr(args, "pretty", False):
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))


def _pretty_report(alg: HomAlgebra, r) -> list[str]:
    if isinstance(r, SuiteReport):
        lines = [f"{r.suite}: {'PASS' if r.passed else 'FAIL'}"]
        for c in r.reports:
            lines += ["  " + line for line in _pretty_report(alg, c)]
        return lines
    line = f"{r.name}: {'pass' if r.passed else 'FAIL'} ({r.tuples_checked} tuples)"
    if r.witness is not None:
        w = r.witness.to_json(alg)
        line += f" witness {w['identity']} at {tuple(w['tuple'])}: residual {w['residual']}"
    return [line]


def cmd_check(args) -> int:
    alg = load_algebra(args.file)
    if args.suite:
        reports = [check_suite(alg, args.suite, _parse_bind(args.bind))]
    elif args.operator:
        kind = OperatorKind.parse(args.operator, args.weight)
        m = parse_map(alg, args.map)
        reports = [check_operator(alg, kind, m, args.products)]
    elif args.multiplicative:
        reports = [check_multiplicative(alg)]
    else:
        reports = check_expectations(alg)
        if not reports:
            raise UsageError("document has no expectations; pass --suite or --operator")
    passed = all(r.passed for r in reports)
    _emit(args, {"passed": passed, "reports": [_report_json(alg, r) for r in reports]},
          [line for r in reports for line in _pretty_report(alg, r)])
    return 0 if passed else 1


def cmd_identity(args) -> int:
    alg = load_algebra(args.file)
    schema = parse_identity(args.schema, name=args.name)
    binding = _parse_bind(args.bind)
    missing = [p for p in schema.products() if p not in binding and p not in alg.product_names]
    if missing:
        raise UsageError(f"no product bound for {missing}")
    r = evaluate_identity(alg, schema.rename(binding))
    _emit(args, {"passed": r.passed, "schema": schema.render(), "report": r.to_json(alg)},
          _pretty_report(alg, r))
    return 0 if r.passed else 1


def cmd_describe(args) -> int:
    alg = load_algebra(args.file)
    sp = alg.space
    info = {
        "dimension": sp.dim,
        "group": sp.group.to_json(),
        "basis": [{"name": n, "degree": list(d)} for n, d in sp.basis],
        "products": [{"name": p.name, "nonzero_entries": len(p.table),
                      "density": f"{len(p.table)}/{sp.dim ** 2}"} for p in alg.products],
        "alpha": matrix_to_json(alg.alpha),
        "maps": sorted(alg.maps),
        "multiplicative": check_multiplicative(alg).passed,
        "expect": alg.meta.get("expect", []),
    }
    lines = [f"dimension {sp.dim}, group Z^{sp.group.free_rank} x {list(sp.group.torsion)}"]
    lines += [f"  {n}: degree {list(d)}" for n, d in sp.basis]
    lines += [f"product {p['name']}: {p['density']} nonzero" for p in info["products"]]
    lines.append(f"multiplicative: {info['multiplicative']}")
    _emit(args, info, lines)
    return 0


def cmd_list_suites(args) -> int:
    rows = list_suites()
    _emit(args, {"suites": [{"name": n, "slots": list(s), "schemas": k} for n, s, k in rows]},
          [f"{n:40s} slots={','.join(s):16s} schemas={k}" for n, s, k in rows])
    return 0


def cmd_search(args) -> int:
    alg = load_algebra(args.file)
    entries = [to_scalar(e) for e in args.entries.split(",") if e.strip()]
    spec = SearchSpec(OperatorKind.parse(args.kind, args.weight), tuple(entries), args.limit,
                      tuple(args.products) if args.products else None)
    found = search_operators(alg, spec)
    _emit(args, {"kind": str(spec.kind), "count": len(found),
                 "maps": [matrix_to_json(m) for m in found]},
          [f"{len(found)} maps of kind {spec.kind}"] + [str(matrix_to_json(m)) for m in found])
    return 0


def _run_construction(args, alg: HomAlgebra) -> C.ConstructionResult:
    op, verify = args.op, not args.no_verify
    bind = _parse_bind(args.bind) or None
    if op == "tensor_product":
        if not args.second:
            raise UsageError("tensor_product needs --second FILE")
        return C.tensor_product(alg, load_algebra(args.second), verify=verify)
    if op == "nijenhuis_deform":
        return C.nijenhuis_deform(alg, parse_map(alg, args.map or "R"), args.compose_alpha,
                                  args.product, verify)
    if op == "averaging_dialgebra":
        return C.averaging_dialgebra(alg, parse_map(alg, args.map or "id"), args.product, verify)
    if op == "ideal_dialgebra":
        ideal = [n for n in (args.ideal or "").split(",") if n]
        return C.ideal_dialgebra(alg, ideal, args.product, verify)
    if op == "bracket_from":
        return C.bracket_from(alg, args.kind or "commutator", bind, verify)
    if op == "rb_split":
        weight = args.weight if args.weight is not None else "0"
        return C.rb_split(alg, parse_map(alg, args.map or "R"), weight,
                          args.mode or "tridendriform", args.product, verify)
    if op in ("sum_product", "tridendriform_to_postlie", "postlie_star", "opposite",
              "dendriform_from_tri"):
        return getattr(C, op)(alg, bind, verify)
    if op == "yau_twist":
        return C.yau_twist(alg, parse_map(alg, args.map or "alpha"), args.n, args.suite, bind,
                           verify)
    if op == "derived_algebra":
        return C.derived_algebra(alg, args.type, args.k, args.suite, bind, verify)
    if op == "centroid_twist":
        return C.centroid_twist(alg, parse_map(alg, args.b1), parse_map(alg, args.b2),
                                args.variant, args.suite, bind, verify)
    raise UsageError(f"unknown construction {op!r}")


def cmd_construct(args) -> int:
    alg = load_algebra(args.file)
    try:
        res = _run_construction(args, alg)
    except C.HypothesisError as exc:
        failures = []
        for label, r in exc.failures:
            item = {"hypothesis": label}
            if r is not None:
                item["report"] = r.to_json(alg)
            failures.append(item)
        _emit(args, {"construction": exc.construction, "passed": False,
                     "hypotheses_failed": failures},
              [str(exc)])
        return 1
    text = render_algebra(res.algebra)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    payload = {"construction": args.op, "expected_suite": res.expected_suite,
               "verified": res.verified if res.verify else None,
               "reports": [_report_json(res.algebra, r) for r in res.reports]}
    if not args.output:
        payload["algebra"] = json.loads(text)
    lines = [f"{args.op}: expected {res.expected_suite}"]
    for r in res.reports:
        lines += _pretty_report(res.algebra, r)
    _emit(args, payload, lines)
    return 0 if (res.verified or not res.verify) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorhom",
                                     description="Exact checks for color Hom-algebras")
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check", help="run a suite, an operator check or the document's expectations")
    p.add_argument("file")
    p.add_argument("--suite")
    p.add_argument("--bind", action="append", metavar="SLOT=PRODUCT")
    p.add_argument("--operator", choices=["rota_baxter", "nijenhuis", "averaging", "centroid"])
    p.add_argument("--map", default="R")
    p.add_argument("--weight")
    p.add_argument("--products", nargs="+")
    p.add_argument("--multiplicative", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("identity", help="check an ad-hoc identity")
    p.add_argument("file")
    p.add_argument("--schema", required=True)
    p.add_argument("--name", default="identity")
    p.add_argument("--bind", action="append", metavar="SLOT=PRODUCT")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("construct", help="apply a construction")
    p.add_argument("file")
    p.add_argument("--op", required=True, choices=C.CONSTRUCTIONS)
    p.add_argument("-o", "--output")
    p.add_argument("--second", help="second factor for tensor_product")
    p.add_argument("--map", help="operator argument: id, zero, alpha, c*id, NAME or NAME^k")
    p.add_argument("--b1", default="id")
    p.add_argument("--b2", default="id")
    p.add_argument("--weight")
    p.add_argument("--mode", choices=["tridendriform", "dendriform"])
    p.add_argument("--kind", choices=["commutator", "dialgebra"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--type", type=int, choices=[1, 2], default=1)
    p.add_argument("--variant", type=int, choices=[1, 2], default=1)
    p.add_argument("--ideal", help="comma-separated basis names spanning the ideal")
    p.add_argument("--product")
    p.add_argument("--suite")
    p.add_argument("--bind", action="append", metavar="SLOT=PRODUCT")
    p.add_argument("--compose-alpha", action="store_true")
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="grid search for operators")
    p.add_argument("file")
    p.add_argument("--kind", required=True,
                   choices=["rota_baxter", "nijenhuis", "averaging", "centroid"])
    p.add_argument("--weight")
    p.add_argument("--entries", default="-1,0,1")
    p.add_argument("--limit", type=int, default=1_000_000)
    p.add_argument("--products", nargs="+")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("describe", help="summarise an algebra document")
    p.add_argument("file")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("list-suites", help="list the built-in axiom suites")
    p.set_defaults(func=cmd_list_suites)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow --pretty anywhere on the line
    pretty = "--pretty" in argv
    argv = [a for a in argv if a != "--pretty"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    args.pretty = pretty
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (StructureError, SuiteError, IdentitySyntaxError, UsageError, SearchOverflow,
            C.ConstructionError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"error": type(exc).__name__, "message": str(msg)}), file=sys.stdout)
        return 2


def dispatch(argv: Sequence[str]) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
