"""Command-line interface: ``rootstrings <subcommand> ...``.

Simple indices and node labels are 1-based on this surface.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import closedform, verify
from .closedform import ClassicalFamily, ExceptionalFamily
from .errors import RootStringError
from .rootsys import RootSystem, build_root_system, connected_components, level, level_key
from .stringgraph import build_string_graph, emit_dot, emit_text, graph_as_dict, graph_invariants, node_expression
from .strings import describe_pair, is_minimum_level, minimum_level_root, phi_string


class UsageError(RootStringError):
    pass


def _parse_ints(text: str, what: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from exc


def _phi(rs: RootSystem, text: str) -> list[int]:
    idx = _parse_ints(text, "--phi")
    bad = [i for i in idx if not 1 <= i <= rs.rank]
    if bad:
        raise UsageError(f"--phi indices {bad} outside 1..{rs.rank} for {rs.rtype}")
    if len(set(idx)) != len(idx):
        raise UsageError(f"--phi has repeated indices: {idx}")
    return sorted(i - 1 for i in idx)


def _lambda(rs: RootSystem, text: str) -> tuple[int, ...]:
    lam = tuple(_parse_ints(text, "--lambda"))
    if len(lam) != rs.rank:
        raise UsageError(f"--lambda has {len(lam)} coefficients, {rs.rtype} needs {rs.rank}")
    if lam not in rs.roots:
        raise UsageError(f"--lambda {','.join(map(str, lam))} is not a root of {rs.rtype}")
    return lam


def _emit(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def cmd_roots(args: argparse.Namespace) -> int:
    rs = build_root_system(args.type)
    if args.format == "json":
        roots = [{"coefficients": list(r), "level": level(r), "norm": str(rs.norm2(r))} for r in rs.positives]
        sys.stdout.write(_emit({"type": str(rs.rtype), "rank": rs.rank, "positives": roots}))
    else:
        sys.stdout.write(rs.dump())
    return 0


def string_report(rs: RootSystem, phi: list[int], lam: tuple[int, ...]) -> dict:
    s = phi_string(rs, phi, lam)
    out = {
        "type": str(rs.rtype),
        "phi": [i + 1 for i in phi],
        "lambda": list(lam),
        "minimum": None,
        "members": [list(m) for m in s.sorted_members()],
        "pair": None,
        "cardinality": len(s),
        "in_span": s.in_span,
        "family": None,
    }
    if s.in_span:
        return out
    out["minimum"] = list(minimum_level_root(s))
    connected = bool(phi) and len(connected_components(rs, phi)) == 1
    if connected and is_minimum_level(rs, phi, lam)[0]:
        pair = describe_pair(rs, phi, lam)
        out["pair"] = {"phi_type": str(pair.phi_type), "extended_type": str(pair.extended_type)}
        if len(s) > 1:
            out["family"] = str(closedform.pair_type(rs, phi, lam).family)
    return out


def cmd_string(args: argparse.Namespace) -> int:
    rs = build_root_system(args.type)
    phi, lam = _phi(rs, args.phi), _lambda(rs, args.lambda_)
    rep = string_report(rs, phi, lam)
    if args.format == "json":
        sys.stdout.write(_emit(rep))
        return 0
    lines = [f"{rs.rtype}  phi={rep['phi']}  lambda={rep['lambda']}  |I|={rep['cardinality']}"]
    if rep["in_span"]:
        lines.append("lambda lies in span phi: the string is the subsystem spanned by phi, with 0")
    for m in rep["members"]:
        mark = "  (minimum)" if m == rep["minimum"] else ""
        lines.append(f"  {','.join(map(str, m))}  {node_expression(lam, tuple(m))}{mark}")
    if rep["pair"]:
        lines.append(f"pair: ({rep['pair']['phi_type']}, {rep['pair']['extended_type']})")
    if rep["family"]:
        lines.append(f"family: {rep['family']}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.all:
        report = verify.verify_all(fixtures=args.fixtures, sweep=args.sweep, jobs=args.jobs)
    else:
        if not (args.type and args.lambda_ is not None and args.phi is not None):
            raise UsageError("verify needs --all, or --type, --phi and --lambda")
        rs = build_root_system(args.type)
        report = verify.Report([verify.run_configuration(rs, _phi(rs, args.phi), _lambda(rs, args.lambda_), args.fixtures)])
    for r in report.results:
        if args.verbose or not r.passed or not args.all:
            print(r.line())
    ok, bad = report.counts()
    exceptional = [r for r in report.results if r.name in closedform.EXCEPTIONAL_TAGS]
    if exceptional:
        print("exceptional: " + ", ".join(f"{r.name}={r.got}" for r in exceptional))
    print(f"{ok} passed, {bad} failed")
    first = report.first_failure
    if first is not None:
        print(f"first failure: {first.name}", file=sys.stderr)
        return 1
    return 0


def cmd_diagram(args: argparse.Namespace) -> int:
    rs = build_root_system(args.type)
    phi, lam = _phi(rs, args.phi), _lambda(rs, args.lambda_)
    s = phi_string(rs, phi, lam)
    g = build_string_graph(rs, phi, s)
    if args.format == "dot":
        sys.stdout.write(emit_dot(g))
    elif args.format == "json":
        data = graph_as_dict(g)
        data["invariants"] = {"ok": graph_invariants(g).ok, "failures": graph_invariants(g).failures()}
        sys.stdout.write(_emit(data))
    else:
        sys.stdout.write(emit_text(g))
    return 0


def tables_data(n: int, fixtures: str | None = None) -> dict:
    classical = {}
    for tag in closedform.CLASSICAL_TAGS:
        try:
            fam = ClassicalFamily(tag, n)
        except RootStringError:
            continue
        coeffs = sorted(closedform.classical_coefficients(fam), key=level_key)
        classical[tag] = [node_expression((0,) * n, c) for c in coeffs]
    table = closedform.load_fixture_table(fixtures)
    exceptional = {}
    for tag in closedform.EXCEPTIONAL_TAGS:
        fam = ExceptionalFamily(tag)
        rows = closedform.fixture_rows(fam, table)
        r = closedform.exceptional_template(fam).ext.rank
        exceptional[tag] = [
            " ".join(map(str, row.coefficients[:r])) + (f" ({row.norm})" if row.norm else "") for row in rows
        ]
    return {"n": n, "classical": classical, "exceptional": exceptional}


def cmd_tables(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    data = tables_data(args.n, args.fixtures)
    if args.format == "json":
        sys.stdout.write(_emit(data))
        return 0
    out = [f"Classical families, n = {args.n} (coefficients over alpha_1..alpha_n)"]
    for tag, members in data["classical"].items():
        out.append(f"{tag}: {len(members)} members")
        out.extend(f"  {m}" for m in members)
    out.append("Exceptional families (coefficients by node label)")
    for tag, rows in data["exceptional"].items():
        out.append(f"{tag}: {len(rows)} members")
        out.extend(f"  {r}" for r in rows)
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rootstrings", description="Exact Phi-strings of root systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def case_args(sp: argparse.ArgumentParser, required: bool = True) -> None:
        sp.add_argument("--type", required=required, help="root system type, e.g. A5, BC3, E8")
        sp.add_argument("--phi", required=required, help="comma-separated 1-based simple indices")
        sp.add_argument("--lambda", dest="lambda_", required=required, help="comma-separated coefficients")

    sp = sub.add_parser("roots", help="list positive roots")
    sp.add_argument("--type", required=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("string", help="compute a Phi-string")
    case_args(sp)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.set_defaults(func=cmd_string)

    sp = sub.add_parser("verify", help="closed forms against enumeration")
    case_args(sp, required=False)
    sp.add_argument("--all", action="store_true", help="run the whole catalog")
    sp.add_argument("--sweep", action="store_true", help="with --all, also dispatch every connected case in a set of ambients")
    sp.add_argument("--fixtures", help="alternative exceptional data table (CSV)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-v", "--verbose", action="store_true", help="print passing cases too")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("diagram", help="string graph")
    case_args(sp)
    sp.add_argument("--format", choices=("dot", "json", "text"), default="dot")
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("tables", help="closed-form member lists")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--fixtures", help="alternative exceptional data table (CSV)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_tables)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RootStringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
