"""Command line front end.

    energybounds analyze (--g6 STRING | --family NAME ARGS..) [--kmax N] [--tol X]
    energybounds survey FILE [--out PATH] [--format csv|json] [--strict] [--jobs N]
    energybounds case-study {tree,join,blowup} [...]

Exit codes: 0 success, 1 usage, 2 parse error (analyze, or survey with
--strict), 3 internal inconsistency (a bound above the energy).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import casestudies
from .bounds import BOUND_NAMES, BoundReport, spectral_counts, spectral_profile, survey
from .classify import (
    certify_equal_moduli,
    certify_unit_moduli,
    find_strictness_witness,
    match_bipartite_union,
    match_clique_matching_union,
)
from .graph6 import Graph6Error, iter_graph6_lines, parse_graph6, write_graph6
from .graphs import make_family

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCONSISTENT = 0, 1, 2, 3

SURVEY_COLUMNS = (
    ["line", "graph6", "n", "m", "kappa", "rho", "energy"]
    + list(BOUND_NAMES)
    + ["winner", "certificate", "witness", "error"]
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """CSV cell: 12 significant digits for floats, NA for missing."""
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, int) and not isinstance(value, bool) and abs(value) >= 2**53:
        return str(value)
    return value


def _zero_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("SPECTRAL_ZERO_TOL")
    return float(env) if env else None


def _certificates(G, report: BoundReport):
    certs = []
    if report.m:
        M = G.adjacency()
        spec = spectral_profile(M).spectrum
        for cert in (
            match_bipartite_union(G),
            certify_equal_moduli(spec, M),
            match_clique_matching_union(G),
            certify_unit_moduli(spec),
        ):
            if cert is not None:
                certs.append(cert)
    return certs


def analyze_graph(G, ident="", kmax=None, zero_tol=None) -> dict:
    """Full report for one graph as a JSON-ready dict."""
    report = survey(G, kmax=kmax, zero_tol=zero_tol, ident=ident)
    certs = _certificates(G, report)
    witness = find_strictness_witness(G) if G.n >= 3 else None
    counts = spectral_counts(G) if report.m else None
    out = {
        "id": ident,
        "graph6": write_graph6(G),
        "n": report.n,
        "m": report.m,
        "kappa": report.kappa,
        "rho": report.rho,
        "energy": report.energy,
        "bounds": [
            {
                "name": e.name,
                "value": e.value,
                "applicable": e.applicable,
                "gap": report.gaps[e.name],
                "note": e.note,
            }
            for e in report.entries
        ],
        "winner": report.winner,
        "certificates": [c.as_dict() for c in certs],
        "witness": witness.as_dict() if witness else None,
        "spectral_counts": None
        if counts is None
        else {"c": counts.c, "f": counts.f, "kappa": counts.kappa, "applicable": counts.applicable, "note": counts.note},
        "notes": report.notes,
        "violations": report.violations,
    }
    return _jsonable(out)


def _survey_row(item):
    lineno, text, graph, kmax, zero_tol = item
    row = dict.fromkeys(SURVEY_COLUMNS)
    row["line"] = lineno
    row["graph6"] = text
    if isinstance(graph, Graph6Error):
        row["error"] = str(graph)
        return row, []
    report = survey(graph, kmax=kmax, zero_tol=zero_tol, ident=f"{lineno}:{text}")
    row.update(n=report.n, m=report.m, kappa=report.kappa, rho=report.rho, energy=report.energy)
    for e in report.entries:
        row[e.name] = e.value
    row["winner"] = report.winner
    certs = _certificates(graph, report)
    row["certificate"] = "+".join(c.kind for c in certs) or "none"
    witness = find_strictness_witness(graph) if graph.n >= 3 else None
    row["witness"] = witness.kind if witness else "none"
    return row, report.violations


def _write_table(rows, columns, fmt_name, out):
    if fmt_name == "json":
        json.dump([_jsonable({c: r[c] for c in columns}) for r in rows], out, indent=2)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def cmd_analyze(args) -> int:
    if (args.g6 is None) == (args.family is None):
        print("analyze: give exactly one of --g6 or --family", file=sys.stderr)
        return EXIT_USAGE
    if args.g6 is not None:
        try:
            G = parse_graph6(args.g6)
        except Graph6Error as exc:
            print(f"analyze: {exc}", file=sys.stderr)
            return EXIT_PARSE
        ident = args.g6
    else:
        name, *params = args.family
        try:
            G = make_family(name, *(int(p) for p in params))
        except ValueError as exc:
            print(f"analyze: {exc}", file=sys.stderr)
            return EXIT_USAGE
        ident = " ".join(args.family)
    result = analyze_graph(G, ident=ident, kmax=args.kmax, zero_tol=_zero_tol(args))
    out, close = _open_out(args.out)
    try:
        if args.format == "csv":
            row = {"id": result["id"], "n": result["n"], "m": result["m"], "kappa": result["kappa"],
                   "rho": result["rho"], "energy": result["energy"], "winner": result["winner"]}
            for b in result["bounds"]:
                row[b["name"]] = b["value"]
            _write_table([row], list(row), "csv", out)
        else:
            json.dump(result, out, indent=2)
            out.write("\n")
    finally:
        if close:
            out.close()
    return EXIT_INCONSISTENT if result["violations"] else EXIT_OK


def cmd_survey(args) -> int:
    zero_tol = _zero_tol(args)
    with open(args.file, encoding="ascii", errors="replace") as fh:
        items = [(ln, text, g, args.kmax, zero_tol) for ln, text, g in iter_graph6_lines(fh)]
    if args.strict:
        for ln, _, g, _, _ in items:
            if isinstance(g, Graph6Error):
                print(f"survey: line {ln}: {g}", file=sys.stderr)
                return EXIT_PARSE
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_survey_row, items, chunksize=max(1, len(items) // (4 * args.jobs))))
    else:
        results = [_survey_row(it) for it in items]
    rows = [r for r, _ in results]
    out, close = _open_out(args.out)
    try:
        _write_table(rows, SURVEY_COLUMNS, args.format, out)
    finally:
        if close:
            out.close()
    wins = Counter(r["winner"] for r in rows if r["winner"])
    errors = sum(1 for r in rows if r["error"])
    summary = ", ".join(f"{name}={wins.get(name, 0)}" for name in BOUND_NAMES)
    print(f"graphs={len(rows)} errors={errors} winners: {summary}", file=sys.stderr, flush=True)
    bad = [(r["line"], v) for (r, v) in results if v]
    if bad:
        for line, names in bad:
            print(f"survey: line {line}: bound above energy: {', '.join(names)}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_case_study(args) -> int:
    try:
        if args.which == "tree":
            rows = casestudies.tree_rows(args.n_min, args.n_max)
        elif args.which == "join":
            if args.r1 is not None or args.r2 is not None:
                if args.r1 is None or args.r2 is None:
                    raise ValueError("give both --r1 and --r2")
                if not (1 <= args.r1 <= 10 and 1 <= args.r2 <= 10):
                    raise ValueError("join case study needs 1 <= r1, r2 <= 10")
                rows = [casestudies.join_row(args.r1, args.r2)]
            else:
                rows = casestudies.join_rows(args.r_max)
        else:
            if (args.g6 is None) == (args.family is None):
                raise ValueError("blowup: give exactly one of --g6 or --family")
            if args.g6 is not None:
                G = parse_graph6(args.g6)
            else:
                name, *params = args.family
                G = make_family(name, *(int(p) for p in params))
            rows = casestudies.blowup_rows(G, args.t_max)
    except Graph6Error as exc:
        print(f"case-study: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"case-study: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out, close = _open_out(args.out)
    try:
        _write_table(rows, list(rows[0]), args.format, out)
    finally:
        if close:
            out.close()
    mismatches = sum(1 for r in rows if r.get("match") is False)
    if mismatches:
        print(f"case-study {args.which}: {mismatches} prediction mismatches", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="energybounds", description="Energy lower bounds for graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--kmax", type=int, default=None, help="gamma depth (default: run to convergence)")
        p.add_argument("--tol", type=float, default=None, help="zero tolerance for non-integer input")

    a = sub.add_parser("analyze", help="full report for one graph")
    a.add_argument("--g6", default=None)
    a.add_argument("--family", nargs="+", metavar=("NAME", "ARG"), default=None)
    common(a, "json")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("survey", help="one CSV row per graph6 line")
    s.add_argument("file")
    s.add_argument("--strict", action="store_true", help="abort on the first malformed line")
    s.add_argument("--jobs", type=int, default=1)
    common(s, "csv")
    s.set_defaults(func=cmd_survey)

    c = sub.add_parser("case-study", help="tree | join | blowup tables")
    c.add_argument("which", choices=("tree", "join", "blowup"))
    c.add_argument("--n-min", type=int, default=4)
    c.add_argument("--n-max", type=int, default=40)
    c.add_argument("--r-max", type=int, default=10)
    c.add_argument("--r1", type=int, default=None)
    c.add_argument("--r2", type=int, default=None)
    c.add_argument("--g6", default=None)
    c.add_argument("--family", nargs="+", default=None)
    c.add_argument("--t-max", type=int, default=4)
    common(c, "csv")
    c.set_defaults(func=cmd_case_study)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "kmax", None) is not None and args.kmax < 0:
        print("--kmax must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        _zero_tol(args)
    except ValueError:
        print(f"SPECTRAL_ZERO_TOL is not a number: {os.environ['SPECTRAL_ZERO_TOL']!r}", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
