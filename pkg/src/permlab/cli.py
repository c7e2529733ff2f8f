"""``permlab`` command line front end.

Exit codes: 0 success, 1 verification counterexample or audit failure
(details on stdout as JSON), 2 usage or hypothesis error (message on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import analysis, decomp, injections
from .cache import table_build
from .enumeration import DEFAULT_BUDGET
from .errors import PermlabError
from .perm import Permutation

SCHEMA = 1
VERBS = ("count", "table", "decompose", "check", "inject", "extract", "swap",
         "verify", "wilf", "series", "ratio", "audit")


class Failure(Exception):
    """Raised by a command whose result should exit with status 1."""

    def __init__(self, payload: dict[str, Any]):
        super().__init__("verification failed")
        self.payload = payload


def _perm(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positions(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad position list {text!r}") from None


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--format", choices=("table", "json", "csv"), default=None)
    common.add_argument("--cache", default=os.environ.get("PERMLAB_CACHE", "./permlab-cache"),
                        help="count cache directory (default: $PERMLAB_CACHE or ./permlab-cache)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration node budget")
    common.add_argument("--timing", action="store_true", help="report elapsed time on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="permlab", description="Permutation pattern laboratory.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("count", parents=[common], help="count permutations by occurrences")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="print a single bucket")

    p = sub.add_parser("table", parents=[common], help="build (and cache) a count table")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--r-max", type=int, default=3)

    for verb in ("decompose", "check"):
        p = sub.add_parser(verb, parents=[common], help="structural hypotheses of a pattern")
        p.add_argument("perm", type=_perm)

    p = sub.add_parser("inject", parents=[common], help="apply the insertion map")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--positions", type=_positions, required=True, help="comma-separated insertion positions")
    p.add_argument("--perm", type=_perm, required=True, help="avoider to insert into")

    p = sub.add_parser("extract", parents=[common], help="invert the insertion map")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--perm", type=_perm, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("swap", parents=[common], help="apply the swap map")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--perm", type=_perm, required=True)

    p = sub.add_parser("verify", parents=[common], help="exhaustively verify an injection")
    p.add_argument("which", choices=("lower", "upper"))
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("wilf", parents=[common], help="effective Wilf classes")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--r-max", type=int, default=2)

    p = sub.add_parser("series", parents=[common], help="exact generating function expansion")
    p.add_argument("--id", choices=("1342",), default="1342")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--linear-coef", type=Fraction, default=None)
    p.add_argument("--check-n", type=int, default=8, help="brute-force comparison range")

    p = sub.add_parser("ratio", parents=[common], help="ratio table |S_{n,r}| / (n^r |S_n|)")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("audit", parents=[common], help="exact inequality audit")
    p.add_argument("--pattern", type=_perm, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--r-max", type=int, default=3)
    return parser


def _fmt(args) -> str:
    if args.json:
        return "json"
    return args.format or "table"


def _emit(args, payload: dict[str, Any], human: str | None = None, rows: list[dict] | None = None) -> None:
    fmt = _fmt(args)
    if fmt == "json" or (fmt == "table" and human is None) or (fmt == "csv" and rows is None):
        print(json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(human)


def _source(args) -> analysis.CountSource:
    return analysis.CountSource(args.cache, threads=args.threads, budget=args.budget)


def cmd_count(args) -> None:
    table = table_build(args.pattern, args.n, args.r if args.r is not None else 3, args.cache,
                        n_min=args.n, threads=args.threads, budget=args.budget)
    row = table.rows[args.n]
    if args.r is not None:
        _emit(args, {"q": str(args.pattern), "n": args.n, "r": args.r, "count": str(row[args.r])},
              human=str(row[args.r]),
              rows=[{"n": args.n, "r": args.r, "count": row[args.r]}])
        return
    rows = [{"n": args.n, "r": r, "count": row[r]} for r in range(row.r_cap + 1)]
    rows.append({"n": args.n, "r": "overflow", "count": row.overflow})
    human = "\n".join(f"r={d['r']}: {d['count']}" for d in rows)
    _emit(args, {"q": str(args.pattern), "n": args.n, "counts": {str(d["r"]): str(d["count"]) for d in rows}},
          human=human, rows=rows)


def cmd_table(args) -> None:
    table = table_build(args.pattern, args.n_max, args.r_max, args.cache,
                        threads=args.threads, budget=args.budget)
    if _fmt(args) == "csv":
        sys.stdout.write(table.to_csv())
        return
    header = "n  " + "  ".join(f"r={r}" for r in range(args.r_max + 1)) + "  overflow"
    lines = [header]
    for n in sorted(table.rows):
        row = table.rows[n]
        lines.append(f"{n}  " + "  ".join(str(row[r]) for r in range(args.r_max + 1)) + f"  {row.overflow}")
    _emit(args, {"table": table.to_dict()}, human="\n".join(lines))


def cmd_decompose(args) -> None:
    p = args.perm
    if len(p) == 0:
        raise ValueError("cannot decompose the empty permutation")
    payload = {
        "perm": str(p),
        "sum_components": [str(c) for c in decomp.sum_components(p).parts],
        "skew_components": [str(c) for c in decomp.skew_components(p).parts],
        "is_separable": decomp.is_separable(p),
    }
    if len(p) >= 2:
        payload["report"] = decomp.check_hypotheses(p).to_dict()
    print(json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True))


def cmd_check(args) -> None:
    report = decomp.check_hypotheses(args.perm)
    print(json.dumps({"schema": SCHEMA, **report.to_dict()}, indent=2, sort_keys=True))


def cmd_inject(args) -> None:
    w = injections.inject_lower(args.pattern, args.positions, args.perm)
    _emit(args, {"q": str(args.pattern), "S": sorted(args.positions), "p": str(args.perm), "result": str(w)},
          human=str(w))


def cmd_extract(args) -> None:
    S, p = injections.extract_lower(args.pattern, args.perm, args.r)
    _emit(args, {"q": str(args.pattern), "w": str(args.perm), "S": list(S), "p": str(p)},
          human=f"S={','.join(map(str, S))} p={p}")


def cmd_swap(args) -> None:
    pos, result = injections.swap_upper(args.pattern, args.perm)
    _emit(args, {"q": str(args.pattern), "p": str(args.perm), "position": pos, "result": str(result)},
          human=f"{pos} {result}")


def cmd_verify(args) -> None:
    if args.which == "lower":
        report = injections.verify_lower(args.pattern, args.n, args.r)
    else:
        report = injections.verify_upper(args.pattern, args.n, args.r)
    payload = {"report": report.to_dict()}
    if not report.passed:
        raise Failure(payload)
    bound = report.bound
    human = (f"verify {args.which} q={args.pattern} n={args.n} r={args.r}: PASS "
             f"(domain {report.domain_size}; {bound.get('lhs', '?')} vs {bound.get('rhs', '?')})")
    _emit(args, payload, human=human)


def cmd_wilf(args) -> None:
    part = analysis.wilf_partition(args.length, args.n_max, args.r_max, _source(args))
    human = "\n".join(f"{i + 1}: " + " ".join(map(str, block)) for i, block in enumerate(part.blocks))
    rows = [{"block": i + 1, "pattern": str(p)} for i, block in enumerate(part.blocks) for p in block]
    _emit(args, {"wilf": part.to_dict()}, human=human, rows=rows)


def cmd_series(args) -> None:
    source = _source(args)
    report = analysis.series_1342_report(min(args.check_n, args.terms), args.terms, source)
    if args.linear_coef is not None:
        expansions = {"requested": analysis.series_1342(args.terms, args.linear_coef).to_dict()}
    else:
        expansions = {
            "printed": analysis.series_1342(args.terms).to_dict(),
            "resolved": analysis.series_1342(args.terms, Fraction(report["resolved_linear_coefficient"])).to_dict(),
        }
    chosen = next(iter(expansions.values())) if args.linear_coef is not None else expansions["resolved"]
    rows = [{"n": i, "coefficient": c} for i, c in enumerate(chosen["coefficients"])]
    human = (f"linear coefficient {chosen['linear_coefficient']}: " + ", ".join(chosen["coefficients"])
             + f"\nprinted coefficient {report['printed_linear_coefficient']} gives constant term "
             f"{report['printed_constant_term']}; resolved coefficient {report['resolved_linear_coefficient']} "
             f"matches brute force: {report['resolved_matches_brute_force']}")
    _emit(args, {"id": args.id, "expansions": expansions, "discrepancy_report": report}, human=human, rows=rows)


def cmd_ratio(args) -> None:
    table = analysis.ratio_table(args.pattern, args.r, args.n_max, _source(args))
    rows = table.to_rows()
    human = "\n".join(f"n={d['n']}  {d['count']} / ({d['n']}^{d['r']} * {d['avoiders']}) = {d['rho']}"
                      f"  (~{d['rho_float_approx']})" for d in rows)
    human += f"\nmin {table.min}  max {table.max}"
    _emit(args, {"ratio": table.to_dict()}, human=human, rows=rows)


def cmd_audit(args) -> None:
    report = analysis.inequality_audit(args.pattern, args.n_max, args.r_max, _source(args))
    payload = {"audit": report.to_dict()}
    if not report.passed:
        raise Failure(payload)
    human = f"audit q={args.pattern} n<={args.n_max} r<={args.r_max}: {len(report.checks)} checks, all hold"
    rows = [{k: c[k] for k in ("family", "n", "r", "lhs", "rhs", "holds")} for c in report.checks]
    _emit(args, payload, human=human, rows=rows)


COMMANDS = {verb: globals()[f"cmd_{verb}"] for verb in VERBS}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        COMMANDS[args.verb](args)
        status = 0
    except Failure as exc:
        print(json.dumps({"schema": SCHEMA, **exc.payload}, indent=2, sort_keys=True))
        status = 1
    except (PermlabError, ValueError, IndexError, ArithmeticError) as exc:
        print(f"permlab: error: {exc}", file=sys.stderr)
        status = 2
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
