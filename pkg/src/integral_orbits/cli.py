"""Command line front end.

Exit codes: 0 success, 2 parse error, 3 computation error, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import BudgetExceeded, ComputationError, ParseError
from .heights import ExactLog
from .intersect import DEFAULT_SEED
from .parsing import parse_rational
from .problem import ProblemFile, load_problem
from .projective import PlaceSet
from .selfmap import DEFAULT_BIT_BUDGET
from .theorem import compute_cn, orbit_csv_rows, orbit_scan, rv_check
from .divisor import pullback

EXIT_OK, EXIT_PARSE, EXIT_COMPUTE, EXIT_BUDGET = 0, 2, 3, 4


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


def _kv_rows(data: dict) -> List[List[str]]:
    rows = [["key", "value"]]
    for k in sorted(data):
        v = data[k]
        rows.append([k, v if isinstance(v, str) else json.dumps(v, sort_keys=True)])
    return rows


def _table(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(fmt: str, data: dict, rows: Optional[List[List[str]]] = None) -> str:
    if fmt == "json":
        return _dump_json(data)
    rows = rows if rows is not None else _kv_rows(data)
    return _csv(rows) if fmt == "csv" else _table(rows)


def _n(args, prob: ProblemFile) -> int:
    return args.n if args.n is not None else prob.param("n", 1, int)


def _seed(args, prob: ProblemFile) -> int:
    return args.seed if args.seed is not None else prob.param("seed", DEFAULT_SEED, int)


def _places(args, prob: ProblemFile) -> PlaceSet:
    if args.places is not None:
        text = args.places.strip()
        return PlaceSet.parse(text if text.startswith("{") else "{" + text + "}")
    return prob.place_set if prob.places else PlaceSet(["inf"])


def cmd_pullback(args, prob: ProblemFile) -> str:
    n = _n(args, prob)
    D = prob.divisor
    Dn = pullback(prob.map, D, n, prob.basis.copy())
    data = {"n": n, "divisor": str(D), "pullback": Dn.to_json()}
    if args.format == "json":
        return _dump_json(data)
    rows = [["form", "degree", "multiplicity", "status"]]
    rows += [[str(c.form), str(c.form.degree), str(c.multiplicity), c.status] for c in Dn.components]
    if args.format == "csv":
        return _csv(rows)
    return f"(f^{n})^* ({D}) = {Dn}\n\n" + _table(rows)


def cmd_cn(args, prob: ProblemFile) -> str:
    f = prob.map.certify()
    rep = compute_cn(f, prob.divisor, _n(args, prob), prob.basis.copy(), seed=_seed(args, prob))
    data = rep.to_json()
    out = _emit(args.format, data)
    if args.format == "table" and rep.inconclusive:
        out += "\n\nc_n <= 0: the theorem gives no conclusion for this n"
    return out


def cmd_orbit_scan(args, prob: ProblemFile) -> str:
    f = prob.map.certify()
    n = _n(args, prob)
    eps = parse_rational(args.epsilon) if args.epsilon is not None else prob.param("epsilon", Fraction(1, 32), Fraction)
    kmax = args.kmax if args.kmax is not None else prob.param("kmax", 5, int)
    budget = args.bit_budget if args.bit_budget is not None else prob.param("bit_budget", DEFAULT_BIT_BUDGET, int)
    tol = prob.param("integral_tol", Fraction(1, 10), Fraction)
    cn = compute_cn(f, prob.divisor, n, prob.basis.copy(), seed=_seed(args, prob))
    scan = orbit_scan(f, prob.divisor, prob.point, _places(args, prob), n, eps, kmax,
                      cn=cn, bit_budget=budget, integral_tol=tol)
    data = scan.to_json()
    data["n"] = n
    if args.format == "json":
        return _dump_json(data)
    rows = orbit_csv_rows(scan)
    if args.format == "csv":
        return _csv(rows)
    for row in rows[1:]:
        if len(row[1]) > 60:
            row[1] = row[1][:28] + " ... " + row[1][-27:]
    s = data["summary"]
    return (
        f"c_{n} = {data['c_n']}, epsilon = {data['epsilon']}, threshold = {data['threshold']}, S = {data['places']}\n\n"
        + _table(rows)
        + f"\n\nflagged: {s['flagged']}\nintegral candidates: {s['integral_candidates']}"
    )


def cmd_rv_check(args, prob: ProblemFile) -> str:
    bound = args.bound if args.bound is not None else prob.param("height_bound", 50, int)
    eps = parse_rational(args.epsilon) if args.epsilon is not None else prob.param("epsilon", Fraction(1), Fraction)
    slack = prob.param("slack", None, Fraction)
    D = prob.divisor
    rep = rv_check(D.forms, _places(args, prob), eps, bound, D.ring.dim,
                   ExactLog(slack) if slack is not None else None)
    return _emit(args.format, rep.to_json())


COMMANDS = {
    "pullback": cmd_pullback,
    "cn": cmd_cn,
    "orbit-scan": cmd_orbit_scan,
    "rv-check": cmd_rv_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="integral-orbits", description="Integral points in forward orbits on P^N over Q.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--file", required=True, help="problem file")
        p.add_argument("--n", type=int, help="pullback depth")
        p.add_argument("--epsilon", help="rational epsilon, e.g. 1/32")
        p.add_argument("--kmax", type=int, help="last orbit index")
        p.add_argument("--places", help="place set, e.g. '{inf, 2, 3}'")
        p.add_argument("--seed", type=int)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--bit-budget", type=int, dest="bit_budget")
        if name == "rv-check":
            p.add_argument("--bound", type=int, help="height bound for the enumeration")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prob = load_problem(args.file)
        out = COMMANDS[args.command](args, prob)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ComputationError, ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
