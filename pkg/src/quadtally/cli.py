"""Command-line surface: field reports, coefficient dumps, constants,
asymptotic verification, and the oracle check suites.

Exit codes: 0 pass, 1 check failure, 2 out-of-scope input, 3 capacity.
All output is JSON or RFC-4180 CSV with a header row; CSV is the plotting
format, no plotting dependency lives here.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import IO, Optional

import numpy as np

from . import analytic, localdata, oracle, quadfield, series
from .errors import CapacityExceeded, OutOfScope, QuadtallyError

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_OUT_OF_SCOPE = 2
EXIT_CAPACITY = 3

ORACLE_LOCAL_TABLE_FIELDS = (-7, -11, -1, -2, -3, 5, 17)
ORACLE_COEFFICIENT_FIELDS = (-7, -11, -23, -1, -2, -3, 5, 13, 17)


def _open_out(path: Optional[str]):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_field_report(args) -> int:
    field = quadfield.validate_field(args.D)
    table = []
    for p in quadfield._sieve_primes(100):
        sp = quadfield.splitting_type(field, p)
        table.append({"p": p, "type": sp.type.value, "ideal_norms": list(sp.ideal_norms)})
    payload = {"field": field.to_json_dict(), "splitting_p_le_100": table}
    out = _open_out(args.out)
    try:
        if args.format == "csv":
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(["p", "type", "ideal_norms"])
            for row in table:
                writer.writerow([row["p"], row["type"], " ".join(map(str, row["ideal_norms"]))])
        else:
            json.dump(payload, out, indent=1)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_PASS


def cmd_coeffs(args) -> int:
    field = quadfield.validate_field(args.D)
    unsigned_arr, signed_arr = series.euler_coefficient_pair(field, args.N)
    out = _open_out(args.out)
    try:
        if args.format == "json":
            out.write(unsigned_arr.to_json_header() + "\n")
            json.dump(
                {
                    "a0": unsigned_arr.a[1:].tolist(),
                    "aminus": signed_arr.a[1:].tolist(),
                },
                out,
            )
            out.write("\n")
        else:
            series.write_csv(out, unsigned_arr, signed_arr)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_PASS


def cmd_constant(args) -> int:
    field = quadfield.validate_field(args.D)
    report = analytic.asymptotic_constant(field)
    out = _open_out(args.out)
    try:
        out.write(report.to_json() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_PASS


def cmd_verify(args) -> int:
    field = quadfield.validate_field(args.D)
    report = analytic.asymptotic_constant(field)
    r = report.C * field.d_K**2  # conductor-norm-scale residue
    even = series.even_character_counts(field, args.X)
    checkpoints = sorted({max(1, args.X >> j) for j in range(11)})
    rows = []
    for x in checkpoints:
        a_x = series.partial_sum(even, x) - 1  # the trivial character is not an extension
        expected = r * x
        ratio = a_x / expected if expected > 0 else float("nan")
        rows.append((x, a_x, expected, ratio))
    out = _open_out(args.out)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "count", "r_times_x", "ratio"])
        for x, a_x, expected, ratio in rows:
            writer.writerow([x, a_x, f"{expected:.3f}", f"{ratio:.6f}"])
        final_x, final_count, _, final_ratio = rows[-1]
        if final_count < 100:
            out.write(f"INSUFFICIENT x={final_x} count={final_count}\n")
            return EXIT_CHECK_FAILURE
        verdict = "PASS" if abs(final_ratio - 1.0) <= args.tol else "FAIL"
        out.write(
            f"{verdict} x={final_x} ratio={final_ratio:.6f} tol={args.tol}\n"
        )
        return EXIT_PASS if verdict == "PASS" else EXIT_CHECK_FAILURE
    finally:
        if out is not sys.stdout:
            out.close()


def _oracle_local_tables(out: IO[str], fields: list[int]) -> bool:
    ok = True
    for D in fields:
        field = quadfield.validate_field(D)
        report = oracle.verify_local_tables(field)
        for check in report.checks:
            out.write(json.dumps(check) + "\n")
        ok = ok and report.passed
    return ok


def _oracle_coefficients(out: IO[str], fields: list[int], N: int) -> bool:
    ok = True
    for D in fields:
        field = quadfield.validate_field(D)
        eu, es = series.euler_coefficient_pair(field, N)
        du, ds = oracle.ideal_dfs_pair(field, N)
        match = bool(np.array_equal(eu.a, du.a) and np.array_equal(es.a, ds.a))
        out.write(
            json.dumps(
                {
                    "check": f"coefficients_N={N}",
                    "field_D": D,
                    "status": "PASS" if match else "FAIL",
                    "expected": "dfs arrays",
                    "actual": "equal" if match else "mismatch",
                }
            )
            + "\n"
        )
        ok = ok and match
    return ok


def _oracle_rational(out: IO[str], X: int) -> bool:
    count = oracle.rational_baseline(X)
    density = count / ((6 / np.pi**2) * X)
    ok = bool(0.99 <= density <= 1.01)
    out.write(
        json.dumps(
            {
                "check": f"rational_baseline_X={X}",
                "field_D": 0,
                "status": "PASS" if ok else "FAIL",
                "expected": "count/(6 X/pi^2) in [0.99, 1.01]",
                "actual": f"{density:.6f} (count={count})",
            }
        )
        + "\n"
    )
    return ok


def cmd_oracle(args) -> int:
    fields = args.fields or list(
        ORACLE_COEFFICIENT_FIELDS if args.scope == "coefficients" else ORACLE_LOCAL_TABLE_FIELDS
    )
    out = _open_out(args.out)
    try:
        ok = True
        if args.scope in ("local-tables", "all"):
            ok = _oracle_local_tables(out, fields) and ok
        if args.scope in ("coefficients", "all"):
            ok = _oracle_coefficients(out, fields, args.N) and ok
        if args.scope in ("rational", "all"):
            ok = _oracle_rational(out, args.X) and ok
        return EXIT_PASS if ok else EXIT_CHECK_FAILURE
    finally:
        if out is not sys.stdout:
            out.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadtally",
        description="Count quadratic extensions of quadratic fields with odd class number.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_field=True):
        if with_field:
            p.add_argument("-D", type=int, required=True, help="squarefree radicand of the base field")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--workers", type=int, default=1, help="reserved; results are worker-count independent")

    p = sub.add_parser("field-report", help="field invariants plus splitting table for p <= 100")
    add_common(p)
    p.set_defaults(func=cmd_field_report)

    p = sub.add_parser("coeffs", help="dump a0/aminus coefficients up to conductor norm N")
    add_common(p)
    p.add_argument("-N", "--N", dest="N", type=int, required=True)
    p.set_defaults(func=cmd_coeffs, format="csv")

    p = sub.add_parser("constant", help="the asymptotic constant C with all sub-factors")
    add_common(p)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="compare extension counts against C at geometric checkpoints")
    add_common(p)
    p.add_argument("-X", "--X", dest="X", type=int, required=True)
    p.add_argument("--tol", type=float, default=0.05)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="run brute-force cross-check suites")
    add_common(p, with_field=False)
    p.add_argument("--scope", choices=("local-tables", "coefficients", "rational", "all"), default="all")
    p.add_argument("-D", dest="fields", type=int, action="append", help="restrict to these fields (repeatable)")
    p.add_argument("-N", "--N", dest="N", type=int, default=10000)
    p.add_argument("-X", "--X", dest="X", type=int, default=10**6)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OutOfScope as exc:
        print(f"out of scope: {exc}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    except CapacityExceeded as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except QuadtallyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
