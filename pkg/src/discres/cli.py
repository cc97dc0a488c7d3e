"""discres command line: count, exponents, fit, verify, staircase.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 enumeration cap reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from fractions import Fraction

from discres import enumeration, exponents, verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("discres")

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    """Parse "p/q" or an integer; decimals are rejected."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational of the form p/q")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"{text!r} has a zero denominator")


def exact_decimal(text: str) -> Fraction:
    """Like ``rational`` but also takes a plain decimal such as 0.3, read exactly."""
    if re.match(r"^[+-]?\d*\.\d+$", text.strip()):
        return Fraction(text.strip())
    return rational(text)


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("DISCRES_WORKERS", "1")))
    except ValueError:
        return 1


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------------
# count

def campaign_tasks(kind: str, n: int, Q_list, param, coef) -> list[enumeration.CountTask]:
    """One CountTask per Q with the threshold implied by v (disc) or w (res)."""
    if len(Q_list) == 0:
        raise UsageError("give at least one --Q")
    if any(b <= a for a, b in zip(Q_list, Q_list[1:])):
        raise UsageError("--Q values must be strictly ascending")
    if coef <= 0:
        raise UsageError("--gamma/--rho must be positive")
    if kind == "disc":
        if n < 2:
            raise UsageError("discriminant counts need --n >= 2")
        if not 0 <= param <= n - 1:
            raise UsageError(f"the range of v is [0, n-1] = [0, {n - 1}], got v={param}")
        return [enumeration.CountTask("disc", n, Q, enumeration.discriminant_threshold(n, Q, param, coef))
                for Q in Q_list]
    if n < 1:
        raise UsageError("resultant counts need --n >= 1")
    if not 0 <= param <= n:
        raise UsageError(f"the range of w is [0, n] = [0, {n}], got w={param}")
    return [enumeration.CountTask("res", n, Q, enumeration.resultant_threshold(n, Q, param, coef))
            for Q in Q_list]


def cmd_count(args) -> int:
    param = args.v if args.kind == "disc" else args.w
    if param is None:
        raise UsageError("--v is required for disc" if args.kind == "disc" else "--w is required for res")
    coef = args.gamma if args.kind == "disc" else args.rho
    tasks = campaign_tasks(args.kind, args.n, list(args.Q or []), param, coef)
    records = []
    code = EXIT_OK
    for task in tasks:
        try:
            rec = enumeration.run_count(task, workers=args.workers, chunks=args.chunks,
                                        max_enumerated=args.max_enumerated)
        except enumeration.ResourceCapExceeded as exc:
            log.error("%s", exc)
            if exc.partial is not None:
                log.error("partial count %d over %d polynomials (chunk watermark %d)",
                          exc.partial.count, exc.partial.total, exc.watermark)
            code = EXIT_CAP
            break
        log.info("Q=%d count=%d total=%d elapsed=%.3fs", task.Q, rec.count, rec.total, rec.elapsed)
        records.append(rec)
    if args.format == "json":
        text = json.dumps([r.as_dict(args.timing) for r in records], indent=2) + "\n"
    else:
        text = _csv_text(enumeration.CSV_HEADER, [r.as_row(args.timing) for r in records])
    _emit(text, args.out)
    return code


# --------------------------------------------------------------------------
# exponents

def cmd_exponents(args) -> int:
    if args.kind == "disc":
        if args.v is None:
            raise UsageError("--v is required for disc")
        try:
            profile = exponents.discriminant_profile(args.n, args.v)
        except ValueError as exc:
            raise UsageError(str(exc))
    else:
        if args.w is None:
            raise UsageError("--w is required for res")
        try:
            profile = exponents.resultant_profile(args.n, args.w)
        except ValueError as exc:
            raise UsageError(str(exc))
    bad = [r for r in exponents.verify_profile(profile) if not r.ok]
    payload = profile.to_json()
    payload["constraints_ok"] = not bad
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if not bad else EXIT_FAIL


# --------------------------------------------------------------------------
# fit

def read_count_csv(path: str) -> list[tuple[int, int]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"Q", "count"} <= set(reader.fieldnames):
            raise UsageError(f"{path}: malformed CSV, need 'Q' and 'count' columns")
        try:
            points = [(int(row["Q"]), int(row["count"])) for row in reader]
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}: malformed CSV row ({exc})")
    if len(points) < 2:
        raise UsageError(f"{path}: need at least two rows to fit a slope")
    return points


def cmd_fit(args) -> int:
    points = read_count_csv(args.input)
    try:
        fit = verification.fit_exponent(points)
    except ValueError as exc:
        raise UsageError(str(exc))
    predicted = float(args.predicted)
    diff = fit.slope - predicted
    ok = abs(diff) <= args.tol
    payload = {
        "slope": float(f"{fit.slope:.12g}"),
        "intercept": float(f"{fit.intercept:.12g}"),
        "max_residual": float(f"{fit.max_residual:.12g}"),
        "points_used": fit.points_used,
        "predicted": str(args.predicted),
        "difference": float(f"{diff:.12g}"),
        "tolerance": args.tol,
        "verdict": "PASS" if ok else "FAIL",
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "nearcurve" and args.T is not None:
        if args.eps is None:
            raise UsageError("--eps is required with --T")
        try:
            N = verification.near_curve_count(args.T, args.eps)
        except ValueError as exc:
            raise UsageError(str(exc))
        _emit(f"{N}\n", args.out)
        return EXIT_OK

    if suite == "lemma3b":
        summary = verification.sweep_derivative_bounds(args.seed, args.samples).to_json()
    elif suite == "lemma2":
        summary = verification.sweep_root_proximity(args.seed, args.samples).to_json()
    elif suite == "lemma4":
        summary = verification.sweep_diagonal(args.seed, args.samples).to_json()
    else:
        mismatches = verification.near_curve_crosscheck()
        C, _ = verification.envelope_constant()
        anchor = verification.near_curve_count(2, Fraction(3, 10))
        failures = len(mismatches) + (C > 1000) + (anchor != 6)
        summary = {
            "suite": "nearcurve",
            "seed": args.seed,
            "anchor_N(2,3/10)": anchor,
            "float_mismatches": mismatches,
            "envelope_constant": float(f"{C:.12g}"),
            "envelope_limit": 1000,
            "failures": failures,
        }

    if args.format == "csv":
        keys = [k for k in summary if not isinstance(summary[k], list)]
        text = _csv_text(keys, [[summary[k] for k in keys]])
    else:
        text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return EXIT_OK if summary["failures"] == 0 else EXIT_FAIL


# --------------------------------------------------------------------------
# staircase

def cmd_staircase(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    rows = []
    for x in args.x or []:
        if x < 0:
            raise UsageError("x values must be non-negative")
        d, k = exponents.staircase_argmax(args.n, x)
        exponents.staircase(args.n, x)
        rows.append([str(x), str(d), k])
    if args.format == "json":
        text = json.dumps([{"x": a, "d": b, "k": c} for a, b, c in rows], indent=2) + "\n"
    else:
        text = _csv_text(["x", "d", "k"], rows)
    _emit(text, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discres", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_out(p, formats=("csv", "json"), default="csv"):
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("count", help="exhaustive counts for a list of heights Q")
    p.add_argument("--kind", choices=("disc", "res"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--Q", type=positive_int, action="append", help="height bound (repeatable)")
    p.add_argument("--v", type=rational)
    p.add_argument("--w", type=rational)
    p.add_argument("--gamma", type=rational, default=Fraction(1))
    p.add_argument("--rho", type=rational, default=Fraction(1))
    p.add_argument("--workers", type=positive_int, default=_default_workers())
    p.add_argument("--chunks", type=positive_int, help="number of chunks (default: workers)")
    p.add_argument("--max-enumerated", type=positive_int,
                   help="stop with exit code 3 once this many objects would be exceeded")
    p.add_argument("--timing", action="store_true",
                   help="fill elapsed_s (output is then not byte-reproducible)")
    common_out(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("exponents", help="closed-form optimal exponent profile")
    p.add_argument("--kind", choices=("disc", "res"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=rational)
    p.add_argument("--w", type=rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("fit", help="log-log slope of a count CSV against a prediction")
    p.add_argument("input")
    p.add_argument("--predicted", type=rational, required=True)
    p.add_argument("--tol", type=float, default=0.25)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="seeded property sweeps")
    p.add_argument("suite", choices=("lemma3b", "lemma2", "lemma4", "nearcurve"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=positive_int, default=1000)
    p.add_argument("--T", type=positive_int)
    p.add_argument("--eps", type=exact_decimal)
    common_out(p, default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("staircase", help="d_n(x) and its maximising degree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=rational, action="append")
    common_out(p)
    p.set_defaults(func=cmd_staircase)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"discres {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"discres {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
