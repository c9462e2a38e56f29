"""Command-line front end.

Exit codes: 0 success, 1 usage/parse/I-O error, 2 no recurrence found,
3 witness search exhausted, 4 expression is identically zero,
5 recurrence check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .exactmath import format_rational, parse_rational
from .logcalc import TheoremViolation, bound_positive_zeros, differentiate_n, eval_enclosure, format_expr, is_identically_zero
from .parser import parse_logpoly
from .precur import CATALOG, PRecurrence, Sequence, catalog, check, guess, unroll
from .refute import (
    DEFAULT_SEARCH_LIMIT,
    LogCandidate,
    PrimeWitness,
    SearchExhaustedError,
    refute,
    verify_witness,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_RECURRENCE = 2
EXIT_EXHAUSTED = 3
EXIT_ALL_ZERO = 4
EXIT_CHECK_FAILED = 5

DEFAULT_CATALOG_TERMS = 30


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _load_sequence(spec: str, terms: int | None) -> Sequence:
    if spec.startswith("catalog:"):
        parts = spec.split(":")
        name = parts[1]
        bits = int(parts[2]) if len(parts) > 2 else None
        if name == "log" and bits is None:
            raise UsageError("catalog:log needs a precision, e.g. catalog:log:400")
        return catalog(name, terms or DEFAULT_CATALOG_TERMS, bits)
    seq = Sequence.from_json(_load_json(spec))
    if terms is not None:
        if terms < 1 or terms > len(seq):
            raise UsageError(f"--terms must be between 1 and {len(seq)}")
        seq = Sequence(seq.terms[:terms])
    return seq


def _interval(iv) -> str:
    return f"[{format_rational(iv[0])}, {format_rational(iv[1])}]"


def _emit(args, obj, human: str) -> None:
    print(json.dumps(obj) if args.json else human)


def cmd_zero_bound(args) -> int:
    zb = bound_positive_zeros(parse_logpoly(args.expr))
    _emit(args, zb.to_json(), str(zb))
    return EXIT_ALL_ZERO if zb.bound is None else EXIT_OK


def cmd_diff(args) -> int:
    if args.times < 0:
        raise UsageError("--times must be nonnegative")
    out = format_expr(differentiate_n(parse_logpoly(args.expr), args.times))
    _emit(args, {"expr": out}, out)
    return EXIT_OK


def cmd_zero_test(args) -> int:
    verdict = "zero" if is_identically_zero(parse_logpoly(args.expr)) else "nonzero"
    _emit(args, {"result": verdict}, verdict)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.precision < 1:
        raise UsageError("--precision must be positive")
    iv = eval_enclosure(parse_logpoly(args.expr), parse_rational(args.at), args.precision)
    _emit(args, {"lo": format_rational(iv[0]), "hi": format_rational(iv[1])}, _interval(iv))
    return EXIT_OK


def cmd_guess(args) -> int:
    report = guess(_load_sequence(args.seq, args.terms), args.dmax, args.Dmax)
    # the report is JSON in both modes
    print(json.dumps(report.to_json(), indent=None if args.json else 2))
    return EXIT_OK if report.result else EXIT_NO_RECURRENCE


def cmd_unroll(args) -> int:
    rec = PRecurrence.from_json(_load_json(args.rec))
    init = [parse_rational(t) for t in args.init.split(",") if t.strip()] if args.init else []
    seq = unroll(rec, init, args.n)
    _emit(args, seq.to_json(), "\n".join(format_rational(t) for t in seq.terms))
    return EXIT_OK


def cmd_check(args) -> int:
    rec = PRecurrence.from_json(_load_json(args.rec))
    seq = Sequence.from_json(_load_json(args.seq))
    ok = check(rec, seq)
    _emit(args, {"result": ok}, "ok" if ok else "check failed")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_refute_log(args) -> int:
    cand = LogCandidate.from_json(_load_json(args.cand))
    try:
        w, iv = refute(cand, args.limit)
    except SearchExhaustedError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.out:
        w.save(args.out)
    cross = {"lo": format_rational(iv[0]), "hi": format_rational(iv[1])}
    print(json.dumps({"witness": w.to_json(), "cross_check": cross},
                     indent=None if args.json else 2))
    return EXIT_OK


def cmd_verify_witness(args) -> int:
    try:
        w = PrimeWitness.from_json(_load_json(args.witness))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{args.witness}: malformed witness ({e})") from None
    ok = verify_witness(w)
    _emit(args, {"result": ok}, "valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_demo(args) -> int:
    seq = catalog("log", 60, 400)
    report = guess(seq, 4, 4)
    print("log n, 60 terms at 400 bits, orders <= 4, degrees <= 4:")
    print(f"  tried {len(report.tried)} (d, D) cells; last system "
          f"{report.system_rows}x{report.system_cols}, rank {report.rank}")
    print("  result:", report.result or "no recurrence")
    cand = LogCandidate.make([[1], [-2], [1]])
    print("candidate: log(n) - 2*log(n+1) + log(n+2) = 0")
    w, iv = refute(cand, DEFAULT_SEARCH_LIMIT)
    print(json.dumps({"witness": w.to_json(),
                      "cross_check": {"lo": format_rational(iv[0]), "hi": format_rational(iv[1])}},
                     indent=2))
    print(f"  certificate valid: {verify_witness(w)}; value at n={w.n} lies in "
          f"[{float(iv[0]):.6g}, {float(iv[1]):.6g}]")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="holokit", description="Exact toolkit for holonomic sequences and log n.")
    ap.add_argument("--version", action="version", version=f"holokit {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zero-bound", parents=[common], help="bound positive zeros of an expression")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_zero_bound)

    p = sub.add_parser("diff", parents=[common], help="differentiate an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--times", type=int, default=1)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("zero-test", parents=[common], help="decide whether an expression is identically zero")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_zero_test)

    p = sub.add_parser("eval", parents=[common], help="rigorous enclosure of F(x)")
    p.add_argument("--expr", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--precision", type=int, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("guess", parents=[common], help="guess a P-recurrence")
    p.add_argument("--seq", required=True, help=f"JSON file or catalog:NAME[:bits], NAME in {', '.join(CATALOG)}")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--Dmax", type=int, required=True)
    p.add_argument("--terms", type=int)
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("unroll", parents=[common], help="compute terms from a recurrence")
    p.add_argument("--rec", required=True)
    p.add_argument("--init", default="", help="comma-separated initial values")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_unroll)

    p = sub.add_parser("check", parents=[common], help="check a recurrence against a sequence")
    p.add_argument("--rec", required=True)
    p.add_argument("--seq", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("refute-log", parents=[common], help="refute a rational recurrence for log n")
    p.add_argument("--cand", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_SEARCH_LIMIT)
    p.add_argument("--out", help="also write the witness JSON here")
    p.set_defaults(func=cmd_refute_log)

    p = sub.add_parser("verify-witness", parents=[common], help="re-verify a saved witness file")
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_verify_witness)

    p = sub.add_parser("demo", parents=[common], help="guessing failure and a refutation for log n")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ArithmeticError, KeyError, TypeError, TheoremViolation) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
