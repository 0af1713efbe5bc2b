"""``dlab`` command line.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .autos import conjugate_normal_form, word_apply, word_from_json, word_reduce, word_to_dict
from .checks import REGISTRY, run_check
from .functions import parse_expression
from .nevanlinna import CharacteristicEstimate, RSchedule, characteristic_table, jacobian_xz
from .poly import ComplexPoly, format_complex, parse_complex
from .surface import Danielewski, SurfacePoint, contains

__all__ = ["main", "parse_expression"]


class UsageError(Exception):
    pass


def _surface(text: str) -> Danielewski:
    return Danielewski(ComplexPoly.parse(text))


def _point(text: str) -> SurfacePoint:
    parts = [t for t in text.split(",")]
    if len(parts) != 3:
        raise UsageError("--point needs three comma-separated complex numbers x,y,z")
    return SurfacePoint(*(parse_complex(t) for t in parts))


def _point_dict(P: SurfacePoint) -> dict:
    return {k: format_complex(complex(v)) for k, v in zip("xyz", P)}


def _read_word(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return word_from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# -- subcommands ---------------------------------------------------------------

def cmd_tchar(args) -> int:
    if args.samples < 100:
        raise UsageError("--samples must be at least 100")
    S = _surface(args.poly)
    F = parse_expression(args.expr)
    sched = RSchedule(args.r_start, args.factor, args.steps)
    rows = characteristic_table(S, F, sched, args.samples, args.seed, args.workers)
    if args.format == "csv":
        print(CharacteristicEstimate.CSV_HEADER)
        for e in rows:
            print(e.csv_row())
    else:
        _emit([e.to_dict() for e in rows])
    return 0


def cmd_check(args) -> int:
    config = json.loads(args.config) if args.config else {}
    if not isinstance(config, dict):
        raise UsageError("--config must be a JSON object")
    if args.workers is not None:
        config["workers"] = args.workers
    if args.all:
        reports = [run_check(n, config, args.seed) for n in REGISTRY]
        _emit([r.to_dict() for r in reports])
    else:
        if args.name not in REGISTRY:
            raise UsageError(f"unknown check {args.name!r}; known: {', '.join(REGISTRY)}")
        reports = [run_check(args.name, config, args.seed)]
        _emit(reports[0].to_dict())
    return 0 if all(r.passed for r in reports) else 1


def cmd_word(args) -> int:
    W = _read_word(args.file)
    if args.action == "reduce":
        R = word_reduce(W)
        _emit(word_to_dict(R))
    elif args.action == "normalform":
        N, C = conjugate_normal_form(W)
        _emit({"normal_form": word_to_dict(N), "conjugator": word_to_dict(C)})
    else:
        if not args.point:
            raise UsageError("word apply needs --point")
        S = _surface(args.poly)
        P = _point(args.point)
        if not contains(S, P, 1e-9):
            raise UsageError("point off surface")
        _emit(_point_dict(word_apply(S, W, P)))
    return 0


def cmd_jacobian(args) -> int:
    S = _surface(args.poly)
    W = _read_word(args.file)
    P = _point(args.point)
    if not contains(S, P, 1e-9):
        raise UsageError("point off surface")
    J = jacobian_xz(S, W, P, args.h)
    _emit({"jacobian": format_complex(J), "abs": abs(J)})
    return 0


# -- parser ----------------------------------------------------------------------

def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dlab", description="Danielewski surfaces, overshear words, growth estimates")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tchar", help="characteristic estimates over a geometric r grid")
    t.add_argument("--poly", required=True, help="ascending coefficients, e.g. -1,0,0,0,1")
    t.add_argument("--expr", required=True, help="function of x, y, z")
    t.add_argument("--r-start", type=_positive(float), default=100.0)
    t.add_argument("--factor", type=float, default=10.0)
    t.add_argument("--steps", type=_positive(int), default=5)
    t.add_argument("--samples", type=int, default=200_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--workers", type=_positive(int), default=1)
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.set_defaults(func=cmd_tchar)

    c = sub.add_parser("check", help="run verification checks")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--name", help="one of: " + ", ".join(REGISTRY))
    g.add_argument("--all", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--config", help="JSON object overriding check parameters")
    c.add_argument("--workers", type=_positive(int))
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("word", help="word JSON tools")
    w.add_argument("action", choices=("apply", "reduce", "normalform"))
    w.add_argument("--file", required=True)
    w.add_argument("--poly", default="-1,0,0,0,1")
    w.add_argument("--point", help="x,y,z (for apply)")
    w.set_defaults(func=cmd_word)

    j = sub.add_parser("jacobian", help="chart Jacobian of a word at a point")
    j.add_argument("--poly", required=True)
    j.add_argument("--file", required=True)
    j.add_argument("--point", required=True)
    j.add_argument("--h", type=_positive(float), default=1e-5)
    j.set_defaults(func=cmd_jacobian)
    return ap


_VALUE_FLAGS = ("--poly", "--expr", "--point")


def _bind_values(argv):
    """Attach values such as ``-1,0,1`` to their flag so argparse does not read them as options."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = ap.parse_args(_bind_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with np.errstate(all="ignore"):
            return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"dlab: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
