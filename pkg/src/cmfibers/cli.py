"""Command-line interface: fibers, primitive degrees, volcanoes, odd-degree CM, bounds on rational isogenies, self-checks."""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor

from .checks import SUITES, run_suite
from .classfields import abs_degree
from .errors import CmError, UsageError
from .fiberengine import cm_discriminant, expected_degree, x0_general, x1_scale
from .isogtools import k_rational_max, kwon_m, m_support
from .oddcm import odd_cm_report
from .primdeg import primitive_compile
from .volcano import VolcanoParams, build_volcano, export_graph


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _level(text: str) -> tuple[int, int]:
    try:
        M, N = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"level must look like M,N, got {text!r}") from None
    return M, N


def _label(F, dk: int, scale: int = 1) -> dict:
    return {
        "kind": "rational" if F.is_real else "ringclass",
        "conductor": F.conductor,
        "degree_over_q": scale * abs_degree(F, dk),
    }


def cmd_fiber(args) -> dict | str:
    disc = cm_discriminant(args.delta)
    M, N = args.level
    dk = disc.fundamental
    S = x0_general(args.delta, M, N)
    scale = x1_scale(N) if args.curve == "x1" else 1
    if args.format == "text":
        return repr(S)
    return {
        "delta": disc.value,
        "delta_k": dk,
        "conductor": disc.conductor,
        "level": [M, N],
        "curve": args.curve,
        "fiber": [{**_label(F, dk, scale), "multiplicity": m} for F, m in S],
        "degrees": [scale * d for d in S.degrees(dk)],
        "degree_sum": S.degree_sum(disc.conductor, dk),
        "degree_expected": expected_degree(M, N),
    }


def cmd_primitive(args) -> dict | str:
    disc = cm_discriminant(args.delta)
    M, N = args.level
    dk = disc.fundamental
    rep = primitive_compile(args.delta, M, N)
    scale = x1_scale(N) if args.curve == "x1" else 1
    degrees = [scale * d for d in rep.degrees]
    if args.format == "text":
        return " ".join(str(F) for F in rep.fields) + " | degrees " + " ".join(map(str, degrees))
    return {
        "delta": disc.value,
        "delta_k": dk,
        "conductor": disc.conductor,
        "level": [M, N],
        "curve": args.curve,
        "fields": [_label(F, dk, scale) for F in rep.fields],
        "degrees": degrees,
        "dreaded": rep.dreaded,
        "case": rep.case,
    }


def cmd_volcano(args) -> str:
    V = build_volcano(VolcanoParams(args.dk, args.ell, args.f0, args.depth))
    return export_graph(V, args.format).rstrip("\n")


def cmd_oddcm(args) -> dict | str:
    M, N = args.level
    rep = odd_cm_report(M, N, args.delta, args.curve)
    out = {
        "level": [M, N],
        "curve": args.curve,
        "delta": args.delta,
        "exists": rep.exists,
        "primitive_odd_degree": rep.primitive_odd_degree,
        "d_odd_cm": rep.d_odd_cm,
        "discriminants": rep.corresponding_discriminants,
    }
    if args.format == "text":
        return " ".join(f"{k}={v}" for k, v in out.items())
    return out


def cmd_kwon(args) -> dict | str:
    disc = cm_discriminant(args.delta)
    if args.ell is None:
        out = {"delta": disc.value, "m": {str(p): m for p, m in m_support(args.delta).items()}}
    else:
        M = k_rational_max(args.delta, args.ell)
        out = {
            "delta": disc.value,
            "ell": args.ell,
            "m": kwon_m(args.delta, args.ell),
            "k_rational_max": M if isinstance(M, int) else str(M),
        }
    if args.format == "text":
        return " ".join(f"{k}={v}" for k, v in out.items())
    return out


def cmd_check(args) -> tuple[str, int]:
    results = run_suite(args.suite)
    text = "\n".join(r.report() for r in results)
    return text, 0 if all(r.passed for r in results) else 3


def build_parser() -> _Parser:
    p = _Parser(prog="cmfibers", description=__doc__)
    p.add_argument("--batch", metavar="FILE", help="run one command per line of FILE ('-' for stdin)")
    p.add_argument("--jobs", type=int, default=4, help="worker threads for --batch")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def fmt(sp, choices=("json", "text"), default="json"):
        sp.add_argument("--format", choices=choices, default=default)

    def curve(sp):
        sp.add_argument("--curve", choices=("x0", "x1"), default="x0")

    s = sub.add_parser("fiber", help="delta-CM fiber of X_0(M,N) or X_1(M,N)")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--level", type=_level, required=True, metavar="M,N")
    curve(s)
    fmt(s)
    s.set_defaults(fn=cmd_fiber)

    s = sub.add_parser("primitive", help="primitive residue fields and degrees")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--level", type=_level, required=True, metavar="M,N")
    curve(s)
    fmt(s)
    s.set_defaults(fn=cmd_primitive)

    s = sub.add_parser("volcano", help="export an isogeny volcano")
    s.add_argument("--dk", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--f0", type=int, default=1)
    s.add_argument("--depth", type=int, default=2)
    fmt(s, ("dot", "json"), "dot")
    s.set_defaults(fn=cmd_volcano)

    s = sub.add_parser("oddcm", help="odd-degree CM points")
    s.add_argument("--level", type=_level, required=True, metavar="M,N")
    s.add_argument("--delta", type=int)
    curve(s)
    fmt(s)
    s.set_defaults(fn=cmd_oddcm)

    s = sub.add_parser("kwon", help="largest rational cyclic prime-power isogeny degrees")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--ell", type=int)
    fmt(s)
    s.set_defaults(fn=cmd_kwon)

    s = sub.add_parser("check", help="run self-check suites")
    s.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    s.set_defaults(fn=cmd_check)
    return p


def _render(value) -> str:
    return value if isinstance(value, str) else json.dumps(value)


def execute(argv: list[str]) -> tuple[str, int]:
    """Run one command; returns (output, exit code) without touching the process streams."""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        out = args.fn(args)
        if isinstance(out, tuple):
            return out
        return _render(out), 0
    except CmError as e:
        return f"error: {e}", e.exit_code


def _run_batch(path: str, jobs: int) -> int:
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    with stream:
        lines = [ln for ln in (s.strip() for s in stream) if ln and not ln.startswith("#")]
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        results = list(pool.map(lambda ln: execute(shlex.split(ln)), lines))
    worst = 0
    for out, code in results:
        print(out)
        worst = max(worst, code)
    return worst


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        head = build_parser().parse_known_args(argv)[0]
    except CmError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    if head.batch:
        if head.command is not None:
            print("error: --batch takes no subcommand", file=sys.stderr)
            return UsageError.exit_code
        try:
            return _run_batch(head.batch, head.jobs)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return UsageError.exit_code
    out, code = execute(argv)
    print(out, file=sys.stdout if code == 0 else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
