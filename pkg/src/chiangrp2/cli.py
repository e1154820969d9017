"""Command line front end: ``chiangrp2 {verify,sample,figure,reduce,orbits}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import emit, lagrangian, verify
from .projective_core import canonicalize

DEFAULT_LEVEL = -1 / 6


def _level(s: str) -> float:
    if "/" in s:
        num, den = s.split("/")
        return float(num) / float(den)
    return float(s)


def _point(s: str):
    try:
        coords = [complex(c.strip().replace(" ", "").replace("i", "j")) for c in s.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {s!r}: {exc}") from exc
    if len(coords) != 3:
        raise argparse.ArgumentTypeError("point needs three coordinates z0,z1,z2")
    return canonicalize(coords)


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.seed, args.samples, None, args.level, args.tol)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.check_id:<30} residual={r.max_residual:.3e} "
              f"tol={r.tolerance:.1e} [{r.details['comparison']}]")
    text = verify.dumps(verify.suite_document(reports, args.seed, args.samples))
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 0 if failed == 0 else 1


def cmd_sample(args) -> int:
    path = emit.emit_samples(args.what, args.n, args.seed, args.out, args.level)
    print(path)
    return 0


def cmd_figure(args) -> int:
    svg, csv_path = emit.emit_figure(emit.FigureSpec(args.kind, args.level), args.out)
    print(svg)
    print(csv_path)
    return 0


def cmd_reduce(args) -> int:
    print(emit.reduce_csv(args.input, args.level, args.out))
    return 0


def cmd_orbits(args) -> int:
    rep = lagrangian.orbit_intersections(args.lagrangian, args.action, args.point, args.tol)
    doc = {
        "lagrangian": args.lagrangian,
        "action": rep.action.value,
        "base": [[z.real, z.imag] for z in rep.base.rep],
        "count": rep.count,
        "isolated": rep.isolated,
        "solutions": [[s.X, s.Y, s.Z] for s in rep.solutions],
        "residuals": rep.residuals,
        "thetas": rep.thetas,
    }
    print(json.dumps(doc, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chiangrp2",
                                 description="Numerical checks for a Lagrangian RP^2 in CP^2.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-9,
                   help="projective-equality tolerance for the counting checks")
    p.add_argument("--level", type=_level, default=DEFAULT_LEVEL)
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="write sample points as CSV")
    p.add_argument("what", choices=emit.SAMPLE_KINDS)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--level", type=_level, default=DEFAULT_LEVEL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("figure", help="write an SVG figure and its CSV companion")
    p.add_argument("kind", choices=emit.FIGURE_KINDS)
    p.add_argument("--level", type=_level, default=DEFAULT_LEVEL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("reduce", help="project CP^2 samples on a level to CP^1")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--level", type=_level, default=DEFAULT_LEVEL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("orbits", help="count intersections of a Lagrangian with a circle orbit")
    p.add_argument("--lagrangian", choices=["chiang", "rp2"], required=True)
    p.add_argument("--action", choices=["1", "2", "tilted"], required=True)
    p.add_argument("--point", type=_point, required=True, help='e.g. "0.5-0.3j,0.4j,0.5+0.3j"')
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_orbits)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
