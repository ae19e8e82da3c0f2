"""Command line entry point: ``knottheta <subcommand> ...``.

Exit status is 0 on success, 1 when a computation fails and 2 for usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .laurent import LaurentPoly2, parse_poly
from .pd import ClosedPD, PDSyntaxError, PDValidationError, connected_sum, mirror, parse_pd, serialize_pd, writhe
from .render import render_theta
from .satellite import wd_layout, whitehead_double
from .table import default_table, load_table, lookup
from .theta import DEFAULT_F2_DIAGONAL, ThetaResult, theta
from .traffic import alexander, solve_traffic
from .upright import to_upright
from .verify import CACHE_ENV, CHECKS, run_batch, summary_json

__all__ = ["main", "resolve_pd", "theta_json"]


class UsageError(Exception):
    pass


def resolve_pd(source: str) -> tuple[str, ClosedPD]:
    """``(name, pd)`` from PD text, ``@file`` or a bundled knot name."""
    if source.startswith("@"):
        text = Path(source[1:]).read_text(encoding="utf-8").strip()
        return Path(source[1:]).stem, parse_pd(text)
    stripped = source.strip()
    if stripped.startswith("[") or stripped.startswith("PD"):
        return "", parse_pd(stripped)
    try:
        rec = lookup(stripped)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return rec.name, rec.pd


def _convention(value: str | None) -> bool:
    if value is None:
        return DEFAULT_F2_DIAGONAL
    key, _, setting = value.partition("=")
    if key != "f2-diagonal" or setting not in ("on", "off"):
        raise UsageError(f"bad convention {value!r}; expected f2-diagonal=on or f2-diagonal=off")
    return setting == "on"


def theta_json(name: str, res: ThetaResult) -> dict:
    terms = [[e1, e2, c.numerator, c.denominator] for (e1, e2), c in res.theta.items()]
    return {
        "name": name,
        "pd_hash": res.pd_hash,
        "alexander": str(res.alexander),
        "theta": terms,
        "n_factor": str(res.n_factor),
        "convention": {"f2_diagonal": res.f2_diagonal},
    }


def _theta_from_json(obj: dict) -> tuple[LaurentPoly2, object]:
    th = LaurentPoly2({(e1, e2): Fraction(n, d) for e1, e2, n, d in obj["theta"]})
    return th, parse_poly(obj["alexander"], nvars=1)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _rotations(value: str | None, n_edges: int):
    if value is None:
        return None
    try:
        vals = [int(v) for v in value.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise UsageError(f"--rotations: {exc}") from exc
    if len(vals) != n_edges:
        raise UsageError(f"--rotations needs {n_edges} integers, got {len(vals)}")
    return vals


# -- subcommands ------------------------------------------------------------------


def cmd_parse(args) -> int:
    name, pd = resolve_pd(args.pd)
    out = serialize_pd(pd, args.format)
    _emit(args, {"name": name, "pd": out, "n": pd.n, "writhe": writhe(pd),
                 "signs": list(pd.signs()), "pd_hash": pd.digest()}, out)
    return 0


def cmd_alexander(args) -> int:
    name, pd = resolve_pd(args.pd)
    delta = alexander(to_upright(pd, args.cut))
    _emit(args, {"name": name, "pd_hash": pd.digest(), "alexander": str(delta)}, str(delta))
    return 0


def _upright(args, pd):
    d = to_upright(pd, getattr(args, "cut", 1))
    rot = _rotations(getattr(args, "rotations", None), d.n_edges)
    return d.with_rotations(rot) if rot is not None else d


def cmd_theta(args) -> int:
    name, pd = resolve_pd(args.pd)
    diag = _convention(args.convention)
    res = theta(_upright(args, pd), diag)
    payload = theta_json(name, res)
    text = (f"alexander: {res.alexander}\ntheta: {res.theta}\n"
            f"n_factor: {res.n_factor}\nf2_diagonal: {'on' if diag else 'off'}\n")
    _emit(args, payload, text)
    return 0


def cmd_wd(args) -> int:
    name, pd = resolve_pd(args.pd)
    clasp = 1 if args.clasp == "+" else -1
    out = whitehead_double(pd, clasp, args.twists)
    lay = wd_layout(pd, args.twists)
    text = serialize_pd(out, args.format)
    _emit(args, {"name": name, "pd": text, "n": out.n, "N": out.n_edges,
                 "writhe": lay["writhe"], "clasp_center": lay["clasp_center"],
                 "clasp": args.clasp, "t": args.twists}, text)
    return 0


def cmd_consum(args) -> int:
    if len(args.pd) != 2:
        raise UsageError("consum needs exactly two --pd arguments")
    (_, a), (_, b) = resolve_pd(args.pd[0]), resolve_pd(args.pd[1])
    out = connected_sum(a, b)
    text = serialize_pd(out, args.format)
    _emit(args, {"pd": text, "n": out.n, "writhe": writhe(out)}, text)
    return 0


def cmd_mirror(args) -> int:
    name, pd = resolve_pd(args.pd)
    out = mirror(pd)
    text = serialize_pd(out, args.format)
    _emit(args, {"name": name, "pd": text, "n": out.n, "writhe": writhe(out)}, text)
    return 0


def cmd_dump_upright(args) -> int:
    _, pd = resolve_pd(args.pd)
    d = _upright(args, pd)
    _emit(args, {"crossings": [list(c) for c in d.crossings], "rotations": list(d.rotations)},
          d.dump())
    return 0


def cmd_dump_traffic(args) -> int:
    _, pd = resolve_pd(args.pd)
    G = solve_traffic(to_upright(pd, args.cut))
    payload = {"denominator": str(G.delta),
               "entries": [[a + 1, b + 1, str(p)] for a, row in enumerate(G.P)
                           for b, p in enumerate(row) if not p.is_zero()]}
    _emit(args, payload, G.dump())
    return 0


def cmd_verify(args) -> int:
    table = load_table(args.table) if args.table else default_table(args.extended)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECKS:
            raise UsageError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
    twists = [int(t) for t in args.twists.split(",")]
    out = run_batch(table, checks, args.max_crossings, args.jobs, args.cache,
                    _convention(args.convention), twists, args.partner)
    summary = out["summary"]
    if args.summary:
        Path(args.summary).write_text(summary_json(summary), encoding="utf-8")
    if args.json:
        sys.stdout.write(summary_json(summary))
    else:
        for check, counts in summary["counts"].items():
            parts = ", ".join(f"{k} {v}" for k, v in counts.items())
            sys.stdout.write(f"{check}: {parts}\n")
        sys.stdout.write(f"computed {out['computed']}, cached {out['cached']}\n")
        for r in summary["records"]:
            if r["status"] in ("fail", "error"):
                sys.stdout.write(f"  {r['status']}: {r['name']} {r['check']} {r['witness']}\n")
    bad = any(r["status"] in ("fail", "error") for r in summary["records"])
    return 1 if bad else 0


def cmd_render(args) -> int:
    fmt = args.format or ("ppm" if args.out.endswith(".ppm") else "svg")
    if args.input:
        obj = json.loads(Path(args.input).read_text(encoding="utf-8"))
        th, delta = _theta_from_json(obj)
        data = render_theta(th, fmt, alexander=delta)
    elif args.pd:
        _, pd = resolve_pd(args.pd)
        data = render_theta(theta(to_upright(pd), _convention(args.convention)), fmt)
    else:
        raise UsageError("render needs --in or --pd")
    Path(args.out).write_bytes(data)
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--convention", metavar="f2-diagonal={on,off}",
                        help="include (on, default) or skip diagonal pairs in the F2 sum")

    pd_arg = argparse.ArgumentParser(add_help=False)
    pd_arg.add_argument("--pd", required=True, help="PD text, @file or knot name such as 3_1")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("bracket", "functional"), default="bracket")

    cut = argparse.ArgumentParser(add_help=False)
    cut.add_argument("--cut", type=int, default=1, help="edge on which the long knot is cut")

    p = argparse.ArgumentParser(prog="knottheta", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("parse", parents=[common, pd_arg, fmt]).set_defaults(func=cmd_parse)
    sub.add_parser("alexander", parents=[common, pd_arg, cut]).set_defaults(func=cmd_alexander)
    s = sub.add_parser("theta", parents=[common, pd_arg, cut])
    s.add_argument("--rotations", help="comma separated rotation numbers overriding the computed ones")
    s.set_defaults(func=cmd_theta)
    s = sub.add_parser("wd", parents=[common, pd_arg, fmt])
    s.add_argument("--clasp", choices=("+", "-"), required=True)
    s.add_argument("--twists", type=int, default=0)
    s.set_defaults(func=cmd_wd)
    s = sub.add_parser("consum", parents=[common, fmt])
    s.add_argument("--pd", action="append", required=True, help="give twice")
    s.set_defaults(func=cmd_consum)
    sub.add_parser("mirror", parents=[common, pd_arg, fmt]).set_defaults(func=cmd_mirror)
    s = sub.add_parser("dump-upright", parents=[common, pd_arg, cut])
    s.add_argument("--rotations")
    s.set_defaults(func=cmd_dump_upright)
    sub.add_parser("dump-traffic", parents=[common, pd_arg, cut]).set_defaults(func=cmd_dump_traffic)
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--table", help="table file (default: bundled table)")
    s.add_argument("--extended", action="store_true", help="include the 11-12 crossing table")
    s.add_argument("--checks", default="flower")
    s.add_argument("--max-crossings", type=int, default=10)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--cache", default=os.environ.get(CACHE_ENV), help=f"cache directory (env {CACHE_ENV})")
    s.add_argument("--twists", default="-2,-1,0,1,2", help="t values for alexander-wd")
    s.add_argument("--partner", default="3_1", help="second summand for additivity")
    s.add_argument("--summary", help="also write the canonical JSON summary here")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("render", parents=[common])
    s.add_argument("--in", dest="input", help="theta JSON produced by `theta --json`")
    s.add_argument("--pd", help="compute theta of this diagram instead")
    s.add_argument("--out", required=True)
    s.add_argument("--format", choices=("svg", "ppm"))
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, PDSyntaxError, PDValidationError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"computation failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
