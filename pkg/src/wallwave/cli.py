"""Command-line front end.

Every command prints JSON on stdout (``elem`` prints the canonical text unless
``--json`` is given) and ``render`` prints or writes an SVG document. The
default seed for ``verify`` comes from ``WALLWAVE_SEED`` when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import GROUP_NAMES, PointElementNotInD, UnknownGroup, all_groups, get_group
from .grammar import InvalidForGroup, ParseError, format_element, parse_element, parse_omega, parse_vector
from .group_core import InvalidElement
from .induced import sigma_apply
from .orbits import build_cross_section, canonicalize
from .render import KINDS, render, render_residuals
from .verify import SUITES, UnknownSuite, run_verify
from .wavelet_rep import GaussianPacket, apply_Vhat

__all__ = ["main", "build_parser", "SEED_ENV", "DEFAULT_SUITES"]

SEED_ENV = "WALLWAVE_SEED"
DEFAULT_SUITES = ("axioms", "catalog", "orbits", "induced", "intertwine")


class UsageError(Exception):
    pass


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _group(name: str):
    try:
        return get_group(name)
    except UnknownGroup:
        raise UsageError(f"unknown group {name!r}; expected one of {', '.join(GROUP_NAMES)}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


# -- commands ----------------------------------------------------------------

def cmd_catalog(args, out) -> int:
    if args.group in (None, "all"):
        _dump([gd.to_json() for gd in all_groups()], out)
    else:
        _dump(_group(args.group).to_json(), out)
    return 0


def cmd_elem(args, out) -> int:
    gd = _group(args.group)
    g = parse_element(gd, args.text)
    canon = format_element(gd, g)
    if args.json:
        _dump({"group": gd.name, "canonical": canon, "x": [str(g.x.a), str(g.x.b)],
               "L": g.L.name, "ell": g.ell}, out)
    else:
        out.write(canon + "\n")
    return 0


def cmd_orbit(args, out) -> int:
    gd = _group(args.group)
    cs = build_cross_section(gd)
    _dump(canonicalize(cs, parse_omega(args.omega)).to_json(), out)
    return 0


def _parse_packet(text: str) -> GaussianPacket:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 8:
        raise UsageError("--packet needs 8 values: c,a1,a2,p11,p12,p22,b1,b2")
    try:
        c = complex(parts[0].replace(" ", ""))
        rest = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise UsageError(f"bad --packet value: {exc}") from None
    try:
        return GaussianPacket.from_params([c, *rest])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _packet_json(p: GaussianPacket) -> dict:
    c, *rest = p.params()
    return {"c": [c.real, c.imag], "a": [float(v) for v in p.center],
            "P": [[float(v) for v in row] for row in p.quad], "b": [float(v) for v in p.freq],
            "params": [[c.real, c.imag], *[float(v) for v in rest]]}


def cmd_rep(args, out) -> int:
    gd = _group(args.group)
    g = parse_element(gd, args.elem)
    if args.which == "sigma":
        if args.omega is None or args.vec is None:
            raise UsageError("rep sigma needs --omega and --vec")
        w = parse_omega(args.omega)
        res = sigma_apply(gd, w, g, parse_vector(gd, args.vec))
        _dump({"group": gd.name, "omega": list(w), "elem": format_element(gd, g),
               "result": res.to_json()}, out)
    else:
        if args.packet is None:
            raise UsageError("rep vhat needs --packet")
        (q,) = apply_Vhat(gd, g, _parse_packet(args.packet))
        _dump({"group": gd.name, "elem": format_element(gd, g), "packet": _packet_json(q)}, out)
    return 0


def cmd_verify(args, out) -> int:
    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; expected from {', '.join(SUITES)}")
    groups = "all" if args.group == "all" else [_group(g).name for g in args.group.split(",")]
    seed = _default_seed() if args.seed is None else args.seed
    try:
        reports, status = run_verify(suites, groups, seed, args.tol)
    except UnknownSuite as exc:
        raise UsageError(f"unknown suite {exc}") from None
    _dump(reports[0] if len(reports) == 1 else reports, out)
    if args.figure:
        Path(args.figure).write_text(render_residuals(reports))
    return status


def cmd_render(args, out) -> int:
    gd = _group(args.group)
    params = {}
    if args.kind == "orbits":
        params["omega"] = parse_omega(args.omega)
    svg = render(args.kind, gd, **params)
    if args.out:
        Path(args.out).write_text(svg)
        if args.json:
            _dump({"kind": args.kind, "group": gd.name, "path": args.out}, out)
    else:
        out.write(svg)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="wallwave", parents=[common],
                                description="Dilated wallpaper groups and their wavelet representation.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="export group data")
    c.add_argument("--group", default=None, help="group name or 'all' (default)")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("elem", parents=[common], help="parse and print an element")
    e.add_argument("--group", required=True)
    e.add_argument("text", help="([<q> u + <q> v (+ 1/2 z)?, <L>], <int>)")
    e.set_defaults(func=cmd_elem)

    o = sub.add_parser("orbit", parents=[common], help="orbit tools")
    o.add_argument("action", choices=["canon"])
    o.add_argument("--group", required=True)
    o.add_argument("--omega", required=True, help="x,y")
    o.set_defaults(func=cmd_orbit)

    r = sub.add_parser("rep", parents=[common], help="apply a representation")
    r.add_argument("which", choices=["sigma", "vhat"])
    r.add_argument("--group", required=True)
    r.add_argument("--elem", required=True)
    r.add_argument("--omega")
    r.add_argument("--vec", help="(L,m):re,im;...")
    r.add_argument("--packet", help="c,a1,a2,p11,p12,p22,b1,b2")
    r.set_defaults(func=cmd_rep)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--group", default="all", help="name, comma list or 'all'")
    v.add_argument("--suite", default=",".join(DEFAULT_SUITES),
                   help=f"comma list from {', '.join(SUITES)}")
    v.add_argument("--seed", type=int, default=None, help=f"default from ${SEED_ENV}, else 0")
    v.add_argument("--tol", type=float, default=None,
                   help="override every floating-point tolerance")
    v.add_argument("--figure", help="also write an SVG chart of the residuals here")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("render", parents=[common], help="draw an SVG")
    d.add_argument("kind", choices=KINDS)
    d.add_argument("--group", required=True)
    d.add_argument("--omega", default="2,1", help="x,y for orbits")
    d.add_argument("--out", help="write to this file instead of stdout")
    d.set_defaults(func=cmd_render)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except ParseError as exc:
        _dump({"error": "ParseError", "message": str(exc), "position": exc.pos}, out)
        return 2
    except (InvalidForGroup, InvalidElement, PointElementNotInD) as exc:
        _dump({"error": "InvalidForGroup", "message": str(exc)}, out)
        return 2
    except ValueError as exc:
        _dump({"error": type(exc).__name__, "message": str(exc)}, out)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
