"""Command-line surface for the snowflake group toolkit.

Every subcommand prints deterministic output.  Exit codes: 0 on success,
1 when a verification fails (the counterexample is printed), 2 on usage
errors.  The BFS memory budget can be overridden with the environment
variable SNOWFLAKE_BFS_BUDGET (states per search layer).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import distortion, filling, paths
from .hnn_group import DEFAULT_MAX_STATES, GroupElement, bfs_ball, pair_dist, reduce_word
from .params import GroupParams
from .vertex_group import (
    HPoint,
    dist_a_power,
    dist_h,
    geodesic_expression,
    geodesic_word_a_power,
    geodesic_word_h,
)
from .words import PathWord, parse_word


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("SNOWFLAKE_BFS_BUDGET")
    return int(env) if env else DEFAULT_MAX_STATES


def _params(args) -> GroupParams:
    return GroupParams(args.L)


def _emit(args, payload: dict, plain: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(plain)


def _cmd_dist(args) -> int:
    params = _params(args)
    if args.a_power is not None:
        d = dist_a_power(params, args.a_power)
        _emit(args, {"L": params.L, "a_power": args.a_power, "dist": d}, str(d))
    else:
        u, v = args.h
        d = dist_h(params, HPoint(u, v))
        _emit(args, {"L": params.L, "u": u, "v": v, "dist": d}, str(d))
    return 0


def _cmd_expr(args) -> int:
    params = _params(args)
    e = geodesic_expression(params, args.m)
    payload = {
        "L": params.L,
        "m": args.m,
        "digits": list(e.digits),
        "length": e.path_length(),
    }
    _emit(args, payload, f"digits {list(e.digits)} length {e.path_length()}")
    return 0


def _cmd_word(args) -> int:
    params = _params(args)
    if args.a_power is not None:
        w = geodesic_word_a_power(params, args.a_power)
    else:
        u, v = args.h
        w = geodesic_word_h(params, HPoint(u, v))
    _emit(args, {"L": params.L, "word": str(w), "length": w.length}, str(w))
    return 0


def _cmd_table(args) -> int:
    params = _params(args)
    rows = distortion.distortion_table(params, args.m_max)
    distortion.write_distortion_csv(rows, sys.stdout)
    return 0


def _cmd_mn(args) -> int:
    params = _params(args)
    rows = distortion.mn_sequence(params, args.n_max)
    if args.format == "json":
        print(
            json.dumps(
                [
                    {"n": r.n, "m": str(r.m), "dist": r.dist, "predicted": r.predicted}
                    for r in rows
                ],
                sort_keys=True,
            )
        )
    else:
        for r in rows:
            print(f"{r.n} {r.m} {r.dist} {r.predicted} {r.ratio:.9g}")
    return 0


def _cmd_snowflake(args) -> int:
    params = _params(args)
    if args.loop:
        w = paths.snowflake_loop(params, args.n)
    else:
        w = paths.snowflake_path(params, args.n, args.flavor)
    _emit(args, {"L": params.L, "n": args.n, "word": str(w), "length": w.length}, str(w))
    return 0


def _cmd_verify_loop(args) -> int:
    params = _params(args)
    if args.n is not None:
        loop = paths.snowflake_loop(params, args.n)
    else:
        loop = PathWord(params, parse_word(args.word))
    cap = args.cap if args.cap is not None else loop.length // 2
    ok = paths.verify_geodesic_loop(params, loop, cap, max_states=_budget(args))
    _emit(args, {"geodesic": ok, "length": loop.length}, f"geodesic: {'true' if ok else 'false'}")
    if not ok:
        report = paths.loop_bilip_constant(params, loop, loop.length // 2, _budget(args))
        print(f"counterexample: {report}", file=sys.stderr)
        return 1
    return 0


def _cmd_ball(args) -> int:
    params = _params(args)
    ball = bfs_ball(params, args.radius, max_states=_budget(args))
    ball.dump_jsonl(sys.stdout)
    return 0


def _cmd_enfilade(args) -> int:
    params = _params(args)
    word = PathWord(params, parse_word(args.word))
    dec = paths.enfilade_decompose(params, word, Fraction(args.R))
    payload = {
        "depth": dec.depth,
        "epsilons": [str(PathWord(params, e)) for e in dec.epsilons],
        "alphas": [str(a) for a in dec.alphas],
        "betas": [str(b) for b in dec.betas],
        "end": str(dec.end),
        "flavors": list(dec.flavors),
        "exponents": list(dec.exponents),
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_fill(args) -> int:
    params = _params(args)
    if args.shape == "snowflake":
        diagram = filling.subdivide_snowflake(params, args.p, args.subdivision_constant)
        print(json.dumps(diagram.to_json(), sort_keys=True))
        return 0
    with open(args.input) as fp:
        data = json.load(fp)
    poly = filling.polygon_from_json(params, data)
    if args.shape == "bigon":
        diagram, out = filling.fill_bigon(params, poly, data["subdivision"])
        subdivisions = [list(out.exponents)]
    elif args.shape == "triangle":
        diagram, sx, sy = filling.fill_triangle(params, poly, data["subdivision"])
        subdivisions = [list(sx.exponents), list(sy.exponents)]
    else:
        diagram, s2, s3 = filling.fill_diamond(
            params, poly, data["subdivision"], data["subdivision2"]
        )
        subdivisions = [list(s2.exponents), list(s3.exponents)]
    payload = diagram.to_json()
    payload["subdivisions"] = subdivisions
    payload["trivial"] = diagram.boundaries_trivial()
    print(json.dumps(payload, sort_keys=True))
    return 0 if payload["trivial"] else 1


def _cmd_central(args) -> int:
    if args.p is not None:
        params = _params(args)
        tree = filling.snowflake_hnn_tree(params, args.p)
    else:
        with open(args.input) as fp:
            tree = filling.HnnDualTree.from_json(json.load(fp))
    loc = filling.find_central_region(tree)
    payload = {
        "kind": loc.kind,
        "node": loc.node,
        "edge": list(loc.edge) if loc.edge else None,
        "offset": [loc.offset.numerator, loc.offset.denominator] if loc.offset is not None else None,
        "f": [loc.f_value.numerator, loc.f_value.denominator],
    }
    if args.dot:
        print(tree.to_dot())
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_area_budget(args) -> int:
    value = filling.area_budget(args.central, args.enfilade, args.branching, args.shells)
    _emit(args, {"area": value}, str(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snowflake-groups",
        description="Word metrics, geodesics, distortion and fillings in the snowflake groups G_L.",
    )
    parser.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--L", type=int, required=True, help="even defining parameter, >= 6")
        p.add_argument("--budget", type=int, default=None, help="BFS layer budget override")

    p = sub.add_parser("dist", help="distance of a^m or of an H element a^u x^v")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a-power", type=int)
    g.add_argument("--h", nargs=2, type=int, metavar=("U", "V"))
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("expr", help="geodesic digit expression of m")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_expr)

    p = sub.add_parser("word", help="geodesic word to a^m or to a^u x^v")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--a-power", type=int)
    g.add_argument("--h", nargs=2, type=int, metavar=("U", "V"))
    p.set_defaults(func=_cmd_word)

    p = sub.add_parser("table", help="distortion table as CSV (m,dist,ratio)")
    common(p)
    p.add_argument("--m-max", type=int, required=True)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("mn", help="the slow witness sequence m_n and its lengths")
    common(p)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=_cmd_mn)

    p = sub.add_parser("snowflake", help="emit a snowflake path or loop")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--flavor", choices=("s", "t"), default="s")
    p.add_argument("--loop", action="store_true")
    p.set_defaults(func=_cmd_snowflake)

    p = sub.add_parser("verify-loop", help="check that a loop is geodesic")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, help="use the depth-n snowflake loop")
    g.add_argument("--word", type=str, help="explicit loop word, e.g. 's a s^-1 ...'")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_verify_loop)

    p = sub.add_parser("ball", help="dump the BFS ball as JSON lines")
    common(p)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("enfilade", help="R-enfilade decomposition of an escape word")
    common(p)
    p.add_argument("--word", type=str, required=True)
    p.add_argument("--R", type=str, required=True, help="rational > 2, e.g. 4 or 7/2")
    p.set_defaults(func=_cmd_enfilade)

    p = sub.add_parser("fill", help="fill a polygon file or the snowflake loop")
    common(p)
    p.add_argument("shape", choices=("bigon", "triangle", "diamond", "snowflake"))
    p.add_argument("--input", type=str, help="polygon JSON file (non-snowflake shapes)")
    p.add_argument("--p", type=int, help="snowflake depth")
    p.add_argument("--subdivision-constant", type=int, default=None)
    p.set_defaults(func=_cmd_fill)

    p = sub.add_parser("central", help="central region of a corridor dual tree")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", type=str, help="dual tree JSON file")
    g.add_argument("--p", type=int, help="use the depth-p snowflake tree")
    p.add_argument("--dot", action="store_true", help="also print a DOT rendering")
    p.set_defaults(func=_cmd_central)

    p = sub.add_parser("area-budget", help="worst-case area of the shell assembly")
    p.add_argument("--central", type=int, required=True)
    p.add_argument("--enfilade", type=int, required=True)
    p.add_argument("--branching", type=int, required=True)
    p.add_argument("--shells", type=int, required=True)
    p.set_defaults(func=_cmd_area_budget)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "fill" and args.shape == "snowflake" and args.p is None:
        parser.error("fill snowflake requires --p")
    if getattr(args, "command", None) == "fill" and args.shape != "snowflake" and not args.input:
        parser.error(f"fill {args.shape} requires --input")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
