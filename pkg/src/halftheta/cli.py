"""Command line interface: ``halftheta gen|build|verify|svg|campaign``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .instance_io import (GenerationExhausted, ParseError, ValidationError, generate_instance,
                          load_instance, serialize_instance)
from .render import LAYER_STYLE, plot_campaign, plot_instance, render_svg
from .report import dumps, run_campaign, run_report
from .verify import run_pipeline, verify_pipeline

GRAPHS = tuple(LAYER_STYLE)


class UsageError(Exception):
    pass


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _load(path):
    try:
        return load_instance(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except ValidationError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _layers(spec: str) -> list:
    names = [s for s in spec.split(",") if s]
    bad = [s for s in names if s not in GRAPHS]
    if bad:
        raise UsageError(f"unknown graph(s) {bad}; choose from {', '.join(GRAPHS)}")
    return names


def cmd_gen(args) -> int:
    try:
        inst = generate_instance(args.seed, args.n, args.constraints, bbox=tuple(args.bbox))
    except (ValueError, GenerationExhausted) as exc:
        raise UsageError(str(exc)) from None
    fh, close = _open_out(args.output)
    fh.write(serialize_instance(inst))
    if close:
        fh.close()
    return 0


def cmd_build(args) -> int:
    inst = _load(args.instance)
    p = run_pipeline(inst)
    g = p.graph(args.graph)
    fh, close = _open_out(args.output)
    fh.write(dumps({"graph": args.graph, "n": g.n, "edges": [list(e) for e in g.sorted_edges()]}))
    fh.write("\n")
    if close:
        fh.close()
    return 0


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    p = run_pipeline(inst)
    rep = verify_pipeline(p, confined=not args.skip_confined)
    rec = run_report(p, rep, label=os.path.basename(args.instance))
    fh, close = _open_out(args.output)
    fh.write(dumps(rec) + "\n")
    if close:
        fh.close()
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        stem = os.path.splitext(os.path.basename(args.instance))[0]
        for name in ("theta6", "g6"):
            plot_instance(inst, {name: p.graph(name)}, os.path.join(args.figures, f"{stem}_{name}.png"),
                          title=f"{stem}: {name}")
    for c in rep.failed():
        print(f"FAIL {c.name}: {json.dumps(c.as_dict()['witness'])}", file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_svg(args) -> int:
    inst = _load(args.instance)
    names = _layers(args.layers)
    layers = {}
    if names:
        p = run_pipeline(inst)
        layers = {name: p.graph(name) for name in names}
    try:
        render_svg(inst, layers, args.output, labels=not args.no_labels)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from None
    return 0


def cmd_campaign(args) -> int:
    if args.count < 0 or args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need count >= 0 and 1 <= n-min <= n-max")
    seeds = range(args.seed0, args.seed0 + args.count)
    fh, close = _open_out(args.output)
    records = []
    agg = None
    for rec in run_campaign(seeds, args.n_min, args.n_max, confined=not args.skip_confined,
                            workers=args.workers):
        fh.write(dumps(rec) + "\n")
        fh.flush()
        if rec["type"] == "aggregate":
            agg = rec
        elif args.figures:
            records.append(rec)
    if close:
        fh.close()
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        plot_campaign(records, os.path.join(args.figures, "campaign.png"))
    print(f"{agg['instances']} instances, {agg['failures']} failing, {agg['seconds']}s",
          file=sys.stderr)
    return 0 if agg["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halftheta", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a random general-position instance")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--constraints", type=int, default=0, help="constraint budget")
    s.add_argument("--bbox", type=int, nargs=2, default=(1000, 1000), metavar=("W", "H"))
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("build", help="print the edge list of one graph")
    s.add_argument("instance")
    s.add_argument("--graph", choices=GRAPHS, default="g6")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", help="run every check, print a JSON report line")
    s.add_argument("instance")
    s.add_argument("-o", "--output")
    s.add_argument("--figures", metavar="DIR", help="also write PNG figures here")
    s.add_argument("--skip-confined", action="store_true",
                   help="skip the per-pair confined-path check (the slowest)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("svg", help="render an instance and chosen graphs to SVG")
    s.add_argument("instance")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--layers", default="theta6", help="comma list from " + ",".join(GRAPHS))
    s.add_argument("--no-labels", action="store_true")
    s.set_defaults(func=cmd_svg)

    s = sub.add_parser("campaign", help="verify many seeded instances, JSON lines out")
    s.add_argument("--count", type=int, default=500)
    s.add_argument("--seed0", type=int, default=0)
    s.add_argument("--n-min", type=int, default=3)
    s.add_argument("--n-max", type=int, default=60)
    s.add_argument("--workers", type=int, help="process count (default: $HT6_WORKERS or CPUs)")
    s.add_argument("-o", "--output")
    s.add_argument("--figures", metavar="DIR", help="write campaign.png here")
    s.add_argument("--skip-confined", action="store_true")
    s.set_defaults(func=cmd_campaign)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"halftheta: error: {exc}", file=sys.stderr)
        return 2


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
