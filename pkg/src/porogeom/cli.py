"""Command-line front end.

Subcommands: generate, whitney, porosity, boxdim, curve-constant, john,
geodesic, sweep, render.  All JSON payloads carry "schema": 1.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .boxdim import box_dimension
from .domain import (
    Domain,
    build_cone_domain,
    build_koch_snowflake,
    build_regular_polygon,
    build_unit_square,
    rasterize,
)
from .dyadic import whitney_of_open_set, InteriorRegion
from .geodesic import (
    build_complement_graph,
    build_interior_graph,
    curve_condition_constant,
    john_constant,
    weighted_geodesic,
)
from .porosity import (
    AnnulusCubeCounter,
    PorosityParams,
    epsilon_schedule,
    porosity_profile,
    smallest_k0,
)
from .report import ExperimentConfig, emit_report, run_sweep
from .svg import render_domain, render_geodesic, render_whitney

SCHEMA = 1


def _emit(obj, path=None):
    obj = {"schema": SCHEMA, **obj}
    text = json.dumps(obj, indent=2, sort_keys=True, default=_jsonify) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonify(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON-serializable: {type(x)}")


def _load_domain(args) -> Domain:
    if args.domain:
        return Domain.load(args.domain)
    raise SystemExit("error: --domain is required")


def _xy(s: str) -> np.ndarray:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected x,y")
    return np.array([float(parts[0]), float(parts[1])])


def cmd_generate(args) -> int:
    if args.kind == "koch":
        dom = build_koch_snowflake(args.lam, args.depth)
    elif args.kind == "cone":
        dom = build_cone_domain(args.eps)
    elif args.kind == "polygon":
        dom = build_regular_polygon(args.n)
    elif args.kind == "square":
        dom = build_unit_square()
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown kind {args.kind}")
    dom.save(args.out)
    _emit({"kind": args.kind, "n_vertices": len(dom.vertices),
           "area": dom.area, "perimeter": dom.perimeter, "out": args.out})
    return 0


def cmd_whitney(args) -> int:
    dom = _load_domain(args)
    region = InteriorRegion(dom)
    dec = whitney_of_open_set(region, dom.bbox, max_level=args.max_level)
    by_level: dict = {}
    for q in dec.cells:
        by_level[q.level] = by_level.get(q.level, 0) + 1
    _emit({"n_cubes": len(dec.cells),
           "by_level": {str(k): v for k, v in sorted(by_level.items())}},
          args.out)
    if args.svg:
        render_whitney(dom, dec).save(args.svg)
    return 0


def cmd_porosity(args) -> int:
    dom = _load_domain(args)
    C = args.C if args.C is not None else 72.0
    eps = epsilon_schedule(C)
    params = PorosityParams(eps=eps)
    pts = dom.sample_boundary(args.points, seed=args.seed)
    k0 = smallest_k0(dom)
    counter = AnnulusCubeCounter(dom)
    profiles = []
    n_porous = 0
    for x in pts:
        prof = porosity_profile(counter, x, j_max=args.j_max, params=params,
                                domain=dom)
        profiles.append(prof.to_json())
        n_porous += bool(prof.verdict)
    _emit({"eps": eps, "lambda_count": params.lambda_count(k0), "k0": k0,
           "n_points": len(pts), "n_porous": n_porous,
           "profiles": profiles if args.full else profiles[:3]},
          args.out)
    return 0


def cmd_boxdim(args) -> int:
    dom = _load_domain(args)
    fit = box_dimension(dom, args.k_min, args.k_max, base_scale=args.base_scale)
    _emit({"slope": fit.slope, "dimension": fit.slope, "r2": fit.r2,
           "counts": fit.counts, "k_range": list(fit.k_range),
           "clamped": fit.clamped}, args.out)
    return 0


def cmd_curve_constant(args) -> int:
    dom = _load_domain(args)
    est = curve_condition_constant(dom, args.p, n_pairs=args.pairs,
                                   seed=args.seed, h=args.h)
    _emit({"C_hat": est.C_hat, "p": est.p, "h": est.h,
           "n_pairs": len(est.values),
           "argmax_pair": [list(map(float, q)) for q in est.argmax_pair]
           if isinstance(est.argmax_pair[0], (tuple, list, np.ndarray))
           else list(est.argmax_pair)}, args.out)
    return 0


def cmd_john(args) -> int:
    dom = _load_domain(args)
    est = john_constant(dom, h=args.h)
    _emit({"J_hat": est.J_hat, "center": list(est.center), "h": est.h,
           "probes": est.probes}, args.out)
    return 0


def cmd_geodesic(args) -> int:
    dom = _load_domain(args)
    build = build_complement_graph if args.side == "complement" else build_interior_graph
    graph = build(dom, h=args.h, p=args.p)
    res = weighted_geodesic(graph, args.frm, args.to)
    _emit({"polyline": res.polyline, "functional": res.functional,
           "length": res.length, "p": args.p, "h": args.h,
           "per_cell_length": {str(k): v for k, v in
                               (res.per_cell_length or {}).items()}},
          args.out)
    if args.svg:
        render_geodesic(dom, [res.polyline]).save(args.svg)
    return 0


def cmd_sweep(args) -> int:
    overrides = {
        "analyses": args.analyses, "p": args.p, "seed": args.seed,
        "out_prefix": args.out_prefix,
    }
    if args.config:
        cfg = ExperimentConfig.from_file(args.config, overrides)
    else:
        kw = {k: v for k, v in overrides.items() if v is not None}
        if "analyses" in kw:
            kw["analyses"] = tuple(s for s in kw["analyses"].split(",") if s)
        cfg = ExperimentConfig(**kw)
    records = run_sweep(cfg)
    if not records:
        print("no analyses selected")
        return 0
    return emit_report(records, cfg.out_prefix)


def cmd_render(args) -> int:
    dom = _load_domain(args)
    render_domain(dom).save(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="porogeom",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="build a domain and save it as JSON")
    g.add_argument("kind", choices=["koch", "cone", "polygon", "square"])
    g.add_argument("--lam", type=float, default=1 / 3)
    g.add_argument("--depth", type=int, default=5)
    g.add_argument("--eps", type=float, default=0.25)
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    w = sub.add_parser("whitney", help="Whitney decomposition summary")
    w.add_argument("--domain", required=True)
    w.add_argument("--max-level", type=int, default=8)
    w.add_argument("--out")
    w.add_argument("--svg")
    w.set_defaults(fn=cmd_whitney)

    po = sub.add_parser("porosity", help="weak mean porosity profiles")
    po.add_argument("--domain", required=True)
    po.add_argument("--C", type=float, help="curve constant for the schedule")
    po.add_argument("--points", type=int, default=20)
    po.add_argument("--j-max", type=int, default=10)
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--full", action="store_true")
    po.add_argument("--out")
    po.set_defaults(fn=cmd_porosity)

    b = sub.add_parser("boxdim", help="box-counting dimension fit")
    b.add_argument("--domain", required=True)
    b.add_argument("--k-min", type=int, default=6)
    b.add_argument("--k-max", type=int, default=11)
    b.add_argument("--base-scale", type=float, default=4.0)
    b.add_argument("--out")
    b.set_defaults(fn=cmd_boxdim)

    c = sub.add_parser("curve-constant", help="sampled curve-condition constant")
    c.add_argument("--domain", required=True)
    c.add_argument("--p", type=float, default=1.5)
    c.add_argument("--pairs", type=int, default=200)
    c.add_argument("--h", type=float, default=1 / 512)
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_curve_constant)

    j = sub.add_parser("john", help="John constant via constrained search")
    j.add_argument("--domain", required=True)
    j.add_argument("--h", type=float, default=1 / 256)
    j.add_argument("--out")
    j.set_defaults(fn=cmd_john)

    ge = sub.add_parser("geodesic", help="weighted geodesic between two points")
    ge.add_argument("--domain", required=True)
    ge.add_argument("--from", dest="frm", type=_xy, required=True)
    ge.add_argument("--to", type=_xy, required=True)
    ge.add_argument("--p", type=float, default=1.5)
    ge.add_argument("--h", type=float, default=1 / 256)
    ge.add_argument("--side", choices=["interior", "complement"],
                    default="complement")
    ge.add_argument("--svg")
    ge.add_argument("--out")
    ge.set_defaults(fn=cmd_geodesic)

    s = sub.add_parser("sweep", help="run analysis sweeps and emit a report")
    s.add_argument("--config")
    s.add_argument("--analyses")
    s.add_argument("--p", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--out-prefix")
    s.set_defaults(fn=cmd_sweep)

    r = sub.add_parser("render", help="render a domain to SVG")
    r.add_argument("--domain", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(fn=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
