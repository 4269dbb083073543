#!/usr/bin/env python3
"""Render an SVG gallery: the test domains, a Whitney decomposition,
and a complement geodesic hugging the snowflake.

    python3 scripts/render_gallery.py --out-dir gallery
"""

import argparse
import pathlib
import sys

from porogeom.domain import build_cone_domain, build_koch_snowflake
from porogeom.dyadic import InteriorRegion, whitney_of_open_set
from porogeom.geodesic import build_complement_graph, weighted_geodesic
from porogeom.svg import render_domain, render_geodesic, render_whitney


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="gallery")
    ap.add_argument("--depth", type=int, default=5)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    koch = build_koch_snowflake(1 / 3, args.depth)
    cone = build_cone_domain(0.25)
    render_domain(koch).save(out / "koch.svg")
    render_domain(cone).save(out / "cone.svg")

    dec = whitney_of_open_set(InteriorRegion(koch), koch.bbox, max_level=7)
    render_whitney(koch, dec).save(out / "koch_whitney.svg")

    g = build_complement_graph(koch, h=2.0**-7, p=1.5)
    res = weighted_geodesic(g, (-0.2, 0.1), (1.2, 0.1))
    render_geodesic(koch, [res.polyline]).save(out / "koch_geodesic.svg")
    print(f"wrote 4 SVGs to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
