#!/usr/bin/env python3
"""Koch snowflake suite: box-dimension fits over the lambda grid, the
sampled curve-condition constant at lambda = 1/3, and John constants,
printed as a small table.

    python3 scripts/run_koch_suite.py --depth 8
"""

import argparse
import math
import sys
import time

from porogeom.boxdim import box_dimension, koch_dimension_closed_form
from porogeom.domain import build_koch_snowflake
from porogeom.geodesic import curve_condition_constant, john_constant


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lams", default="0.3333333333333333,0.4,0.45")
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--p", type=float, default=1.5)
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--skip-curve", action="store_true")
    args = ap.parse_args()
    lams = [float(s) for s in args.lams.split(",")]

    for lam in lams:
        t0 = time.perf_counter()
        dom = build_koch_snowflake(lam, args.depth, check=False)
        fit = box_dimension(dom, 6, 11, base_scale=4.0)
        dim, bound = koch_dimension_closed_form(lam)
        hj = 2.0 ** math.floor(math.log2(2.0**-9 * dom.diameter))
        jest = john_constant(dom if args.depth <= 6 else
                             build_koch_snowflake(lam, 6, check=False), h=hj)
        print(f"lam={lam:.4f}  d_hat={fit.slope:.4f} (exact {dim:.4f}, "
              f"linear bound {bound:.4f}, r2={fit.r2:.5f})  "
              f"J_hat={jest.J_hat:.4f} (exact {(0.5 - lam) / lam:.4f})  "
              f"[{time.perf_counter() - t0:.0f}s]")

    if not args.skip_curve:
        t0 = time.perf_counter()
        dom6 = build_koch_snowflake(1 / 3, 6, check=False)
        est = curve_condition_constant(dom6, args.p, n_pairs=args.pairs,
                                       seed=args.seed, h=2.0**-9)
        print(f"curve constant lam=1/3 depth=6: C_hat={est.C_hat:.4f} "
              f"(example bound 72)  [{time.perf_counter() - t0:.0f}s]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
