#!/usr/bin/env python3
"""Cone epsilon-sweep: curve-condition scaling, John constants, and the
J ~ ((2-p) C)^{1/(p-2)} power law, emitted as a pass/fail report.

Roughly 15-20 minutes at the default resolution; the three analyses
share one C-sweep.  Usage:

    python3 scripts/run_cone_sweep.py --out-prefix out/cone_sweep
"""

import argparse
import sys

from porogeom.report import ExperimentConfig, emit_report, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=1.5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out-prefix", default="cone_sweep")
    ap.add_argument("--skip-powerlaw", action="store_true",
                    help="only the curve-slope and John records")
    args = ap.parse_args()

    analyses = ("curve-slope", "john")
    if not args.skip_powerlaw:
        analyses += ("powerlaw",)
    cfg = ExperimentConfig(analyses=analyses, p=args.p, seed=args.seed,
                           workers=args.workers, out_prefix=args.out_prefix)
    records = run_sweep(cfg)
    return emit_report(records, cfg.out_prefix)


if __name__ == "__main__":
    sys.exit(main())
