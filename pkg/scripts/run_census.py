"""Sweep the square-move census over a list of grid shapes and print the
headline counts.

Typical run:

    python3 scripts/run_census.py --shapes 2,4 2,5 3,5 3,6
    python3 scripts/run_census.py --shapes 3,7 --deep --out g37.json
"""

import argparse
import json
import sys
import time

from okbodies.census import DEFAULT_SEED, census
from okbodies.partitions import GridShape


def parse_shape(s: str) -> GridShape:
    k, n = (int(t) for t in s.split(","))
    return GridShape(k=k, n=n)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shapes", nargs="+", default=["2,4", "2,5", "3,5", "3,6"])
    ap.add_argument("--deep", action="store_true")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--out", help="write the last census as JSON")
    args = ap.parse_args(argv)

    print(f"{'shape':>7}  {'classes':>7}  {'integral':>8}  {'fractional':>10}  {'seconds':>8}")
    report = None
    for s in args.shapes:
        shape = parse_shape(s)
        t0 = time.time()
        report = census(shape, deep=args.deep, seed=args.seed)
        dt = time.time() - t0
        print(
            f"({shape.k},{shape.n})".rjust(7)
            + f"  {report.class_count:7d}  {report.integral_count:8d}"
            + f"  {report.nonintegral_count:10d}  {dt:8.1f}"
        )
        for c in report.classes:
            if not c.integral:
                print(f"         fractional: {c.key_str}")
    if args.out and report is not None:
        with open(args.out, "w") as fh:
            json.dump(report.to_json(), fh, indent=1)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
