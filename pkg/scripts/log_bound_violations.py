#!/usr/bin/env python3
"""List the integers where log x |m(x)| exceeds 0.0130073.

The constant 0.0130073 is commonly quoted as an upper bound for
log x |m(x)| from x = 97063 on.  Scanning [97063, 230000) with certified
interval arithmetic shows thirteen integers (in [119543, 120560]) where
the bound genuinely fails, peaking about 1.4% above the constant.  This
script reproduces that listing and reports the smallest rank from which
the constant actually holds on the scanned window.
"""

import argparse

from mobsum.tables import build_tables
from mobsum.verify import PREDICATES, verify_range


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--from", dest="lo", type=int, default=97063)
    ap.add_argument("--to", dest="hi", type=int, default=230000)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()

    tb = build_tables(args.hi, jobs=args.jobs)
    rep = verify_range(PREDICATES["mlog0.0130073"], args.lo, args.hi, tb,
                       jobs=args.jobs)
    print(f"predicate mlog0.0130073 on [{args.lo}, {args.hi}): "
          f"{'PASS' if rep.passed else 'FAIL'} "
          f"({len(rep.violations)} violations, "
          f"peak ratio {rep.max_ratio:.10g} at n = {rep.argmax})")
    for n, value, margin in rep.violations:
        print(f"  n = {n}: sup log x |m| on [n, n+1) = {value:.12g} "
              f"(excess {-margin:.6g})")
    if rep.violations:
        first_good = rep.violations[-1][0] + 1
        print(f"smallest admissible rank on this window: {first_good}")


if __name__ == "__main__":
    main()
