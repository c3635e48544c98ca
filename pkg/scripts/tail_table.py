#!/usr/bin/env python3
"""Per-scale tail-bound table and exact-vs-Hoeffding comparison.

Prints the scale table: at scale k the block count N, the per-block
success probability p = 3**-(k+1), the Hoeffding bound for S <= M, and
the bound's contribution summed over the scale's position range.  A
flagged row means N*p <= M, where the exponential bound says nothing.
For context, a second table compares exact binomial tails with their
Hoeffding bounds on a small grid.

Example:
    python scripts/tail_table.py --lambda paper --M 1 --k-max 2
"""

import argparse
import sys
from fractions import Fraction

from fracpack import binom_tail, borel_cantelli_table, hoeffding_bound, make_lacunary


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", default="paper",
                    help="sequence descriptor (default: %(default)s)")
    ap.add_argument("--M", type=int, default=1, help="tail threshold")
    ap.add_argument("--k-max", type=int, default=2)
    args = ap.parse_args(argv)

    lam = make_lacunary(args.lam)
    table = borel_cantelli_table(lam, args.M, args.k_max)
    print(f"lambda = {table.lam_descriptor}, M = {table.M}")
    print(f"{'k':>3} {'j range':>24} {'N':>6} {'p':>8} {'flag':>5} "
          f"{'hoeffding':>12} {'log10(contrib)':>15}")
    for row in table.rows:
        span = f"[{row.j_lo}, {row.j_hi})"
        log10c = "-" if row.log10_contribution is None else f"{row.log10_contribution:.3f}"
        print(f"{row.k:>3} {span:>24} {row.N:>6} {str(row.p):>8} "
              f"{str(row.flagged):>5} {row.hoeffding:>12.4e} {log10c:>15}")
    print("cumulative contributions:",
          " ".join(f"{c:.4g}" for c in table.cumulative))

    print("\nexact tail vs Hoeffding, M =", args.M)
    print(f"{'N':>5} {'p':>6} {'exact':>12} {'hoeffding':>12} {'ratio':>8}")
    for k in range(args.k_max + 1):
        p = Fraction(1, 3 ** (k + 1))
        for N in (9, 27, 81, 243):
            exact = float(binom_tail(N, p, args.M))
            bound = hoeffding_bound(N, p, args.M)
            ratio = exact / bound if bound > 0 else float("inf")
            print(f"{N:>5} {str(p):>6} {exact:>12.4e} {bound:>12.4e} {ratio:>8.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
