#!/usr/bin/env python3
"""Density blow-up at points with many influencing positions.

Draws uniform code words, keeps those whose influence count S at
position j reaches a threshold, and certifies the lower-density ratio
of the natural measure around each kept point at level j.  Every kept
word must beat the floor (S_min + 1) / (2*(C+1))**s: the word's own
prefix plus one perturbation per influence record all land in the ball
of radius C * 4**(-j), and each carries mass 3**(-j).

Example:
    python scripts/density_blowup.py --min-successes 2 --samples 200
"""

import argparse
import sys

from fractions import Fraction

from fracpack import (
    DEFAULT_SEED,
    IFSSystem,
    S_DIM,
    density_ratio,
    influence_count,
    make_lacunary,
    project,
    recommended_word_length,
    sample_sequence,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", default="explicit:2,6,14,30",
                    help="sequence descriptor (default: %(default)s)")
    ap.add_argument("--j", type=int, default=13, help="target position")
    ap.add_argument("--C", default="3", help="radius coefficient (rational)")
    ap.add_argument("--min-successes", type=int, default=2,
                    help="keep words with S >= this threshold")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args(argv)

    lam = make_lacunary(args.lam)
    system = IFSSystem(lam)
    C = Fraction(args.C)
    L = recommended_word_length(lam, args.j)
    floor = (args.min_successes + 1) / (2.0 * float(C + 1)) ** S_DIM

    kept = 0
    worst = None
    print(f"lambda = {lam.descriptor()}, j = {args.j}, C = {C}, "
          f"word length = {L}, floor = {floor:.6f}")
    print(f"{'trial':>5} {'S':>3} {'count':>6} {'ratio':>10}")
    for t in range(args.samples):
        word = sample_sequence(f"{args.seed}:cond:{t}", L).word
        s = influence_count(word, args.j, lam).count
        if s < args.min_successes:
            continue
        entry = density_ratio(system, project(word), args.j, C)
        kept += 1
        worst = entry.ratio_bound if worst is None else min(worst, entry.ratio_bound)
        print(f"{t:>5} {s:>3} {entry.count:>6} {entry.ratio_bound:>10.6f}")

    if kept == 0:
        print("no words reached the threshold; raise --samples")
        return 1
    verdict = "above" if worst >= floor else "BELOW"
    print(f"kept {kept}/{args.samples}; worst certified ratio {worst:.6f} "
          f"is {verdict} the floor {floor:.6f}")
    return 0 if worst >= floor else 1


if __name__ == "__main__":
    sys.exit(main())
