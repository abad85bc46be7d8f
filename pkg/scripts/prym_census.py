"""Tally Prym polarization types over random simple branch data."""

import argparse
import random
from collections import Counter

from quadcover import prym as P


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--branch-points", type=int, default=6)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    for _ in range(args.samples):
        b = P.random_branch_data(args.degree, args.branch_points, rng)
        rep = P.prym_polarization(P.build_homology(b))
        tally[(rep.d2, rep.polarization)] += 1
    for (d2, pol), k in sorted(tally.items()):
        print(f"d2 = {d2}  polarization {pol}: {k}")


if __name__ == "__main__":
    main()
