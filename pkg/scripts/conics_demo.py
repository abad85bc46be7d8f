"""Branch divisor of a pencil file and the fiber over each of its rational roots."""

import argparse
from pathlib import Path

import sympy as sp

from quadcover import conics as C

DEFAULT = Path(__file__).resolve().parent.parent / "data" / "pencil_six_branch.json"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("path", nargs="?", default=str(DEFAULT))
    args = ap.parse_args()
    p = C.load_pencil(args.path)
    print("pattern:", C.degeneration_pattern(p))
    facs = C.branch_divisor(p)
    n = C.branch_degree(facs)
    for f, k in facs:
        print(f"factor {f.as_expr()} ^ {k}")
    print(f"degree {n}, squarefree {C.is_squarefree(facs)}")
    if C.is_squarefree(facs) and n % 2 == 0:
        print("genus of the cover:", C.cover_genus(n))
    for f, _ in facs:
        for r in sp.Poly(f, C.Y).ground_roots():
            print(f"fiber at y = {r}:", C.fiber_analysis(p, r).to_json())
    for y0 in (0, 1):
        print(f"fiber at y = {y0}:", C.fiber_analysis(p, y0).to_json())


if __name__ == "__main__":
    main()
