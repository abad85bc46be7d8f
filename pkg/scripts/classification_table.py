"""Print the accepted decomposition type and a status census for each e."""

import argparse
import time
from collections import Counter

from quadcover import moduli as M


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-e", type=int, default=6)
    ap.add_argument("--window", type=int, default=4)
    args = ap.parse_args()
    t0 = time.perf_counter()
    for e in range(1, args.max_e + 1):
        rep = M.enumerate_and_verify(e, args.window)
        census = Counter(v.status for _, v in rep.rows)
        print(f"e = {e}: {len(rep.rows)} types, " + ", ".join(f"{k} {census[k]}" for k in M.STATUSES if census[k]))
        for t in rep.accepted:
            print(f"  accepted E = {list(t.E_shape)} iso {list(t.E_iso)}, F = {list(t.F_shape)} iso {list(t.F_iso)}")
    print(f"total {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
