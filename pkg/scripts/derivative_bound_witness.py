"""Single-mode inputs that break the k >= 1 derivative bounds while k = 0 holds.

For f = e^{i m t} the left side of the P_r^(n) bound is exactly
(m+n+1)!/m! r^m |...|, while the twisted derivative on the right scales with
|m - n|^k.  Taking m = n makes the right side vanish for every k >= 1.
"""

import argparse
import math

from bergman_means.bounds import check_bpn_bound, check_prn_bound
from bergman_means.disc_fn import CircleFunction
from bergman_means.specs import build


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=0.7)
    args = ap.parse_args()
    print("P_r^(n) bound, f = e^{5it}, n = 2")
    f = CircleFunction.from_modes({5: 1.0})
    for k in (0, 1, 2):
        for p in (1.0, 2.0, math.inf):
            rep = check_prn_bound(f, p, 2, k, args.r)
            print(f"  k={k} p={p:<4g} lhs={rep.lhs:10.4f} rhs={rep.rhs:10.4f} {'ok' if rep.passed else 'VIOLATED'}")
    print("projection bound, f = chi_[0.3,0.8](r) e^{2it}, n = 2")
    g = build({"kind": "annulus-mode", "breakpoints": [0.3, 0.8], "modes": [{"n": 2, "values": [1]}]})
    for k in (0, 1, 2):
        rep = check_bpn_bound(g, 2.0, 2, k, 0.6)
        print(f"  k={k} lhs={rep.lhs:10.4f} rhs={rep.rhs:10.4f} {'ok' if rep.passed else 'VIOLATED'}")


if __name__ == "__main__":
    main()
