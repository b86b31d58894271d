"""Scan the Hoelder-split constant over (a, b) and compare the search with the b = 1/p recipe."""

import argparse
import math

import numpy as np

from bergman_means.bounds import C2Params, c2_constant
from bergman_means.errors import DomainError


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--j", type=float, default=1.0)
    ap.add_argument("--u", type=float, default=0.0)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()
    P = C2Params(args.p, args.m, args.k, args.j, args.u)
    bs = np.linspace(0.05, 0.95, args.steps)
    as_ = np.linspace(-0.5, 1.0, args.steps)
    print("rows: a, columns: b; '-' marks infeasible pairs")
    print("        " + " ".join(f"{b:7.3f}" for b in bs))
    for a in as_:
        cells = []
        for b in bs:
            if P.violations(a, b):
                cells.append("      -")
                continue
            try:
                cells.append(f"{c2_constant(P, 'fixed', a=a, b=b).value:7.3f}")
            except DomainError:
                cells.append("      -")
        print(f"{a:7.3f} " + " ".join(cells))
    best = c2_constant(P, "grid")
    print(f"search: {best.value:.10f} at a={best.a:.6f}, b={best.b:.6f}")
    try:
        rec = c2_constant(P, "recipe")
        print(f"recipe: {rec.value:.10f} at a={rec.a:.6f}, b={rec.b:.6f}")
    except DomainError as exc:
        print(f"recipe: infeasible ({exc})")
    if (args.m, args.k, args.j, args.u) == (1.0, 1.0, 1.0, 0.0):
        print(f"pi/sin(pi/p): {math.pi / math.sin(math.pi / args.p):.10f}")


if __name__ == "__main__":
    main()
