"""Ratio of the circle mean of |1 - r e^{it}|^{-p} to (1-r^2)^{1-p} as r -> 1."""

import argparse

import numpy as np

from bergman_means.bounds import lemma1_closed_form, lemma1_sharp_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[1.5, 2.0, 3.0, 4.0, 6.0])
    args = ap.parse_args()
    gaps = np.logspace(-1, -8, 8)
    print("1-r^2     " + "  ".join(f"p={p:<8g}" for p in args.p))
    for g in gaps:
        r = np.sqrt(1.0 - g)
        row = [lemma1_closed_form(p, r) * g ** (p - 1.0) / lemma1_sharp_constant(p) for p in args.p]
        print(f"{g:8.1e}  " + "  ".join(f"{v:10.7f}" for v in row))
    print("limit     " + "  ".join(f"{lemma1_sharp_constant(p):10.6f}" for p in args.p) + "  (sharp constant)")


if __name__ == "__main__":
    main()
