"""Schedule rows and divergence of the squared projection coefficients."""

import argparse

from bergman_means import counterexample


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", "--depth", type=int, default=200)
    ap.add_argument("--every", type=int, default=20)
    args = ap.parse_args()
    s = counterexample.build_schedule(args.depth)
    f = counterexample.build_function(s)
    div = counterexample.divergence_report(f)
    print(f"{'n':>4} {'1-b_n':>12} {'m_n':>22} {'S_n':>8} {'H_n/16':>8}")
    for n, _, comp, m, _ in s.rows():
        if n <= 3 or n % args.every == 0:
            print(f"{n:4d} {comp:12.4e} {m:22d} {div.partial_sums[n - 1]:8.4f} {div.harmonic_envelope[n - 1]:8.4f}")
    print(f"monotonicity forced at some step: {s.ever_enforced}")


if __name__ == "__main__":
    main()
