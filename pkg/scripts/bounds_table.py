"""Closed-form bound constants for n = 2..N and a few beta/n, alpha/alpha_n ratios, as CSV."""
import argparse
import sys

from tmbounds.bounds import BOUNDS_COLUMNS, bounds_row
from tmbounds.numerics import alpha_n
from tmbounds.reports import dumps_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--beta-ratios", default="0,0.25,0.5")
    ap.add_argument("--alpha-ratios", default="0.5,0.9,0.99")
    args = ap.parse_args()
    betas = [float(x) for x in args.beta_ratios.split(",")]
    alphas = [float(x) for x in args.alpha_ratios.split(",")]
    rows = []
    for n in range(2, args.n_max + 1):
        for b in betas:
            for a in alphas:
                rows.append(bounds_row(n, b * n, a * alpha_n(n)).to_json())
    sys.stdout.write(dumps_csv(BOUNDS_COLUMNS, rows))


if __name__ == "__main__":
    main()
