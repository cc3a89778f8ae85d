"""Solve the half-line extremal problem over a range of (n, beta) and print a CSV.

    python3 scripts/sweep_sn.py --n-max 8 --betas 0,0.5 --out sweep.csv
"""
import argparse
import sys
import time

from tmbounds.bounds import lower_bound_ball, lower_bound_singular, upper_bound_tm, upper_bound_tm_singular
from tmbounds.extremal import GridSpec, solve_extremal_direct, solve_extremal_shooting
from tmbounds.numerics import unit_ball_volume
from tmbounds.reports import dumps_csv

COLUMNS = ["n", "beta", "S_direct", "S_shooting", "rel_gap", "multiplier", "dw0", "lower", "upper",
           "seconds"]


def row(n, beta_ratio, cells):
    beta = beta_ratio * n
    t0 = time.perf_counter()
    d = solve_extremal_direct(n, beta, GridSpec(cells=cells))
    s = solve_extremal_shooting(n, beta, seed=d)
    if beta == 0:
        lo, hi = lower_bound_ball(n), float(upper_bound_tm(n))
    else:
        lo, hi = lower_bound_singular(n, beta), upper_bound_tm_singular(n, beta) / unit_ball_volume(n) ** (beta / n)
    return {"n": n, "beta": beta, "S_direct": d.S_value, "S_shooting": s.S_value,
            "rel_gap": abs(d.S_value - s.S_value) / s.S_value, "multiplier": s.multiplier,
            "dw0": s.dw0, "lower": lo, "upper": hi, "seconds": time.perf_counter() - t0}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--betas", default="0", help="comma-separated beta/n ratios")
    ap.add_argument("--cells", type=int, default=800)
    ap.add_argument("--out")
    args = ap.parse_args()
    ratios = [float(x) for x in args.betas.split(",") if x.strip()]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        for r in ratios:
            rows.append(row(n, r, args.cells))
            print(f"n={n} beta/n={r}: S={rows[-1]['S_shooting']:.8f}", file=sys.stderr)
    text = dumps_csv(COLUMNS, rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
