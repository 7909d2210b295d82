#!/usr/bin/env python3
"""Empirical count / prediction ratios on the twist-1 surface X_2(1).

For each (lam, mu) in {1,2,3}^2 this sweeps the bound over a doubling
grid and prints the final ratio N(U; B) / C B^a (log B)^b, which should
drift toward 1.  Useful for eyeballing convergence speed across the
three asymptotic regimes of the table.

Usage:
    python3 scripts/hirzebruch_sweep.py [--bmax 64] [--threads 4]
"""
import argparse
import csv
import sys
from fractions import Fraction

from hkcount.constants import predict
from hkcount.enumeration import CountRequest, sweep
from hkcount.geometry import HKVariety, LineBundleClass
from hkcount.heights import Region


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bmax", type=int, default=64)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    X = HKVariety(1, 2, (1,))
    grid = []
    b = 4
    while b <= args.bmax:
        grid.append(Fraction(b))
        b *= 2

    writer = csv.writer(sys.stdout)
    writer.writerow(["lam", "mu", "case", "a", "log", "C", "B", "count", "ratio"])
    for lam in (1, 2, 3):
        for mu in (1, 2, 3):
            L = LineBundleClass(lam, mu)
            pred = predict(X, L)
            req = CountRequest(X, L, grid[-1], Region.GOOD_OPEN,
                               threads=args.threads)
            rows = sweep(req, grid, prediction=pred)
            last = rows[-1]
            writer.writerow([lam, mu, pred.case.value, str(pred.a_l),
                             pred.log_exponent, f"{pred.constant:.8f}",
                             last["B"], last["count"], f"{last['ratio']:.5f}"])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
