#!/usr/bin/env python3
"""Cross-checks between the analytic routes, printed as a short report.

Covers: the theta reflection identity h0(x) - h0(-x) = x, the integral
identity relating 2 xi(s) Z_{P^n}(s) to a rank-(n+1) quadrature, the
residue of Z_{P^1} at s = 2 via Neville extrapolation, agreement of the
direct-summation and theta-accelerated evaluations of Z_{P^m}, and the
decay-rate bound for the truncation constant.

Usage:
    python3 scripts/verify_identities.py
"""
import math

from hkcount.arakelov import (
    geer_schoof_bound_check,
    h0,
    maruyama_residue_check,
    prop5_identity_check,
    xi_integral,
)
from hkcount.constants import xi_K, zetaP_numeric, zetaP_theta


def main() -> int:
    bad = 0

    worst = max(abs(h0(x / 100.0) - h0(-x / 100.0) - x / 100.0)
                for x in range(-500, 501))
    ok = worst <= 1e-12
    bad += not ok
    print(f"{'ok ' if ok else 'BAD'} reflection identity, worst |err| = {worst:.2e}")

    for s in (2.0, 3.0, 5.0):
        err = abs(xi_integral(s) - 2 * xi_K(s))
        ok = err <= 1e-8
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} xi integral at s = {s}: |err| = {err:.2e}")

    for n, s in ((1, 4.0), (1, 6.0), (2, 4.0)):
        lhs, rhs, diff = prop5_identity_check(n, s)
        ok = abs(diff) <= 1e-6
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} integral identity n={n} s={s}: "
              f"lhs = {lhs:.10f}, diff = {diff:.2e}")

    res = maruyama_residue_check()
    err = abs(res - 6 / math.pi)
    ok = err <= 1e-3
    bad += not ok
    print(f"{'ok ' if ok else 'BAD'} residue at s = 2: {res:.6f} vs 6/pi, "
          f"|err| = {err:.2e}")

    for m, s in ((1, 4.0), (1, 6.0), (2, 6.0)):
        d = abs(zetaP_numeric(m, s, 1e-5) - zetaP_theta(m, s))
        ok = d <= 2e-5
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} direct vs theta Z_(P^{m})({s}): "
              f"|diff| = {d:.2e}")

    ok, beta = geer_schoof_bound_check([-x / 10.0 for x in range(5, 51)])
    bad += not ok
    print(f"{'ok ' if ok else 'BAD'} decay bound: beta_obs = {beta:.5f} <= 2.001")

    print(f"\n{'all checks passed' if bad == 0 else f'{bad} check(s) FAILED'}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
