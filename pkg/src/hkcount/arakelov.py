"""Numeric laboratory for the lattice theta-sum identities over the rationals.

For a rank-1 lattice (Z, scale e^{-x}) the effective-section count is the
theta sum h0(x) = log sum_{n in Z} exp(-pi n^2 e^{-2x}).  This module
verifies, to stated tolerances and by independent code paths:

  * the additivity identity h0(x) - h0(-x) = x (Poisson summation /
    functional equation of the theta function);
  * the direct-sum identity phi(E + F) = phi(E) + phi(F) + phi(E) phi(F)
    and its elementary-symmetric-polynomial expansion;
  * the integral representation of the completed zeta,
      2 xi(s) = I(-s) + I(s-1) + 1/(s-1) - 1/s,
    with I(c) = integral over x <= 0 of e^{c x} phi(x) dx;
  * the rank-(n+1) generalization tying the same integrals to the height
    zeta function of P^n;
  * the simple pole of Z_{P^1} at s = 2 with residue 6/pi (Richardson
    extrapolation);
  * the double-exponential decay bound phi(x) <= beta e^{-pi e^{-2x}}
    for x <= 0.

Quadratures are adaptive Gauss-Kronrod on [-X0, 0]; the truncated tails
over (-inf, -X0] are bounded through the decay bound above by incomplete
gamma functions and added as certified (numerically negligible) terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .constants import (
    TooCloseToPoleError,
    xi_K,
    zetaP1_closed,
    zetaP_numeric,
    zetaP_theta,
)


class QuadratureFailure(ArithmeticError):
    """Adaptive quadrature could not certify the requested tolerance."""


@dataclass(frozen=True)
class ArakelovDivisorQ:
    """A divisor class over Q is determined by its real degree."""

    degree: float


@dataclass(frozen=True)
class ScaledLatticeSum:
    """Direct sum of rank-1 lattices (Z, c_i * e^{-x}) with scales c_i > 0."""

    scales: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.scales or any(c <= 0 for c in self.scales):
            raise ValueError("scales must be a nonempty tuple of positive reals")


# Direct summation is used for |x| <= this threshold so that the identity
# h0(x) - h0(-x) = x is a genuine two-sided check there; beyond it the
# functional equation is applied to avoid summing ~e^x near-unit terms.
_DIRECT_LIMIT = 6.0

# theta tail: 2 sum_{n > n0} e^{-pi n^2 t} <= 3 e^{-pi n0^2 t} once
# pi n0^2 t >= 1; choosing pi n0^2 t >= 45 pushes it below 1e-19.
_TAIL_EXPONENT = 45.0


def _theta_excess(t: float) -> float:
    """2 sum_{n >= 1} exp(-pi n^2 t) for t > 0 (that is, theta(t) - 1)."""
    n0 = math.isqrt(int(_TAIL_EXPONENT / (math.pi * t))) + 1
    return 2.0 * sum(math.exp(-math.pi * n * n * t) for n in range(n0, 0, -1))


def h0(x: float) -> float:
    """h0(x) = log sum_{n in Z} exp(-pi n^2 e^{-2x}).

    Direct truncated summation for |x| <= 6 (error below 1e-19 by the
    Gaussian tail bound); for larger |x| the theta functional equation
    theta(1/t) = sqrt(t) theta(t) gives h0(x) = x + h0(-x).
    """
    if x > _DIRECT_LIMIT:
        return x + h0(-x)
    return math.log1p(_theta_excess(math.exp(-2.0 * x)))


def phi(x: float) -> float:
    """phi(x) = e^{h0(x)} - 1, the weighted count of nonzero sections.

    For x <= 0 this is the positive theta excess itself (no cancellation);
    for x > 0 the functional equation form e^x (1 + phi(-x)) - 1 is exact
    and avoids summing thousands of near-unit Gaussian terms.
    """
    if x > 0:
        return math.exp(x) * (1.0 + phi(-x)) - 1.0
    return _theta_excess(math.exp(-2.0 * x))


def phi_oplus(scales: ScaledLatticeSum, x: float) -> float:
    """phi of the direct sum +_i (Z, c_i e^{-x}).

    Computed two ways -- the telescoped product prod_i (1 + phi_i) - 1 and
    the expansion into elementary symmetric polynomials of the phi_i --
    which must agree to 1e-12 (relative); disagreement raises.
    """
    if isinstance(scales, (tuple, list)):
        scales = ScaledLatticeSum(tuple(scales))
    phis = [phi(x - math.log(c)) for c in scales.scales]
    product = 1.0
    for p in phis:
        product *= 1.0 + p
    product -= 1.0
    # elementary symmetric polynomials via the generating polynomial
    coeffs = [1.0]
    for p in phis:
        coeffs = [c + p * (coeffs[i - 1] if i else 0.0)
                  for i, c in enumerate(coeffs)] + [p * coeffs[-1]]
    symmetric = sum(coeffs[1:])
    if abs(product - symmetric) > 1e-12 * max(1.0, abs(product)):
        raise ArithmeticError(
            f"direct-sum identity violated: {product} vs {symmetric}")
    return product


_X0 = 3.0  # quadrature cutoff; phi decays like e^{-pi e^{-2x}} beyond it
_GS_BETA = 2.001  # certified constant in phi(x) <= beta e^{-pi e^{-2x}}, x <= 0


def _certified_tail(c: float, rank: int = 1) -> float:
    """Bound on integral over x <= -X0 of e^{c x} ((1+phi)^rank - 1) dx.

    Using (1+phi)^rank - 1 <= rank (1+phi(-X0))^{rank-1} phi and
    phi <= beta e^{-pi e^{-2x}}, the substitution u = e^{-2x} turns the
    c = -s branch into an incomplete gamma; for any c the integrand is
    dominated by the c = -|c| case on x <= -X0 < 0 up to e^{(c+|c|)(-X0)},
    so a single gamma bound covers both exponents.
    """
    import mpmath as mp

    front = rank * _GS_BETA * (1.0 + phi(-_X0)) ** (rank - 1)
    a = abs(c)
    # integral over x <= -X0 of e^{a |x|} e^{-pi e^{-2x}} dx
    #   = (1/2) pi^{-a/2} Gamma(a/2, pi e^{2 X0})
    with mp.workdps(30):
        g = mp.gammainc(mp.mpf(a) / 2, mp.pi * mp.e ** (2 * _X0))
        bound = front * 0.5 * float(mp.pi ** (-mp.mpf(a) / 2) * g)
    return bound


def _pic_integrals(c1: float, c2: float, rank: int,
                   quad_tol: float) -> float:
    """integral over [-inf, 0] of (e^{c1 x} + e^{c2 x}) ((1+phi)^rank - 1) dx,
    as Gauss-Kronrod on [-X0, 0] plus certified tails."""
    def integrand(x: float) -> float:
        # expm1/log1p keep (1+phi)^rank - 1 accurate where phi is far below
        # machine epsilon yet the e^{cx} factor is astronomically large
        g = math.expm1(rank * math.log1p(phi(x)))
        return (math.exp(c1 * x) + math.exp(c2 * x)) * g

    # e^{cx} phi(x) peaks at x = -log(-c / 2 pi)/2 for c < -2 pi; handing
    # the interior peak to the subdivision logic keeps large |c| accurate
    peaks = sorted({max(-_X0 + 1e-9, -0.5 * math.log(-c / (2.0 * math.pi)))
                    for c in (c1, c2) if c < -2.0 * math.pi})
    val, err = quad(integrand, -_X0, 0.0, epsabs=quad_tol / 4.0,
                    epsrel=1e-10, limit=500, points=peaks or None)
    if err > max(quad_tol, 1e-8 * abs(val)):
        raise QuadratureFailure(
            f"quadrature error estimate {err:.3e} exceeds tolerance")
    return val + _certified_tail(c1, rank) + _certified_tail(c2, rank)


def xi_integral(s: float, quad_tol: float = 1e-10) -> float:
    """2 xi(s) through its integral representation, s > 1:

        2 xi(s) = int_{-inf}^0 (e^{-s x} + e^{(s-1) x}) phi(x) dx
                  + 1/(s-1) - 1/s.

    Independent of the Euler product route in the constants module; the
    two must agree to quadrature accuracy.
    """
    if s <= 1:
        raise ValueError(f"xi_integral needs s > 1, got {s}")
    return _pic_integrals(-s, s - 1.0, 1, quad_tol) + 1.0 / (s - 1.0) - 1.0 / s


def prop5_identity_check(n: int, s: float,
                         quad_tol: float = 1e-9) -> tuple[float, float, float]:
    """Check the rank-(n+1) integral identity for the height zeta of P^n:

      lhs = 2 xi(s) Z_{P^n}(s)
      rhs = int_{-inf}^0 (e^{-s x} + e^{(s-n-1) x}) ((1+phi(x))^{n+1} - 1) dx
            + 1/(s-n-1) - 1/s.

    Returns (lhs, rhs, lhs - rhs).  The lhs zeta value comes from direct
    point summation when feasible within the work budget, otherwise from
    the theta-accelerated route -- always a code path disjoint from the
    quadrature on the rhs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if s <= n + 1:
        raise ValueError(f"identity needs s > n + 1, got s = {s}")
    try:
        z = zetaP_numeric(n, s, tol=1e-6)
    except TooCloseToPoleError:
        z = zetaP_theta(n, s)
    lhs = 2.0 * xi_K(s) * z
    rhs = (_pic_integrals(-s, s - (n + 1.0), n + 1, quad_tol)
           + 1.0 / (s - (n + 1.0)) - 1.0 / s)
    return lhs, rhs, lhs - rhs


def maruyama_residue_check() -> float:
    """Residue of Z_{P^1} at its simple pole s = 2, by extrapolation.

    Evaluates (s - 2) Z_{P^1}(s) at s = 2 + 10^{-k}, k = 1..6, and
    Richardson/Neville-extrapolates to s = 2.  The exact residue is
    6/pi (equivalently 1/(2 xi(2)), twice the projective-line leading
    constant 3/pi).
    """
    hs = [10.0 ** (-k) for k in range(1, 7)]
    vals = [h * zetaP1_closed(2.0 + h) for h in hs]
    # Neville tableau for the polynomial through (h_i, f(h_i)) at h = 0
    tab = list(vals)
    for level in range(1, len(hs)):
        for i in range(len(hs) - 1 - level, -1, -1):
            j = i + level
            tab[i] = (hs[j] * tab[i] - hs[i] * tab[i + 1]) / (hs[j] - hs[i])
    return tab[0]


def geer_schoof_bound_check(grid) -> tuple[bool, float]:
    """Verify phi(x) <= beta e^{-pi e^{-2x}} on a grid of x <= 0.

    Returns (all ratios bounded by the certified beta, observed sup of
    phi(x) e^{pi e^{-2x}}).  Points where phi underflows to 0 satisfy the
    bound trivially.  The sup is attained at x = 0 and is just above 2.
    """
    beta_obs = 0.0
    for x in grid:
        if x > 0:
            raise ValueError("grid must lie in (-inf, 0]")
        p = phi(x)
        if p == 0.0:
            continue
        # p > 0 representable forces pi e^{-2x} < ~745, so no overflow:
        ratio = math.exp(math.log(p) + math.pi * math.exp(-2.0 * x))
        beta_obs = max(beta_obs, ratio)
    return beta_obs <= _GS_BETA, beta_obs
