"""Symbolic model of projectivized split bundles over projective space.

The varieties handled here are the smooth projective toric varieties of
Picard rank 2: for integers r >= 1, t >= 2 and a nondecreasing tuple
0 <= a_1 <= ... <= a_r, the variety X_d(a_1, ..., a_r) is the
projectivization of O + O(-a_r) + O(a_1 - a_r) + ... + O(a_{r-1} - a_r)
over P^{t-1}, of dimension d = r + t - 1.  Everything in this module is
exact integer/rational arithmetic: the fan, the Picard basis {h, f}, the
anticanonical class, bigness, restriction to the projective subbundle F,
the alpha-constant, growth-exponent data and the stratification chain.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Optional, Union


class NotBigError(ValueError):
    """The requested bundle class is not big (count would be infinite)."""


class CaseTag(Enum):
    """Which of the two growth exponents dominates."""

    EQUAL = "EqualCase"
    LAMBDA_DOMINATES = "LambdaDominates"
    MU_DOMINATES = "MuDominates"


@dataclass(frozen=True)
class LineBundleClass:
    """Class lam*h + mu*f in the rank-2 Picard basis {h, f}.

    h is the relative hyperplane class O_X(1), f the pullback of the
    hyperplane class of the base P^{t-1}.
    """

    lam: int
    mu: int

    @classmethod
    def parse(cls, text: str) -> "LineBundleClass":
        m = re.fullmatch(r"\s*(-?\d+)\s*,\s*(-?\d+)\s*", text)
        if m is None:
            raise ValueError(f"bad bundle literal {text!r}; expected 'lam,mu'")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.lam},{self.mu}"


@dataclass(frozen=True)
class ProjectiveSpace:
    """Terminal stratum carrier: plain P^n with an O(k) twist kept separately."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("projective space dimension must be >= 0")

    def __str__(self) -> str:
        return f"P^{self.n}"


@dataclass(frozen=True)
class HKVariety:
    """The combinatorial model (r, t, a) with derived data.

    r: rank of the projectivized bundle minus one (fiber is P^r);
    t: base is P^{t-1};
    a: nondecreasing nonnegative twists (a_1, ..., a_r).
    """

    r: int
    t: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.t < 2:
            raise ValueError("t must be >= 2")
        if len(self.a) != self.r:
            raise ValueError(f"expected {self.r} twist entries, got {len(self.a)}")
        if any(x < 0 for x in self.a):
            raise ValueError("twists must be nonnegative")
        if any(self.a[i] > self.a[i + 1] for i in range(self.r - 1)):
            raise ValueError("twists must be nondecreasing")

    @property
    def d(self) -> int:
        return self.r + self.t - 1

    @property
    def fiber_weights(self) -> tuple[int, ...]:
        """(b_0, ..., b_r) with b_0 = 0 and b_i = a_r - a_{i-1} (a_0 := 0).

        b_i is the base twist of the i-th summand in the fiber metric; b_1
        = a_r is the largest.
        """
        ar = self.a[-1]
        return (0,) + tuple(ar - x for x in (0,) + self.a[:-1])

    @property
    def abs_a(self) -> int:
        return sum(self.a)

    @property
    def n_x(self) -> int:
        """Number of indices i with a_i = a_r (multiplicity of the top twist)."""
        return sum(1 for x in self.a if x == self.a[-1])

    @classmethod
    def parse(cls, text: str) -> "HKVariety":
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*:\s*((?:-?\d+\s*,\s*)*-?\d+)\s*", text)
        if m is None:
            raise ValueError(f"bad variety literal {text!r}; expected 'r,t:a1,...,ar'")
        r, t = int(m.group(1)), int(m.group(2))
        a = tuple(int(x) for x in m.group(3).split(","))
        return cls(r, t, a)

    def __str__(self) -> str:
        return f"{self.r},{self.t}:{','.join(str(x) for x in self.a)}"


@dataclass(frozen=True)
class Fan:
    """Rays (primitive integer vectors in Z^d) and maximal cones (index sets)."""

    rays: tuple[tuple[int, ...], ...]
    maximal_cones: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ExponentData:
    """Growth-exponent data of a big class: a(L) = max(lambda_l, mu_l)."""

    lambda_l: Fraction
    mu_l: Fraction
    a_l: Fraction
    log_exponent: int  # 1 iff lambda_l == mu_l, else 0
    case: CaseTag


@dataclass(frozen=True)
class Stratum:
    """One piece of the stratification chain.

    `space` is an HKVariety or a ProjectiveSpace; `bundle` is the restricted
    class (LineBundleClass) or, on a projective-space stratum, the integer
    twist k of O(k).  `open_part` is True when the stratum is the good open
    subset of `space` (fiber coordinate y_0 != 0) and False when the whole
    space is taken.
    """

    space: Union[HKVariety, ProjectiveSpace]
    bundle: Union[LineBundleClass, int]
    open_part: bool
    big: bool


def _int_det(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def build_fan(X: HKVariety) -> Fan:
    """Rays and maximal cones of X in Z^{t-1} + Z^r.

    Base rays: u_1, ..., u_{t-1} the standard basis of the first block,
    u_0 = -sum u_i.  Fiber rays: e_1, ..., e_r the standard basis of the
    second block, e_0 = -sum e_j.  The twisted ray is
    w_0 = u_0 - a_r e_1 + (a_1 - a_r) e_2 + ... + (a_{r-1} - a_r) e_r,
    and w_i = u_i for 1 <= i <= t-1.  Rays are stored in the fixed order
    (w_0, ..., w_{t-1}, e_0, ..., e_r); each maximal cone omits one w and
    one e.
    """
    r, t, a = X.r, X.t, X.a
    d = X.d

    def base_vec(i: int) -> list[int]:
        v = [0] * d
        if i == 0:
            for k in range(t - 1):
                v[k] = -1
        else:
            v[i - 1] = 1
        return v

    def fiber_vec(j: int) -> list[int]:
        v = [0] * d
        if j == 0:
            for k in range(r):
                v[t - 1 + k] = -1
        else:
            v[t - 1 + j - 1] = 1
        return v

    w0 = base_vec(0)
    ar = a[-1]
    twists = [-ar] + [a[k] - ar for k in range(r - 1)]  # coefficients of e_1..e_r
    for j in range(r):
        w0[t - 1 + j] += twists[j]

    rays = [tuple(w0)] + [tuple(base_vec(i)) for i in range(1, t)]
    rays += [tuple(fiber_vec(j)) for j in range(r + 1)]

    cones = []
    for j in range(t):  # omitted w index
        for i in range(r + 1):  # omitted e index
            idx = [k for k in range(t) if k != j]
            idx += [t + k for k in range(r + 1) if k != i]
            cones.append(tuple(idx))
    return Fan(rays=tuple(rays), maximal_cones=tuple(cones))


def fan_is_smooth(fan: Fan) -> bool:
    """All rays primitive and every maximal cone unimodular (det = +-1)."""
    for ray in fan.rays:
        g = 0
        for x in ray:
            g = gcd(g, x)
        if g != 1:
            return False
    for cone in fan.maximal_cones:
        mat = [list(fan.rays[i]) for i in cone]
        if abs(_int_det(mat)) != 1:
            return False
    return True


def anticanonical(X: HKVariety) -> LineBundleClass:
    """-K_X = (r+1) h + ((r+1) a_r + t - |a|) f."""
    return LineBundleClass(X.r + 1, (X.r + 1) * X.a[-1] + X.t - X.abs_a)


def is_big(L: LineBundleClass) -> bool:
    """Big classes are the interior of the effective cone: lam > 0 and mu > 0."""
    return L.lam > 0 and L.mu > 0


def restrict_to_F(
    X: HKVariety, L: LineBundleClass
) -> tuple[Union[HKVariety, ProjectiveSpace], Union[LineBundleClass, int]]:
    """Restrict L to the subbundle F = {y_0 = 0}.

    For r >= 2, F is the one-step-smaller variety of the same base with
    the top twist dropped, and L restricts to
    (lam, mu - lam*(a_r - a_{r-1})).  For r = 1, F is the base P^{t-1}
    itself and L restricts to the twist mu - a_1*lam.  Non-big results
    are returned as-is; callers decide what bigness means for them.
    """
    lam, mu = L.lam, L.mu
    if X.r >= 2:
        Xp = HKVariety(X.r - 1, X.t, X.a[:-1])
        return Xp, LineBundleClass(lam, mu - lam * (X.a[-1] - X.a[-2]))
    return ProjectiveSpace(X.t - 1), mu - X.a[0] * lam


def alpha_constant(X: HKVariety) -> Fraction:
    """Effective-cone volume constant 1 / ((r+1) ((r+1) a_r + t - |a|))."""
    return Fraction(1, (X.r + 1) * ((X.r + 1) * X.a[-1] + X.t - X.abs_a))


def exponents(X: HKVariety, L: LineBundleClass) -> ExponentData:
    """Exponent pair of a big class: lambda_l = (r+1)/lam and
    mu_l = ((r+1) a_r + t - |a|)/mu; the count grows like
    B^{max} (log B)^{[lambda_l == mu_l]}.
    """
    if not is_big(L):
        raise NotBigError(f"bundle {L} is not big on {X}")
    lam_l = Fraction(X.r + 1, L.lam)
    mu_l = Fraction((X.r + 1) * X.a[-1] + X.t - X.abs_a, L.mu)
    if lam_l == mu_l:
        case = CaseTag.EQUAL
    elif lam_l > mu_l:
        case = CaseTag.LAMBDA_DOMINATES
    else:
        case = CaseTag.MU_DOMINATES
    return ExponentData(
        lambda_l=lam_l,
        mu_l=mu_l,
        a_l=max(lam_l, mu_l),
        log_exponent=1 if lam_l == mu_l else 0,
        case=case,
    )


def _bundle_is_big(space: Union[HKVariety, ProjectiveSpace],
                   bundle: Union[LineBundleClass, int]) -> bool:
    if isinstance(space, ProjectiveSpace):
        return bundle > 0
    return is_big(bundle)


def decompose(
    X: HKVariety,
    L: Optional[LineBundleClass] = None,
    variant: bool = False,
) -> tuple[Stratum, ...]:
    """Stratification chain of X carrying the iterated restrictions of L.

    Default mode peels the good open subset off at every step down to the
    base projective space:
        [U(X), U(X'), ..., P^{t-1} (whole)].
    Variant mode stops early with a whole product stratum
    P^{t-1} x P^j as soon as the remaining twists are all zero (which
    happens exactly when a_1 = ... = a_j = 0 < a_{j+1}).  L defaults to
    the anticanonical class of X.
    """
    if L is None:
        L = anticanonical(X)
    strata: list[Stratum] = []
    space: Union[HKVariety, ProjectiveSpace] = X
    bundle: Union[LineBundleClass, int] = L
    while isinstance(space, HKVariety):
        if variant and space.a[-1] == 0:
            # remaining variety is the product P^{t-1} x P^r, taken whole
            strata.append(Stratum(space, bundle, open_part=False,
                                  big=_bundle_is_big(space, bundle)))
            return tuple(strata)
        strata.append(Stratum(space, bundle, open_part=True,
                              big=_bundle_is_big(space, bundle)))
        space, bundle = restrict_to_F(space, bundle)
    strata.append(Stratum(space, bundle, open_part=False,
                          big=_bundle_is_big(space, bundle)))
    return tuple(strata)


def strongly_accumulates(X: HKVariety, L: LineBundleClass) -> Optional[bool]:
    """Does the subbundle F carry asymptotically more points than U?

    True iff max(lambda_l, mu_l) < mu_{L|F}, where mu_{L|F} is the base
    exponent of the restricted class.  Returns None (not applicable) when
    the restriction of L to F is not big, in which case F has infinitely
    many points of bounded height and the comparison is moot.
    """
    exp = exponents(X, L)  # raises NotBigError if L itself is not big
    sub_space, sub_bundle = restrict_to_F(X, L)
    if not _bundle_is_big(sub_space, sub_bundle):
        return None
    if isinstance(sub_space, ProjectiveSpace):
        mu_lf = Fraction(X.t, sub_bundle)
    else:
        mu_lf = exponents(sub_space, sub_bundle).mu_l
    return exp.a_l < mu_lf
