"""Exact enumeration and counting of rational points of bounded height.

Counting on the good open subset U factors through the base: the fiber
count over a base point Q depends only on Nq = H(Q)^2, so the driver
builds a histogram of base norms and evaluates each distinct norm once.
Fiber vectors are counted by a recursive box walk on the integer
quadratic form sum c_i y_i^2 <= S_max (largest coefficient first), with
the innermost coordinate resolved by a Mobius/inclusion-exclusion
coprimality count instead of a per-point gcd.  All bound comparisons are
integer-exact; no floating point enters any count.

Counts on the subbundle F are always computed by reduction through
restrict_to_F (so the restriction lemmas are exercised on every F count);
the direct F enumeration below exists solely as a test oracle.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, log
from typing import Iterator, Optional, Sequence, Union

from .geometry import (
    HKVariety,
    LineBundleClass,
    NotBigError,
    ProjectiveSpace,
    is_big,
    restrict_to_F,
)
from .heights import HKRationalPoint, ProjectivePoint, Region


class DegenerateFitError(ValueError):
    """Not enough (or collinear) data for the requested fit."""


@dataclass(frozen=True)
class CountRequest:
    variety: Union[HKVariety, ProjectiveSpace]
    bundle: Union[LineBundleClass, int]
    bound: Fraction
    region: Region = Region.WHOLE
    threads: int = 1

    def __post_init__(self) -> None:
        if Fraction(self.bound) <= 0:
            raise ValueError("bound must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class CountResult:
    count: int
    elapsed: float
    points_visited: int


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    log_coefficient: float
    coefficient: float  # the companion pure-power coefficient of the 2-param fit


def iroot(n: int, k: int) -> int:
    """Exact floor(n ** (1/k)) for n >= 0, k >= 1 (Newton on integers)."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = int(round(n ** (1.0 / k))) + 1
    while x ** k > n:
        x = ((k - 1) * x + n // x ** (k - 1)) // k
    while (x + 1) ** k <= n:
        x += 1
    return x


def _squared_cap(B: Union[int, Fraction]) -> tuple[int, int]:
    """(p, q) with B^2 = p/q for an exact rational bound."""
    b2 = Fraction(B) ** 2
    return b2.numerator, b2.denominator


# ---------------------------------------------------------------------------
# projective space P^n
# ---------------------------------------------------------------------------

def _canonical_vectors(dim: int, n2max: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Canonical primitive integer vectors of length dim with norm^2 <= n2max.

    Canonical means: gcd 1 and first nonzero coordinate positive.  Yields
    (vector, norm^2) in deterministic lexicographic order.
    """
    coords = [0] * dim

    def rec(i: int, rem: int, g: int, leading_zero: bool) -> Iterator[tuple[tuple[int, ...], int]]:
        if i == dim - 1:
            top = isqrt(rem)
            lo = 0 if leading_zero else -top
            for y in range(lo, top + 1):
                if gcd(g, y) == 1:
                    coords[i] = y
                    yield tuple(coords), n2max - rem + y * y
            return
        top = isqrt(rem)
        lo = 0 if leading_zero else -top
        for y in range(lo, top + 1):
            coords[i] = y
            yield from rec(i + 1, rem - y * y, gcd(g, y), leading_zero and y == 0)

    yield from rec(0, n2max, 0, True)


def enum_projective(n: int, B: Union[int, Fraction]) -> Iterator[ProjectivePoint]:
    """Stream every point of P^n(Q) of height <= B exactly once."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p, q = _squared_cap(B)
    n2max = p // q
    for vec, _ in _canonical_vectors(n + 1, n2max):
        yield ProjectivePoint(vec)


def projective_norm_histogram(n: int, n2max: int) -> dict[int, int]:
    """Counts of canonical primitive vectors in Z^{n+1} grouped by norm^2."""
    hist: dict[int, int] = {}
    for _, m in _canonical_vectors(n + 1, n2max):
        hist[m] = hist.get(m, 0) + 1
    return hist


def count_enum_projective(n: int, B: Union[int, Fraction]) -> int:
    """N(P^n, B) by direct enumeration (reference path)."""
    return sum(1 for _ in enum_projective(n, B))


def _ball_count(k: int, m: int) -> int:
    """Number of integer vectors in Z^k with norm^2 <= m (origin included)."""
    if m < 0:
        return 0
    if k == 1:
        return 2 * isqrt(m) + 1
    total = _ball_count(k - 1, m)
    x = 1
    while x * x <= m:
        total += 2 * _ball_count(k - 1, m - x * x)
        x += 1
    return total


def _mobius_sieve(n: int) -> list[int]:
    mu = [1] * (n + 1)
    primes: list[int] = []
    is_comp = [False] * (n + 1)
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def _count_projective_n2(n: int, n2max: int) -> int:
    """N(P^n, .) with the bound given as max allowed norm^2 (exact Mobius sieve)."""
    if n2max < 1:
        return 0
    dmax = isqrt(n2max)
    mu = _mobius_sieve(dmax)
    total = 0
    for d in range(1, dmax + 1):
        if mu[d] == 0:
            continue
        total += mu[d] * (_ball_count(n + 1, n2max // (d * d)) - 1)
    assert total % 2 == 0
    return total // 2


def count_projective_moebius(n: int, B: Union[int, Fraction]) -> int:
    """Independent counting oracle: Mobius sieve over lattice-ball counts."""
    p, q = _squared_cap(B)
    return _count_projective_n2(n, p // q)


# ---------------------------------------------------------------------------
# coprimality counting for the innermost fiber coordinate
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _squarefree_divisors(g: int) -> tuple[tuple[int, int], ...]:
    """(divisor, Mobius sign) pairs over the radical of g."""
    divs = [(1, 1)]
    x = g
    p = 2
    while p * p <= x:
        if x % p == 0:
            divs += [(d * p, -s) for d, s in divs]
            while x % p == 0:
                x //= p
        p += 1 if p == 2 else 2
    if x > 1:
        divs += [(d * x, -s) for d, s in divs]
    return tuple(divs)


def _coprime_count(g: int, m: int) -> int:
    """#{1 <= y <= m : gcd(y, g) = 1}."""
    if m <= 0:
        return 0
    return sum(s * (m // d) for d, s in _squarefree_divisors(g))


# ---------------------------------------------------------------------------
# fiber counting on the good open subset
# ---------------------------------------------------------------------------

def _count_fiber_good(cs: Sequence[int], smax: int) -> tuple[int, int]:
    """Canonical primitive (y_0, ..., y_r) with y_0 >= 1 and sum c_i y_i^2 <= smax.

    Returns (count, rows_visited).  The last coordinate is resolved in
    closed form by the coprimality count; middle coordinates use the +-
    symmetry of the form.
    """
    r = len(cs) - 1
    if r == 0:
        return (1 if cs[0] <= smax else 0), 1
    clast = cs[-1]
    visited = 0

    def count_last(rem: int, g: int) -> int:
        nonlocal visited
        visited += 1
        m = isqrt(rem // clast)
        if g == 1:
            return 2 * m + 1
        return 2 * _coprime_count(g, m)

    def rec(i: int, rem: int, g: int) -> int:
        if i == r:
            return count_last(rem, g)
        ci = cs[i]
        total = rec(i + 1, rem, g)  # y_i = 0 keeps the running gcd
        top = isqrt(rem // ci)
        for y in range(1, top + 1):
            total += 2 * rec(i + 1, rem - ci * y * y, gcd(g, y))
        return total

    count = 0
    c0 = cs[0]
    top0 = isqrt(smax // c0) if c0 <= smax else 0
    for y0 in range(1, top0 + 1):
        count += rec(1, smax - c0 * y0 * y0, y0)
    return count, visited


def _fiber_params(X_weights: tuple[int, ...], ar: int, lam: int, mu: int,
                  p: int, q: int, m: int) -> Optional[tuple[tuple[int, ...], int]]:
    """Weights and cap of the fiber form over a base point of norm^2 = m.

    The exact height condition S^lam * q * m^mu <= p * m^{lam*ar} becomes
    S <= iroot(floor(p * m^{lam*ar} / (q * m^mu)), lam).
    """
    cap = (p * m ** (lam * ar)) // (q * m ** mu)
    if cap < 1:
        return None
    smax = iroot(cap, lam)
    cs = tuple(m ** (ar - bi) for bi in X_weights)
    return cs, smax


def _good_chunk_worker(args: tuple) -> tuple[int, int]:
    """Process-pool worker: count one chunk of base-norm histogram items."""
    weights, ar, lam, mu, p, q, items = args
    count = 0
    visited = 0
    for m, mult in items:
        params = _fiber_params(weights, ar, lam, mu, p, q, m)
        if params is None:
            continue
        cs, smax = params
        c, v = _count_fiber_good(cs, smax)
        count += mult * c
        visited += v
    return count, visited


def _count_good_open(X: HKVariety, L: LineBundleClass, B: Fraction,
                     threads: int) -> tuple[int, int]:
    if not is_big(L):
        raise NotBigError(f"bundle {L} is not big on {X}; the count is infinite")
    p, q = _squared_cap(B)
    lam, mu = L.lam, L.mu
    # On U the fiber height is >= 1, so Nq^mu <= B^2 bounds the base.
    n2max = iroot(p // q, mu)
    hist = sorted(projective_norm_histogram(X.t - 1, n2max).items())
    weights, ar = X.fiber_weights, X.a[-1]
    if threads == 1 or len(hist) < 4 * threads:
        return _good_chunk_worker((weights, ar, lam, mu, p, q, tuple(hist)))
    chunks = [hist[i::threads] for i in range(threads)]
    args = [(weights, ar, lam, mu, p, q, tuple(ch)) for ch in chunks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_good_chunk_worker, args))
    return sum(c for c, _ in parts), sum(v for _, v in parts)


def count_hk(req: CountRequest) -> CountResult:
    """Exact N(region, H_L, B).

    GoodOpen loops over base norms; SubbundleF reduces through
    restrict_to_F (recursively for r >= 2, down to a twisted projective
    count for r = 1); Whole is the exact sum of the two.  The result is
    independent of the thread count: per-chunk integer subtotals are
    summed, an associative and commutative reduction.
    """
    t0 = time.perf_counter()
    B = Fraction(req.bound)
    space, bundle = req.variety, req.bundle

    if isinstance(space, ProjectiveSpace):
        k = int(bundle)
        if k <= 0:
            raise NotBigError(f"twist O({k}) on {space} is not big; the count is infinite")
        p, q = _squared_cap(B)
        # Nq^k <= B^2  <=>  Nq <= iroot(floor(B^2), k)
        n2max = iroot(p // q, k)
        c = _count_projective_n2(space.n, n2max)
        return CountResult(c, time.perf_counter() - t0, c)

    assert isinstance(space, HKVariety) and isinstance(bundle, LineBundleClass)
    if req.region is Region.GOOD_OPEN:
        c, v = _count_good_open(space, bundle, B, req.threads)
        return CountResult(c, time.perf_counter() - t0, v)
    if req.region is Region.SUBBUNDLE_F:
        sub_space, sub_bundle = restrict_to_F(space, bundle)
        sub = count_hk(CountRequest(sub_space, sub_bundle, B,
                                    Region.WHOLE, req.threads))
        return CountResult(sub.count, time.perf_counter() - t0, sub.points_visited)
    # Whole = GoodOpen + SubbundleF, exact partition
    good, visited = _count_good_open(space, bundle, B, req.threads)
    sub_space, sub_bundle = restrict_to_F(space, bundle)
    sub = count_hk(CountRequest(sub_space, sub_bundle, B, Region.WHOLE, req.threads))
    return CountResult(good + sub.count, time.perf_counter() - t0,
                       visited + sub.points_visited)


# ---------------------------------------------------------------------------
# streaming / direct oracles (slow paths)
# ---------------------------------------------------------------------------

def _canonical_qform_vectors(cs: Sequence[int], smax: int) -> Iterator[tuple[int, ...]]:
    """Canonical primitive y with sum c_i y_i^2 <= smax (all coordinates free)."""
    dim = len(cs)
    coords = [0] * dim

    def rec(i: int, rem: int, g: int, leading_zero: bool) -> Iterator[tuple[int, ...]]:
        if i == dim:
            if g == 1:
                yield tuple(coords)
            return
        top = isqrt(rem // cs[i])
        lo = 0 if leading_zero else -top
        for y in range(lo, top + 1):
            coords[i] = y
            yield from rec(i + 1, rem - cs[i] * y * y, gcd(g, y), leading_zero and y == 0)

    yield from rec(0, smax, 0, True)


def enum_hk_points(X: HKVariety, L: LineBundleClass, B: Union[int, Fraction],
                   region: Region = Region.WHOLE) -> Iterator[HKRationalPoint]:
    """Stream points of height <= B (slow reference path, used by --stream).

    For region Whole / SubbundleF the bigness of the restricted bundle is
    required, otherwise the stream would be infinite.
    """
    B = Fraction(B)
    if region in (Region.GOOD_OPEN, Region.WHOLE) and not is_big(L):
        raise NotBigError(f"bundle {L} is not big on {X}")
    p, q = _squared_cap(B)
    lam, mu = L.lam, L.mu
    ar = X.a[-1]
    weights = X.fiber_weights
    if region is Region.GOOD_OPEN:
        base_cap = iroot(p // q, mu)
    else:
        kf = mu - lam * ar  # height exponent of the smallest-weight F direction
        if kf <= 0:
            raise NotBigError(f"restriction of {L} to F is not big on {X}")
        base_cap = iroot(p // q, kf) if region is Region.SUBBUNDLE_F else \
            max(iroot(p // q, mu), iroot(p // q, kf))
    for vec, m in _canonical_vectors(X.t, base_cap):
        params = _fiber_params(weights, ar, lam, mu, p, q, m)
        if params is None:
            continue
        cs, smax = params
        Q = ProjectivePoint(vec)
        for y in _canonical_qform_vectors(cs, smax):
            if region is Region.GOOD_OPEN and y[0] == 0:
                continue
            if region is Region.SUBBUNDLE_F and y[0] != 0:
                continue
            yield HKRationalPoint(base=Q, fiber=ProjectivePoint(y))


def count_subbundle_direct(X: HKVariety, L: LineBundleClass,
                           B: Union[int, Fraction]) -> int:
    """Test oracle: count F-points (y_0 = 0) by direct twisted enumeration."""
    return sum(1 for _ in enum_hk_points(X, L, B, Region.SUBBUNDLE_F))


# ---------------------------------------------------------------------------
# sweeps and fits
# ---------------------------------------------------------------------------

def sweep(req: CountRequest, grid: Sequence[Union[int, Fraction]],
          prediction=None) -> list[dict]:
    """Counts over an increasing grid of bounds, with optional predicted column.

    `prediction` is an AsymptoticPrediction (module constants); predicted(B)
    = C * B^a * (log B)^e and ratio = count / predicted.
    """
    vals = [Fraction(b) for b in grid]
    if any(b2 <= b1 for b1, b2 in zip(vals, vals[1:])):
        raise ValueError("grid must be strictly increasing")
    rows = []
    for b in vals:
        res = count_hk(CountRequest(req.variety, req.bundle, b, req.region, req.threads))
        row = {"B": b, "count": res.count, "predicted": None, "ratio": None}
        if prediction is not None:
            bb = float(b)
            pred = prediction.constant * bb ** float(prediction.a_l)
            if prediction.log_exponent:
                pred *= log(bb) ** prediction.log_exponent
            row["predicted"] = pred
            row["ratio"] = res.count / pred if pred > 0 else float("nan")
        rows.append(row)
    return rows


def estimate_exponent(table: Sequence, exponent: Optional[float] = None) -> ExponentFit:
    """Log-log slope plus a two-parameter fit N ~ C B^a log B + C2 B^a.

    `table` rows are (B, count) pairs or dicts with those keys.  The slope
    comes from least squares on (log B, log N); the two-parameter fit uses
    the given exponent `a` (default: slope rounded to the nearest integer)
    and returns C as log_coefficient and C2 as coefficient.
    """
    import numpy as np

    pairs = []
    for row in table:
        if isinstance(row, dict):
            pairs.append((float(row["B"]), float(row["count"])))
        else:
            pairs.append((float(row[0]), float(row[1])))
    if len(pairs) < 4:
        raise DegenerateFitError("need at least 4 grid points")
    bs = np.array([b for b, _ in pairs])
    ns = np.array([n for _, n in pairs])
    if np.any(bs <= 1) or np.any(ns <= 0):
        raise DegenerateFitError("fit needs B > 1 and positive counts")
    slope, _ = np.polyfit(np.log(bs), np.log(ns), 1)
    a = float(exponent) if exponent is not None else float(round(slope))
    design = np.column_stack([bs ** a * np.log(bs), bs ** a])
    sol, *_ = np.linalg.lstsq(design, ns, rcond=None)
    return ExponentFit(slope=float(slope), log_coefficient=float(sol[0]),
                       coefficient=float(sol[1]))
