"""Angular statistics of circle point sets: discrepancy, explicit
Erdos-Turan bounds through the Weyl sums v_k, density surveys over all
radii up to a height, and the exact convolution-sum form of the
hyperbolic circle count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

from .circles import Radius, _row_families, _row_quadratic, stabilizer_size
from .quadfield import (Discriminant, b_indicator_from_factors, factorize,
                        r_count, r_count_from_factors, restricted_elements,
                        v_k, weyl_profile)

#: Exponent from the equidistribution rate: log(pi/2)/log 2.
RATE_EXPONENT = math.log(math.pi / 2) / math.log(2)


def circle_discrepancy(angles_sorted: list[float]) -> float:
    """Supremum over circular arcs of |empirical mass - arc length / 2pi|.

    The sup is attained by arcs with endpoints at data angles, taken
    closed (point-heavy side) or open (length-heavy side).  The O(N^2)
    scan over endpoint pairs realizes that directly; for N > 512 an
    equivalent O(N) form on the sorted sequence is used.  Both paths are
    property-tested equal.
    """
    n = len(angles_sorted)
    if n == 0:
        raise ValueError("discrepancy of an empty angle set")
    if n > 512:
        return _discrepancy_fast(angles_sorted)
    return _discrepancy_pairs(angles_sorted)


def _normalized(angles_seq: list[float]) -> list[float]:
    return sorted((a % (2 * math.pi)) / (2 * math.pi) for a in angles_seq)


def _discrepancy_pairs(angles_seq: list[float]) -> float:
    ph_all = _normalized(angles_seq)
    n = len(ph_all)
    # compress ties (repeated angles from the unit action) into multiplicities
    ph: list[float] = []
    cnt: list[int] = []
    for a in ph_all:
        if ph and a == ph[-1]:
            cnt[-1] += 1
        else:
            ph.append(a)
            cnt.append(1)
    m = len(ph)
    cum = [0]
    for c in cnt:
        cum.append(cum[-1] + c)
    best = 0.0
    for i in range(m):
        for j in range(m):
            if i <= j:
                closed = cum[j + 1] - cum[i]
                inner = max(0, cum[j] - cum[i + 1])
            else:
                closed = n - (cum[i] - cum[j + 1])
                inner = n - cum[i + 1] + cum[j]
            ln = (ph[j] - ph[i]) % 1.0 if i != j else 0.0
            # closed arc [ph_i, ph_j] versus its length
            best = max(best, closed / n - ln)
            # open arc (ph_i, ph_j): i == j degenerates to the punctured circle
            if i == j:
                best = max(best, 1.0 - (n - cnt[i]) / n)
            else:
                best = max(best, ln - inner / n)
    return best


def _discrepancy_fast(angles_seq: list[float]) -> float:
    ph = _normalized(angles_seq)
    n = len(ph)
    us = [m / n - ph[m] for m in range(n)]
    return max(us) - min(us) + 1.0 / n


def default_harmonic_cutoff(two_n: int) -> int:
    return max(1, math.ceil(math.log(two_n)))


def et_bound(fld: Discriminant, radius: Radius, K: int | None = None) -> float:
    """Explicit Erdos-Turan discrepancy bound 1/(K+1) + 3 sum v_k/k.

    The constant pair (1, 3) makes the bound a true inequality against
    circle_discrepancy, which the tests assert radius by radius.
    """
    if K is None:
        K = default_harmonic_cutoff(radius.two_n)
    if K < 1:
        raise ValueError("K >= 1 required")
    prof = weyl_profile(fld, radius.norm_product, K)
    return 1.0 / (K + 1) + 3.0 * sum(v / k for k, v in enumerate(prof, start=1))


@dataclass(frozen=True)
class DiscrepancyReport:
    two_n: int
    point_count: int
    discrepancy: float
    et_bound: float
    gamma_count: int

    def __post_init__(self) -> None:
        assert 0.0 <= self.discrepancy <= 1.0
        assert self.discrepancy <= self.et_bound + 1e-12


def gamma_count(radius: Radius) -> int:
    """|matrices of this radius| = (c4/4) r(n_minus) r(n_plus), exact."""
    fld = radius.field
    g4 = radius.c4 * r_count(fld, radius.n_minus) * r_count(fld, radius.n_plus)
    assert g4 % 4 == 0
    return g4 // 4


def discrepancy_report(radius: Radius, K: int | None = None) -> DiscrepancyReport:
    fld = radius.field
    els = restricted_elements(fld, radius.norm_product)
    angs = sorted(a.angle() % (2 * math.pi) for a in els)
    d = circle_discrepancy(angs)
    return DiscrepancyReport(radius.two_n, len(angs), d,
                             et_bound(fld, radius, K), gamma_count(radius))


# ---------------------------------------------------------------------------
# Survey over all radii up to a height

@dataclass(frozen=True)
class SurveyRow:
    two_n: int
    omega: int
    Omega: int
    in_B_flat: bool
    log2_r_star: float
    point_count: int
    gamma_count: int
    discrepancy: float


@dataclass(frozen=True)
class SurveySummary:
    q: int
    X: float
    count: int
    count_logx_over_2x: float
    omega_quantiles: tuple[float, float, float]       # of omega / loglog X
    log2_rstar_quantiles: tuple[float, float, float]  # of log2 r* / loglog M
    omega_outlier_fraction: float   # omega outside (1 +- 0.5) loglog X
    frac_fast_eps01: float   # share with D_n <= gamma^{-(C - 0.1)}
    frac_fast_eps02: float   # share with D_n <= gamma^{-(C - 0.2)}
    degenerate: bool         # too few rows for the quantiles to mean much


def _survey_row(fld: Discriminant, two_n: int) -> SurveyRow | None:
    q = fld.q
    n_plus, n_minus = (two_n + q) // 2, (two_n - q) // 2
    f1, f2 = factorize(n_plus), factorize(n_minus)
    if not (b_indicator_from_factors(fld, f1) and b_indicator_from_factors(fld, f2)):
        return None
    merged: dict[int, int] = {}
    for p, e in f1 + f2:
        merged[p] = merged.get(p, 0) + e
    factors = sorted(merged.items())
    M = n_plus * n_minus
    om = sum(1 for p, _ in factors if _chi_split(fld, p))
    Om = sum(e for p, e in factors if _chi_split(fld, p))
    els = restricted_elements(fld, M, factors)
    angs = sorted(a.angle() % (2 * math.pi) for a in els)
    d = circle_discrepancy(angs)
    g4 = (Radius(fld, two_n).c4
          * r_count_from_factors(fld, f2) * r_count_from_factors(fld, f1))
    if q % 2 == 1:
        flat = gcd(two_n, q) == 1
    else:
        flat = gcd(two_n // 2, q) == 1
    return SurveyRow(two_n, om, Om, flat, math.log2(len(els)),
                     len(els), g4 // 4, d)


def _chi_split(fld: Discriminant, p: int) -> bool:
    from .quadfield import chi
    return chi(fld, p) == 1


def _quantiles(vals: list[float]) -> tuple[float, float, float]:
    s = sorted(vals)
    n = len(s)
    return (s[n // 4], s[n // 2], s[(3 * n) // 4])


def survey(fld: Discriminant, X: float, threads: int | None = None
           ) -> tuple[list[SurveyRow], SurveySummary]:
    """Per-radius rows over all radii n <= X, with distribution aggregates."""
    if X < fld.q / 2:
        raise ValueError("X below the minimal radius")
    cands = range(fld.q + 2, int(2 * X) + 1, 2)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = [r for r in ex.map(lambda t: _survey_row(fld, t), cands) if r is not None]
    else:
        rows = [r for t in cands if (r := _survey_row(fld, t)) is not None]
    count = len(rows)
    llx = math.log(math.log(X)) if X > math.e else float("nan")
    degenerate = count < 8 or not (llx > 0)
    if count:
        om_q = _quantiles([r.omega / llx for r in rows]) if not degenerate else (0.0, 0.0, 0.0)
        M_of = lambda r: ((r.two_n + fld.q) // 2) * ((r.two_n - fld.q) // 2)
        rs_q = (_quantiles([r.log2_r_star / math.log(math.log(M_of(r)))
                            for r in rows if M_of(r) > 15])
                if not degenerate else (0.0, 0.0, 0.0))
        outlier = (sum(not (0.5 * llx <= r.omega <= 1.5 * llx) for r in rows) / count
                   if not degenerate else 0.0)
        f1 = sum(r.discrepancy <= r.gamma_count ** (-(RATE_EXPONENT - 0.1)) for r in rows) / count
        f2 = sum(r.discrepancy <= r.gamma_count ** (-(RATE_EXPONENT - 0.2)) for r in rows) / count
    else:
        om_q = rs_q = (0.0, 0.0, 0.0)
        outlier = f1 = f2 = 0.0
    ratio = count * math.log(X) / (2 * X) if X > 1 else float("nan")
    return rows, SurveySummary(fld.q, X, count, ratio, om_q, rs_q, outlier,
                               f1, f2, degenerate)


# ---------------------------------------------------------------------------
# The sharp-set factorization of v_k (radii whose two_n shares a factor with q)

def in_sharp_set(radius: Radius) -> bool:
    q = radius.field.q
    if q % 2 == 1:
        return radius.two_n % q == 0
    return gcd(radius.two_n // 2, q) > 1


def sharp_factorization_check(fld: Discriminant, radius: Radius, k: int,
                              tol: float = 1e-9) -> bool:
    """Check the v_k factorization over a sharp-set radius.

    Odd q: for even k the exact identity
    v_k(M) = v_k(n_plus/q) * v_k(n_minus/q) is verified; for odd k the left
    side vanishes identically (q | M forces the residue class m = 0, making
    the restricted set closed under negation), so the vanishing and the
    one-sided inequality are verified instead.  Even q: at least one pair
    of 2-powers from sharp_power_hits must satisfy the analogue.
    """
    if not in_sharp_set(radius):
        raise ValueError("radius is not in the sharp set")
    q = fld.q
    M = radius.norm_product
    lhs = v_k(fld, M, k)
    if q % 2 == 1:
        if radius.n_plus % q or radius.n_minus % q:
            raise ValueError("sharp radius with non-integral quotients")
        rhs = v_k(fld, radius.n_plus // q, k) * v_k(fld, radius.n_minus // q, k)
        if k % 2 == 0:
            return abs(lhs - rhs) <= tol
        return lhs <= 1e-12 and lhs <= rhs + tol
    hits = sharp_power_hits(fld, radius, k, tol)
    return bool(hits)


def sharp_power_hits(fld: Discriminant, radius: Radius, k: int,
                     tol: float = 1e-9) -> list[tuple[int, int]]:
    """Even-q analogue: which 2-power pairs (a, b) satisfy the identity.

    Tries v_k(M) = v_k(n_plus / 2^a) * v_k(n_minus / 2^b) for a, b in
    {1, 2} wherever the quotients are integral, and reports the matches.
    """
    if fld.q % 2:
        raise ValueError("power report applies to even q")
    M = radius.norm_product
    lhs = v_k(fld, M, k)
    hits = []
    for a in (1, 2):
        if radius.n_plus % (1 << a):
            continue
        for b in (1, 2):
            if radius.n_minus % (1 << b):
                continue
            rhs = v_k(fld, radius.n_plus >> a, k) * v_k(fld, radius.n_minus >> b, k)
            if abs(lhs - rhs) <= tol:
                hits.append((a, b))
    return hits


# ---------------------------------------------------------------------------
# Hyperbolic circle problem as a convolution sum

@dataclass(frozen=True)
class CircleSumResult:
    q: int
    x: float
    total: int              # centre term + convolution sum
    convolution_part: int   # sum over radii q < two_n <= q*x
    centre_term: int        # matrices at distance zero (the stabilizer)
    direct_count: int | None  # brute-force matrix count, when computed


def circle_problem_sum(fld: Discriminant, x: float,
                       compute_direct: bool | None = None) -> CircleSumResult:
    """Count matrices with cosh(distance) <= x as a sum of r_count products.

    The convolution sum runs over two_n in (q, q*x]; the distance-zero
    matrices (the stabilizer, unit_count/2 of them) are counted separately
    since the sum's natural two_n = q term would need a norm-zero factor.
    The per-radius summand is (c4/4) r(n_minus) r(n_plus); the total times
    4 is accumulated and asserted divisible.
    """
    if x < 1:
        raise ValueError("x >= 1 required")
    q = fld.q
    lim = int(math.floor(q * x + 1e-9))
    tot4 = 0
    for two_n in range(q + 2, lim + 1, 2):
        n_plus, n_minus = (two_n + q) // 2, (two_n - q) // 2
        r1 = r_count_from_factors(fld, factorize(n_minus))
        if r1 == 0:
            continue
        r2 = r_count_from_factors(fld, factorize(n_plus))
        tot4 += Radius(fld, two_n).c4 * r1 * r2
    assert tot4 % 4 == 0
    conv = tot4 // 4
    centre = stabilizer_size(fld)
    if compute_direct is None:
        compute_direct = x <= 10 ** 3
    direct = direct_cosh_count(fld, x) if compute_direct else None
    if direct is not None:
        assert conv + centre == direct, (q, x, conv + centre, direct)
    return CircleSumResult(q, x, conv + centre, conv, centre, direct)


def direct_cosh_count(fld: Discriminant, x: float) -> int:
    """Brute-force count of matrices with cosh(distance to z_q) <= x."""
    if x > 10 ** 3:
        raise ValueError("direct count capped at x <= 10^3")
    q = fld.q
    max_two_n = int(math.floor(q * x + 1e-9))
    if max_two_n < q:
        return 0
    target = 8 * max_two_n
    cnt = 0
    for a0, b0, c, d in _row_families(fld, max_two_n):
        A, B, C = _row_quadratic(fld, a0, b0, c, d)
        disc = B * B - 4 * A * (C - target)
        if disc < 0:
            continue
        w = isqrt(disc)
        lo = (-B - w) // (2 * A) - 1
        hi = (-B + w) // (2 * A) + 1
        for t in range(lo, hi + 1):
            if A * t * t + B * t + C <= target:
                cnt += 1
    return cnt


def matrix_angle_discrepancy(radius: Radius) -> float:
    """Discrepancy of the matrix-side angles, via the conformal disc map.

    Every matrix of the radius is pushed through the Mobius action and the
    disc map in binary64, an entirely separate path from the integer point
    coordinates; each point angle then appears unit_count/2 times, which
    leaves the discrepancy unchanged.  The suite asserts agreement with the
    point-side value.
    """
    from .circles import enumerate_pairs, pairs_to_matrices
    from .halfplane import apply_mobius, disc_map
    fld = radius.field
    mats = pairs_to_matrices(radius, enumerate_pairs(radius))
    angs = sorted(
        math.atan2(w.imag, w.real) % (2 * math.pi)
        for w in (disc_map(fld, apply_mobius(g, fld.z)) for g in mats))
    return circle_discrepancy(angs)
