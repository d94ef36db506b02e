"""Lattice points on a fixed hyperbolic circle around a Heegner point.

Three cross-validating descriptions of the same finite set:

  * matrices gamma with arithmetic radius two_n (brute-force oracle over
    bottom rows, quadratic solve for the top row);
  * pairs of algebraic integers of norms (two_n +- q)/2 subject to the
    congruence system (fast path; bijective with the matrices);
  * integer points (h, Y) on q h^2 + Y^2 = two_n^2 - q^2 with
    Y = two_n (mod q) (the point set; each point hit unit_count/2 times).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from math import gcd, isqrt

from .halfplane import (UnimodularMatrix, arithmetic_radius, congruence_holds,
                        coords_from_split, integer_coords, matrix_from_split,
                        _radius16)
from .quadfield import (AlgebraicInt, Discriminant, b_indicator_from_factors,
                        enumerate_norm, factorize, r_count)


@dataclass(frozen=True)
class Radius:
    """A scaled arithmetic radius two_n = 2R >= q with its derived constants."""

    field: Discriminant
    two_n: int
    n_plus: int = dc_field(init=False)
    n_minus: int = dc_field(init=False)
    c4: int = dc_field(init=False)   # 4 * c_n, in {1, 2}

    def __post_init__(self) -> None:
        q = self.field.q
        if self.two_n < q or (self.two_n - q) % 2:
            raise ValueError(f"two_n={self.two_n} invalid for q={q}")
        object.__setattr__(self, "n_plus", (self.two_n + q) // 2)
        object.__setattr__(self, "n_minus", (self.two_n - q) // 2)
        if q % 2 == 0:
            c4 = 2 if self.two_n % 4 == 0 else 1
        else:
            c4 = 2 if self.two_n % q == 0 else 1
        object.__setattr__(self, "c4", c4)

    @property
    def norm_product(self) -> int:
        """n_plus * n_minus = n^2 - 4 lambda^4, the point-set norm."""
        return self.n_plus * self.n_minus


@dataclass(frozen=True)
class CirclePoint:
    """Integer point (h, Y) = (x/lambda, 2y) of the circle of radius two_n."""

    h: int
    Y: int
    field: Discriminant
    two_n: int

    def __post_init__(self) -> None:
        q = self.field.q
        assert q * self.h * self.h + self.Y * self.Y == self.two_n ** 2 - q * q
        assert (self.Y - self.two_n) % q == 0

    def xy(self) -> tuple[float, float]:
        return (self.h * math.sqrt(self.field.q) / 2.0, self.Y / 2.0)

    def display_angle(self) -> float:
        """arg(x + iy) of the plotted point."""
        return math.atan2(self.Y, self.h * math.sqrt(self.field.q)) % (2 * math.pi)

    def weyl_angle(self) -> float:
        """arg(y + ix) of the associated algebraic integer."""
        return math.atan2(self.h * math.sqrt(self.field.q), self.Y) % (2 * math.pi)


@dataclass(frozen=True)
class SplitPair:
    """Canonical (u + r z_q, t + s z_q) with norms (n_plus, n_minus).

    Quotient by simultaneous sign flip: the first nonzero coordinate of
    (r, u, s, t) is positive.
    """

    first: AlgebraicInt
    second: AlgebraicInt

    @property
    def rust(self) -> tuple[int, int, int, int]:
        return (self.first.r, self.first.u, self.second.r, self.second.u)


def _canonical_rust(v: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return (-v[0], -v[1], -v[2], -v[3])
    return v


def radii_up_to(fld: Discriminant, x: float) -> list[Radius]:
    """All radii with 2R <= 2x whose circle is nonempty, ascending.

    A candidate two_n > q of the right parity carries points iff
    n_plus * n_minus is a norm, which splits over the factors.
    """
    if x < fld.q / 2:
        raise ValueError("x below the minimal radius q/2")
    out = []
    lim = int(2 * x)
    for two_n in range(fld.q + 2, lim + 1, 2):
        n_plus, n_minus = (two_n + fld.q) // 2, (two_n - fld.q) // 2
        if b_indicator_from_factors(fld, factorize(n_plus)) and \
           b_indicator_from_factors(fld, factorize(n_minus)):
            out.append(Radius(fld, two_n))
    return out


def enumerate_pairs(radius: Radius) -> list[SplitPair]:
    """The congruence-filtered norm pairs, one representative per sign class."""
    if radius.two_n <= radius.field.q:
        raise ValueError("two_n = q is the circle centre; no pairs")
    fld = radius.field
    seen = set()
    for a1 in enumerate_norm(fld, radius.n_plus):
        for a2 in enumerate_norm(fld, radius.n_minus):
            if congruence_holds(fld, a1.r, a1.u, a2.r, a2.u):
                seen.add(_canonical_rust((a1.r, a1.u, a2.r, a2.u)))
    out = [SplitPair(AlgebraicInt(u, r, fld), AlgebraicInt(t, s, fld))
           for (r, u, s, t) in sorted(seen)]
    for p in out:
        assert p.first.norm() == radius.n_plus and p.second.norm() == radius.n_minus
    return out


def pairs_to_matrices(radius: Radius, pairs: list[SplitPair]) -> list[UnimodularMatrix]:
    """Map pairs through the inverse transform; exact bijection onto the circle.

    Non-integrality inside matrix_from_split means the congruence filter is
    broken and is allowed to raise.
    """
    fld = radius.field
    out = []
    for p in pairs:
        g = matrix_from_split(fld, *p.rust)
        assert arithmetic_radius(fld, g) == radius.two_n
        out.append(g)
    assert len(set(out)) == len(out)
    return sorted(out)


def lattice_points(radius: Radius) -> list[CirclePoint]:
    """The circle's integer points, computed twice and compared.

    Path one pushes the matrix set through integer_coords and deduplicates
    (each point appears unit_count/2 times).  Path two solves
    q h^2 + Y^2 = two_n^2 - q^2 with Y = two_n (mod q) directly.  A
    mismatch is a hard failure, as is a count different from
    (c4/2) * r_count(n_plus * n_minus).
    """
    fld = radius.field
    if radius.two_n <= fld.q:
        raise ValueError("two_n = q is the circle centre; no points")
    pairs = enumerate_pairs(radius)
    via_pairs: dict[tuple[int, int], int] = {}
    for p in pairs:
        hy = integer_coords(fld, matrix_from_split(fld, *p.rust))
        assert hy == coords_from_split(fld, *p.rust)   # the product identity
        via_pairs[hy] = via_pairs.get(hy, 0) + 1
    direct = set(_solve_circle(fld, radius.two_n))
    if set(via_pairs) != direct:
        raise AssertionError(
            f"q={fld.q} two_n={radius.two_n}: matrix image and direct point set differ")
    mult = fld.unit_count // 2
    assert all(c == mult for c in via_pairs.values()), (fld.q, radius.two_n)
    expected2 = radius.c4 * r_count(fld, radius.norm_product)
    assert expected2 % 2 == 0 and len(direct) == expected2 // 2, \
        (fld.q, radius.two_n, len(direct), expected2 / 2)
    return [CirclePoint(h, Y, fld, radius.two_n) for (h, Y) in sorted(direct)]


def _solve_circle(fld: Discriminant, two_n: int) -> list[tuple[int, int]]:
    q = fld.q
    rhs = two_n * two_n - q * q
    out = []
    for h in range(-isqrt(rhs // q), isqrt(rhs // q) + 1):
        d = rhs - q * h * h
        w = isqrt(d)
        if w * w != d:
            continue
        for Y in ((w,) if w == 0 else (w, -w)):
            if (Y - two_n) % q == 0:
                out.append((h, Y))
    return out


def angles(radius: Radius) -> list[float]:
    """Sorted principal arguments arg(x + iy) of the circle points, in [0, 2pi)."""
    return sorted(p.display_angle() for p in lattice_points(radius))


def weyl_angles(radius: Radius) -> list[float]:
    """Sorted arguments arg(y + ix) over the same points (the Weyl-sum side)."""
    return sorted(p.weyl_angle() for p in lattice_points(radius))


# ---------------------------------------------------------------------------
# Brute-force oracle

def _row_families(fld: Discriminant, max_two_n: int):
    """Yield (a0, b0, c, d) for every bottom row that can reach radius <= max_two_n.

    The bound comes from 2 lambda^2 N(d + c z_q) = n - y <= n + sqrt(n^2 - 4 lambda^4):
    scaled, q * N(d + c z_q) <= two_n + sqrt(two_n^2 - q^2) < 2 * two_n.
    """
    tm = fld.two_mu
    q = fld.q
    lim4 = 4 * (max_two_n + isqrt(max(0, max_two_n ** 2 - q * q))) // q + 5
    for c in range(0, isqrt(lim4 // q) + 2):
        rem = lim4 - q * c * c
        if rem < 0:
            continue
        w = isqrt(rem)
        dlo = (-w - tm * c) // 2 - 1
        dhi = (w - tm * c) // 2 + 1
        for d in range(dlo, dhi + 1):
            if c == 0:
                if d != 1:
                    continue
                yield (1, 0, 0, 1)
                continue
            if gcd(c, d) != 1:
                continue
            g, a0, b0 = _ext_gcd(d, -c)
            assert a0 * d - b0 * c == 1
            yield (a0, b0, c, d)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _row_quadratic(fld: Discriminant, a0: int, b0: int, c: int, d: int) -> tuple[int, int, int]:
    """Coefficients of 16R(a0 + tc, b0 + td, c, d) as A t^2 + B t + C."""
    f0 = _radius16(fld, a0, b0, c, d)
    f1 = _radius16(fld, a0 + c, b0 + d, c, d)
    fm1 = _radius16(fld, a0 - c, b0 - d, c, d)
    A = (f1 + fm1 - 2 * f0) // 2
    B = (f1 - fm1) // 2
    return A, B, f0


def brute_force_matrices(radius: Radius) -> list[UnimodularMatrix]:
    """Independent enumeration of the matrices of radius two_n.

    Walks coprime bottom rows within the norm bound and solves the radius
    quadratic in the top-row parameter.  two_n = q returns the stabilizer
    of the Heegner point.
    """
    fld = radius.field
    if radius.two_n > 10 ** 6:
        raise ValueError("brute-force oracle capped at two_n <= 10^6")
    target = 8 * radius.two_n
    out = set()
    for a0, b0, c, d in _row_families(fld, radius.two_n):
        A, B, C = _row_quadratic(fld, a0, b0, c, d)
        disc = B * B - 4 * A * (C - target)
        if disc < 0:
            continue
        w = isqrt(disc)
        if w * w != disc:
            continue
        for tw in ((w,) if w == 0 else (w, -w)):
            num = -B + tw
            if num % (2 * A) == 0:
                t = num // (2 * A)
                g = UnimodularMatrix(a0 + t * c, b0 + t * d, c, d)
                assert arithmetic_radius(fld, g) == radius.two_n
                out.add(g)
    return sorted(out)


def brute_force_by_radius(fld: Discriminant, max_two_n: int) -> dict[int, list[UnimodularMatrix]]:
    """All matrices with radius <= max_two_n, bucketed by two_n.

    Shares the row walk across radii, so a full sweep costs no more than a
    single large-radius call.
    """
    buckets: dict[int, set[UnimodularMatrix]] = {}
    target = 8 * max_two_n
    for a0, b0, c, d in _row_families(fld, max_two_n):
        A, B, C = _row_quadratic(fld, a0, b0, c, d)
        # A t^2 + B t + C <= target on an integer interval
        disc = B * B - 4 * A * (C - target)
        if disc < 0:
            continue
        w = isqrt(disc)
        lo = (-B - w) // (2 * A) - 1
        hi = (-B + w) // (2 * A) + 1
        for t in range(lo, hi + 1):
            v = A * t * t + B * t + C
            if v <= target:
                assert v % 8 == 0
                g = UnimodularMatrix(a0 + t * c, b0 + t * d, c, d)
                buckets.setdefault(v // 8, set()).add(g)
    return {tn: sorted(ms) for tn, ms in sorted(buckets.items())}


def stabilizer_size(fld: Discriminant) -> int:
    """Matrices fixing the Heegner point: half the unit count."""
    return fld.unit_count // 2
