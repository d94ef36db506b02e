"""Exact arithmetic in the nine imaginary quadratic fields of class number one.

A field is identified by the positive integer q with discriminant -q,
q in {3, 4, 7, 8, 11, 19, 43, 67, 163}.  Its Heegner point is
z_q = mu + i*lambda with mu = 0 (q = 4, 8) or 1/2 (q odd) and
lambda = sqrt(q)/2.  {1, z_q} is an integral basis of the ring of
integers, and every formula here is arranged around the integer identity

    4*N(u + r*z_q) = (2u + two_mu*r)^2 + q*r^2,

so that no rational or floating arithmetic is ever needed for norms,
representation counts, or congruence conditions.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

CLASS_NUMBER_ONE_Q = (3, 4, 7, 8, 11, 19, 43, 67, 163)


@dataclass(frozen=True)
class Discriminant:
    """One of the nine fields: q > 0 with field discriminant -q."""

    q: int
    two_mu: int       # 2*mu, so 0 for q = 4, 8 and 1 otherwise
    unit_count: int   # number of units in the ring of integers

    def __post_init__(self) -> None:
        if self.q not in CLASS_NUMBER_ONE_Q:
            raise ValueError(f"q={self.q} is not a class-number-one discriminant")
        assert (self.two_mu == 0) == (self.q in (4, 8))
        if self.q % 2 == 1:
            assert self.q % 4 == 3
        assert self.unit_count == (6 if self.q == 3 else 4 if self.q == 4 else 2)

    @property
    def z_norm(self) -> int:
        """|z_q|^2, always an integer: (q + two_mu)/4."""
        return (self.q + self.two_mu) // 4

    @property
    def z(self) -> complex:
        """The Heegner point z_q as binary64 complex."""
        return complex(self.two_mu / 2.0, math.sqrt(self.q) / 2.0)

    @property
    def ramified_prime(self) -> int:
        return 2 if self.q % 2 == 0 else self.q

    def units(self) -> list["AlgebraicInt"]:
        if self.q == 3:
            coords = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
        elif self.q == 4:
            coords = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        else:
            coords = [(1, 0), (-1, 0)]
        return [AlgebraicInt(u, r, self) for u, r in coords]

    def ramified_generator(self) -> "AlgebraicInt":
        """An element of norm equal to the ramified prime."""
        if self.q % 2 == 1:
            return AlgebraicInt(-1, 2, self)   # i*sqrt(q) = 2 z_q - 1
        if self.q == 4:
            return AlgebraicInt(1, 1, self)    # 1 + i
        return AlgebraicInt(0, 1, self)        # i*sqrt(2) = z_8


_FIELDS = {q: Discriminant(q, 0 if q in (4, 8) else 1,
                           6 if q == 3 else 4 if q == 4 else 2)
           for q in CLASS_NUMBER_ONE_Q}


def field(q: int) -> Discriminant:
    try:
        return _FIELDS[q]
    except KeyError:
        raise ValueError(f"q={q} is not one of {CLASS_NUMBER_ONE_Q}") from None


def all_fields() -> list[Discriminant]:
    return [_FIELDS[q] for q in CLASS_NUMBER_ONE_Q]


@dataclass(frozen=True)
class AlgebraicInt:
    """u + r*z_q in the basis {1, z_q} of the ring of integers."""

    u: int
    r: int
    field: Discriminant

    def norm(self) -> int:
        n4 = (2 * self.u + self.field.two_mu * self.r) ** 2 + self.field.q * self.r ** 2
        assert n4 % 4 == 0
        return n4 // 4

    def conj(self) -> "AlgebraicInt":
        return AlgebraicInt(self.u + self.field.two_mu * self.r, -self.r, self.field)

    def __mul__(self, other: "AlgebraicInt") -> "AlgebraicInt":
        f = self.field
        assert f is other.field or f == other.field
        u1, r1, u2, r2 = self.u, self.r, other.u, other.r
        return AlgebraicInt(u1 * u2 - r1 * r2 * f.z_norm,
                            u1 * r2 + u2 * r1 + f.two_mu * r1 * r2, f)

    @property
    def two_re(self) -> int:
        """2 * Re(u + r z_q), an exact integer."""
        return 2 * self.u + self.field.two_mu * self.r

    def to_complex(self) -> complex:
        return complex(self.two_re / 2.0, self.r * math.sqrt(self.field.q) / 2.0)

    def angle(self) -> float:
        """Principal argument of the element as a point of the complex plane."""
        return math.atan2(self.r * math.sqrt(self.field.q), self.two_re)


# ---------------------------------------------------------------------------
# Kronecker symbol and the field character chi_q = (-q / .)

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def chi(fld: Discriminant, n: int) -> int:
    """The real character of the field: +1 split, -1 inert, 0 ramified."""
    return kronecker(-fld.q, n)


def chi_period(fld: Discriminant) -> int:
    return 8 if fld.q == 8 else fld.q


def chi_table(fld: Discriminant) -> np.ndarray:
    """chi on residues modulo its period, for vectorized lookups."""
    per = chi_period(fld)
    return np.array([chi(fld, i) for i in range(per)], dtype=np.int64)


# ---------------------------------------------------------------------------
# Factorization: cached prime table + SPF table for small inputs,
# deterministic Miller-Rabin / Pollard rho for large cofactors.

_PRIME_TABLE_LIMIT = 10 ** 7
_SPF_LIMIT = 1 << 21

_cache_lock = threading.Lock()
_prime_table: np.ndarray | None = None
_spf_table: np.ndarray | None = None


def _primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def prime_table() -> np.ndarray:
    """Primes up to 10^7 (built once; concurrent builds race benignly)."""
    global _prime_table
    tbl = _prime_table
    if tbl is None:
        with _cache_lock:
            if _prime_table is None:
                _prime_table = _primes_up_to(_PRIME_TABLE_LIMIT)
            tbl = _prime_table
    return tbl


def _spf() -> np.ndarray:
    global _spf_table
    tbl = _spf_table
    if tbl is None:
        with _cache_lock:
            if _spf_table is None:
                n = _SPF_LIMIT
                spf = np.zeros(n + 1, dtype=np.int32)
                for p in range(2, isqrt(n) + 1):
                    if spf[p] == 0:
                        s = spf[p * p::p]
                        s[s == 0] = p
                        spf[p * p::p] = s
                rest = spf == 0
                spf[rest] = np.arange(n + 1, dtype=np.int32)[rest]
                _spf_table = spf
            tbl = _spf_table
    return tbl


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as (prime, exponent) pairs, ascending."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    if n < _SPF_LIMIT:
        spf = _spf()
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        out.sort()
        return out
    out = []
    for p in prime_table():
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        # cofactor beyond the table: split with rho until prime
        stack = [n]
        found: dict[int, int] = {}
        while stack:
            m = stack.pop()
            if is_probable_prime(m):
                found[m] = found.get(m, 0) + 1
                continue
            d = _pollard_rho(m)
            stack.extend((d, m // d))
        out.extend(sorted(found.items()))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Representation counts and element enumeration

_r_count_cache: dict[tuple[int, int], int] = {}
_R_COUNT_CACHE_MAX = 1 << 20


def r_count_from_factors(fld: Discriminant, factors: list[tuple[int, int]]) -> int:
    """unit_count * sum of chi over divisors, from a factorization."""
    tot = 1
    for p, e in factors:
        c = chi(fld, p)
        if c == 1:
            tot *= e + 1
        elif c == -1 and e % 2 == 1:
            return 0
    return fld.unit_count * tot


def r_count(fld: Discriminant, M: int) -> int:
    """Number of algebraic integers of norm M (M >= 1)."""
    if M < 1:
        raise ValueError("r_count expects M >= 1")
    key = (fld.q, M)
    hit = _r_count_cache.get(key)
    if hit is not None:
        return hit
    val = r_count_from_factors(fld, factorize(M))
    if len(_r_count_cache) < _R_COUNT_CACHE_MAX:
        _r_count_cache[key] = val
    return val


def enumerate_norm(fld: Discriminant, M: int) -> list[AlgebraicInt]:
    """All u + r z_q of norm M by direct solve of the quadratic in u.

    Deterministic order: r ascending, then u ascending.  This is the
    slow, assumption-free path; elements_of_norm() is the multiplicative
    fast path and the two are cross-checked in the test suite.
    """
    if M < 1:
        raise ValueError("enumerate_norm expects M >= 1")
    tm = fld.two_mu
    out = []
    rmax = isqrt(4 * M // fld.q)
    for r in range(-rmax, rmax + 1):
        d = 4 * M - fld.q * r * r
        if d < 0:
            continue
        w = isqrt(d)
        if w * w != d:
            continue
        for tw in ((w,) if w == 0 else (w, -w)):
            if (tw - tm * r) % 2 == 0:
                out.append(AlgebraicInt((tw - tm * r) // 2, r, fld))
    out.sort(key=lambda a: (a.r, a.u))
    return out


_split_gen_cache: dict[tuple[int, int], tuple[int, int]] = {}


def split_generator(fld: Discriminant, p: int) -> AlgebraicInt:
    """One element of norm p for a split prime p."""
    key = (fld.q, p)
    hit = _split_gen_cache.get(key)
    if hit is not None:
        return AlgebraicInt(hit[0], hit[1], fld)
    tm = fld.two_mu
    for r in range(1, isqrt(4 * p // fld.q) + 1):
        d = 4 * p - fld.q * r * r
        w = isqrt(d)
        if w * w == d and (w - tm * r) % 2 == 0:
            u = (w - tm * r) // 2
            _split_gen_cache[key] = (u, r)
            return AlgebraicInt(u, r, fld)
    raise ValueError(f"{p} is not split for q={fld.q}")


def elements_of_norm(fld: Discriminant, M: int,
                     factors: list[tuple[int, int]] | None = None) -> list[AlgebraicInt]:
    """All elements of norm M, composed from prime elements.

    Unique factorization makes the unit * product expansion hit every
    element exactly once, so the result has length r_count(M) with no
    deduplication.  Cost is O(r_count(M)) after factorizing M, which is
    what makes radius sweeps at desk scale feasible.
    """
    if factors is None:
        factors = factorize(M)
    base = [AlgebraicInt(1, 0, fld)]
    scalar = 1
    for p, e in factors:
        c = chi(fld, p)
        if c == -1:
            if e % 2:
                return []
            scalar *= p ** (e // 2)
        elif c == 0:
            a = AlgebraicInt(1, 0, fld)
            g = fld.ramified_generator()
            for _ in range(e):
                a = a * g
            base = [b * a for b in base]
        else:
            pi = split_generator(fld, p)
            pic = pi.conj()
            pows = [AlgebraicInt(1, 0, fld)]
            for _ in range(e):
                pows.append(pows[-1] * pi)
            cpows = [AlgebraicInt(1, 0, fld)]
            for _ in range(e):
                cpows.append(cpows[-1] * pic)
            base = [b * (pows[j] * cpows[e - j]) for b in base for j in range(e + 1)]
    out = []
    for un in fld.units():
        for b in base:
            el = un * b
            out.append(AlgebraicInt(el.u * scalar, el.r * scalar, fld))
    return out


def b_indicator(fld: Discriminant, n: int) -> bool:
    """True iff n is a norm: every inert prime divides n to even order."""
    if n < 1:
        raise ValueError("b_indicator expects n >= 1")
    return all(e % 2 == 0 for p, e in factorize(n) if chi(fld, p) == -1)


def b_indicator_from_factors(fld: Discriminant, factors: list[tuple[int, int]]) -> bool:
    return all(e % 2 == 0 for p, e in factors if chi(fld, p) == -1)


def omega_pair(fld: Discriminant, M: int) -> tuple[int, int]:
    """(distinct, with-multiplicity) counts of split primes dividing M."""
    if M < 1:
        raise ValueError("omega_pair expects M >= 1")
    om = big = 0
    for p, e in factorize(M):
        if chi(fld, p) == 1:
            om += 1
            big += e
    return om, big


def residue_m(fld: Discriminant, M: int) -> int:
    """The residue class m fixing the congruence 2y = 2m (mod q).

    q odd: least m >= 0 with m^2 = M (mod q).  q = 8: m = 1 for odd M,
    m = 0 for M = 0, 2 (mod 8), m = 2 for M = 4, 6 (mod 8).  q = 4: only
    the parity of m matters; M = 2 (mod 4) has no square root mod 4 but
    every element of such norm has odd y, so m = 1 there (m = 0 only
    when 4 | M).
    """
    q = fld.q
    if q == 8:
        if M % 2 == 1:
            return 1
        return 0 if M % 8 in (0, 2) else 2
    if q == 4:
        return 0 if M % 4 == 0 else 1
    for m in range(q):
        if (m * m - M) % q == 0:
            return m
    raise ValueError(f"M={M} is not a square modulo {q}; not a norm")


def restricted_elements(fld: Discriminant, M: int,
                        factors: list[tuple[int, int]] | None = None) -> list[AlgebraicInt]:
    """Elements of norm M satisfying 2*Re = 2m (mod q)."""
    els = elements_of_norm(fld, M, factors)
    if not els:
        return []
    m2 = 2 * residue_m(fld, M)
    q = fld.q
    return [a for a in els if (a.two_re - m2) % q == 0]


_r_star_cache: dict[tuple[int, int], int] = {}


def r_star(fld: Discriminant, M: int) -> int:
    """Congruence-restricted representation count.

    Computed as a direct count of restricted elements and checked against
    the closed form: r_count(M) when gcd(M, q) > 1, half of it otherwise.
    """
    if M < 1:
        raise ValueError("r_star expects M >= 1")
    key = (fld.q, M)
    hit = _r_star_cache.get(key)
    if hit is not None:
        return hit
    if not b_indicator(fld, M):
        return 0
    direct = len(restricted_elements(fld, M))
    rc = r_count(fld, M)
    closed = rc if gcd(M, fld.q) > 1 else rc // 2
    assert direct == closed, (fld.q, M, direct, closed)
    if len(_r_star_cache) < _R_COUNT_CACHE_MAX:
        _r_star_cache[key] = direct
    return direct


def v_k(fld: Discriminant, M: int, k: int) -> float:
    """Normalized absolute Weyl sum of order k over restricted elements.

    Zero by definition when the restricted count is zero.  Angles are
    evaluated in binary64; the sum has few terms and unit-modulus
    summands, so the error stays far below the 1e-9 budget asserted in
    the tests.
    """
    if M < 1:
        raise ValueError("v_k expects M >= 1")
    if not b_indicator(fld, M):
        return 0.0
    els = restricted_elements(fld, M)
    if not els:
        return 0.0
    s = sum(cmath.exp(1j * k * a.angle()) for a in els)
    return abs(s) / len(els)


def weyl_profile(fld: Discriminant, M: int, K: int) -> list[float]:
    """[v_1(M), ..., v_K(M)] from a single element enumeration."""
    if not b_indicator(fld, M):
        return [0.0] * K
    els = restricted_elements(fld, M)
    if not els:
        return [0.0] * K
    phases = [cmath.exp(1j * a.angle()) for a in els]
    out = []
    powers = list(phases)
    for _ in range(K):
        out.append(abs(sum(powers)) / len(els))
        powers = [p * ph for p, ph in zip(powers, phases)]
    return out
