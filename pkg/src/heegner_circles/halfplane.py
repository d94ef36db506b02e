"""Hyperbolic geometry of the upper half-plane over the modular group.

Distances, the integer-valued scaled radius 2R attached to a matrix and a
Heegner point, the conformal map onto the unit disc, and the exact integer
coordinate systems (h, Y) and (r, u, s, t) that tie matrices to algebraic
integers.  Scale conventions, used throughout the package:

    two_n = 2R = q * cosh(distance)     (integer; parity == parity of q)
    h     = x / lambda                  (integer)
    Y     = 2 y                         (integer;  q h^2 + Y^2 = two_n^2 - q^2)
"""
from __future__ import annotations

from dataclasses import dataclass

from .quadfield import AlgebraicInt, Discriminant


@dataclass(frozen=True, order=True)
class UnimodularMatrix:
    """Element of PSL(2, Z): det = 1, sign canonicalized at construction.

    The representative of {gamma, -gamma} is the one with c > 0, or c = 0
    and d > 0, so tuple comparison of instances is comparison in PSL(2, Z).
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {(self.a, self.b, self.c, self.d)} is not 1")
        if not (self.c > 0 or (self.c == 0 and self.d > 0)):
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
            object.__setattr__(self, "d", -self.d)

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def cosh_distance(z: complex, w: complex) -> float:
    """cosh of the hyperbolic distance between two upper half-plane points."""
    if z.imag <= 0 or w.imag <= 0:
        raise ValueError("points must lie in the upper half-plane")
    return 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)


def apply_mobius(gamma: UnimodularMatrix, z: complex) -> complex:
    """(az + b) / (cz + d)."""
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    return (gamma.a * z + gamma.b) / (gamma.c * z + gamma.d)


def _radius16(fld: Discriminant, a: int, b: int, c: int, d: int) -> int:
    # 16 * R(a,b,c,d; z_q), exact; P = 4 |z_q|^2
    tm = fld.two_mu
    P = fld.q + tm
    return (4 * a * a * P + 16 * b * b + c * c * P * P + 4 * d * d * P
            + 4 * tm * (a - d) * (4 * b - c * P) - 8 * tm * (a * d + b * c))


def arithmetic_radius(fld: Discriminant, gamma: UnimodularMatrix) -> int:
    """two_n = 2R(gamma; z_q) = q * cosh(rho(z_q, gamma z_q)), exact."""
    v = _radius16(fld, *gamma.entries())
    assert v % 8 == 0
    two_n = v // 8
    assert two_n % 2 == fld.q % 2
    return two_n


def disc_map(fld: Discriminant, w: complex) -> complex:
    """Conformal map of the half-plane onto the unit disc sending z_q to 0."""
    if w.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    z = fld.z
    return 1j * (w - z) / (w - z.conjugate())


def integer_coords(fld: Discriminant, gamma: UnimodularMatrix) -> tuple[int, int]:
    """(h, Y): scaled disc-image coordinates of gamma, exact integers.

    The image of gamma z_q under disc_map, multiplied by (two_n + q)/2,
    is (h*sqrt(q) + i Y)/2.  Satisfies q h^2 + Y^2 = two_n^2 - q^2.
    """
    a, b, c, d = gamma.entries()
    tm = fld.two_mu
    two_n = arithmetic_radius(fld, gamma)
    ncd = AlgebraicInt(d, c, fld).norm()
    Y = two_n - fld.q * ncd
    h2 = a * c * (fld.q + tm) + 4 * b * d + 2 * tm * (a * d + b * c) - 2 * tm * ncd
    assert h2 % 2 == 0
    return h2 // 2, Y


def split_coordinates(fld: Discriminant, gamma: UnimodularMatrix) -> tuple[int, int, int, int]:
    """(r, u, s, t): the algebraic-integer coordinates of gamma.

    u + r z_q has norm (two_n + q)/2 and t + s z_q has norm (two_n - q)/2.
    All four are plain integers: |z_q|^2 = (q + two_mu)/4 is integral for
    every class-number-one q.
    """
    a, b, c, d = gamma.entries()
    tm = fld.two_mu
    z2 = fld.z_norm
    return (a + d, b - z2 * c - tm * d, a - d - tm * c, b + z2 * c)


def coords_from_split(fld: Discriminant, r: int, u: int, s: int, t: int) -> tuple[int, int]:
    """(h, Y) from (r,u,s,t) via the product identity y + ix = (u+rz)(t+s z-bar)."""
    tm = fld.two_mu
    h = r * t - u * s
    num = r * s * (fld.q + tm) + 4 * u * t + 2 * tm * (r * t + u * s)
    assert num % 2 == 0
    return h, num // 2


def inverse_transform_matrix(fld: Discriminant) -> list[list[int]]:
    """Integer matrix T with (a,b,c,d)^T = T (r,u,s,t)^T / q."""
    tm = fld.two_mu
    z2 = fld.z_norm
    return [
        [2 * z2 - tm, -tm, 2 * z2, tm],
        [tm * z2, 2 * z2, -tm * z2, 2 * z2 - tm],
        [-tm, -2, tm, 2],
        [2 * z2, tm, -2 * z2, -tm],
    ]


def congruence_holds(fld: Discriminant, r: int, u: int, s: int, t: int) -> bool:
    """The integrality condition on (r,u,s,t), in its reduced per-q form.

    q = 4: r = s and u = t mod 2;  q = 8: r = s mod 2 and u = t mod 4;
    odd q: r + 2u = s + 2t mod q.
    """
    q = fld.q
    if q == 4:
        return (r - s) % 2 == 0 and (u - t) % 2 == 0
    if q == 8:
        return (r - s) % 2 == 0 and (u - t) % 4 == 0
    return (r + 2 * u - s - 2 * t) % q == 0


def congruence_holds_full(fld: Discriminant, r: int, u: int, s: int, t: int) -> bool:
    """The unreduced 4x4 form of the integrality condition (test oracle)."""
    T = inverse_transform_matrix(fld)
    v = (r, u, s, t)
    return all(sum(T[i][j] * v[j] for j in range(4)) % fld.q == 0 for i in range(4))


def matrix_from_split(fld: Discriminant, r: int, u: int, s: int, t: int) -> UnimodularMatrix:
    """Invert split_coordinates.  Raises if the congruence filter was violated."""
    T = inverse_transform_matrix(fld)
    v = (r, u, s, t)
    vals = []
    for i in range(4):
        num = sum(T[i][j] * v[j] for j in range(4))
        if num % fld.q != 0:
            raise ValueError(f"(r,u,s,t)={v} does not satisfy the congruence system for q={fld.q}")
        vals.append(num // fld.q)
    return UnimodularMatrix(*vals)
