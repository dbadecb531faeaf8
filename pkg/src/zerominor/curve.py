"""Ordinary binary elliptic curves y^2 + xy = x^3 + a x^2 + b over GF(2^m)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import factorint

from . import _gf
from .field import GF2m, check_prime_modulus, gf2m

ENUMERATION_MAX_DEGREE = 28


class BudgetError(RuntimeError):
    """A brute-force routine was asked to go beyond its configured budget."""


@dataclass(frozen=True)
class Point:
    x: int = 0
    y: int = 0
    infinity: bool = False

    def __repr__(self):
        return "O" if self.infinity else f"({self.x:#x}, {self.y:#x})"


O = Point(infinity=True)


@dataclass(frozen=True, eq=False)
class Curve:
    F: GF2m
    a: int
    b: int

    def __post_init__(self):
        self.F.element(self.a)
        self.F.element(self.b)
        if self.b == 0:
            raise ValueError("b = 0 gives a singular curve")

    def __eq__(self, other):
        return isinstance(other, Curve) and (self.F, self.a, self.b) == (other.F, other.a, other.b)

    def __hash__(self):
        return hash((self.F, self.a, self.b))

    def __repr__(self):
        return f"Curve(m={self.F.m}, a={self.a:#x}, b={self.b:#x})"

    def contains(self, P: Point) -> bool:
        if P.infinity:
            return True
        F, x, y = self.F, P.x, P.y
        if x >> F.m or y >> F.m:
            return False
        x2 = F.sqr(x)
        lhs = F.sqr(y) ^ F.mul(x, y)
        rhs = F.mul(x2, x) ^ F.mul(self.a, x2) ^ self.b
        return lhs == rhs

    def neg(self, P: Point) -> Point:
        if P.infinity:
            return P
        return Point(P.x, P.x ^ P.y)

    def add(self, P: Point, Q: Point) -> Point:
        if P.infinity:
            return Q
        if Q.infinity:
            return P
        F = self.F
        if P.x == Q.x:
            if P.y != Q.y or P.x == 0:
                # Q = -P, or P = -P (the 2-torsion point with x = 0)
                return O
            lam = P.x ^ F.div(P.y, P.x)
            x3 = F.sqr(lam) ^ lam ^ self.a
            y3 = F.sqr(P.x) ^ F.mul(lam, x3) ^ x3
            return Point(x3, y3)
        lam = F.div(P.y ^ Q.y, P.x ^ Q.x)
        x3 = F.sqr(lam) ^ lam ^ P.x ^ Q.x ^ self.a
        y3 = F.mul(lam, P.x ^ x3) ^ x3 ^ P.y
        return Point(x3, y3)

    def double(self, P: Point) -> Point:
        return self.add(P, P)

    def mul(self, k: int, P: Point) -> Point:
        if k < 0:
            k, P = -k, self.neg(P)
        R = O
        for bit in bin(k)[2:]:
            R = self.add(R, R)
            if bit == "1":
                R = self.add(R, P)
        return R

    def lift_x(self, x: int) -> tuple[Point, ...]:
        """All points with the given x-coordinate (0, 1 or 2 of them)."""
        F = self.F
        if x == 0:
            return (Point(0, F.sqrt(self.b)),)
        c = x ^ self.a ^ F.mul(self.b, F.sqr(F.inv(x)))
        roots = F.solve_quadratic(c)
        if roots is None:
            return ()
        return tuple(Point(x, F.mul(x, z)) for z in roots)

    def random_point(self, rng: np.random.Generator) -> Point:
        """A uniformly chosen finite point (rejection on the x-coordinate)."""
        while True:
            pts = self.lift_x(self.F.random_element(rng))
            if pts:
                return pts[int(rng.integers(len(pts)))]


def enumerate_points(curve: Curve, with_points: bool = False,
                     max_degree: int = ENUMERATION_MAX_DEGREE) -> tuple[int, list[Point] | None]:
    """Group order by brute force over x, plus the points when requested.

    For x != 0 the substitution y = x z turns the curve equation into
    z^2 + z = x + a + b / x^2, solvable iff its trace vanishes.
    """
    F = curve.F
    if F.m > max_degree:
        raise BudgetError(f"enumeration is limited to m <= {max_degree}, got {F.m}")
    if with_points:
        points = [O]
        for x in range(F.order):
            points.extend(curve.lift_x(x))
        return len(points), points
    if F.generator is not None:
        return 2 + 2 * _count_solvable_by_logs(curve), None
    g = F.primitive_element()
    walk = _gf.count_affine_by_walk(F.trace(curve.a), F.sqrt(curve.b), g, F.inv(g),
                                    F.trace_mask, F.m, F.poly)
    return 2 + int(walk), None  # plus O and (0, sqrt(b))


def _count_solvable_by_logs(curve: Curve) -> int:
    # Tr(x + a + b/x^2) = Tr(x) + Tr(a) + Tr(sqrt(b)/x); with x = g^k and
    # sqrt(b) = g^s both terms are traces of powers of g.
    F = curve.F
    tr = F.power_traces()
    s = F.log(F.sqrt(curve.b))
    k = np.arange(F.mask)
    other = tr[(s - k) % F.mask]
    return int(np.count_nonzero((tr ^ other) == F.trace(curve.a)))


def hasse_ok(m: int, N: int) -> bool:
    q = 1 << m
    return (N - q - 1) ** 2 <= 4 * q


@dataclass(frozen=True)
class SubgroupCtx:
    """Prime-order subgroup <P> with challenge Q. The secret is not stored here."""

    curve: Curve
    p: int
    P: Point
    Q: Point

    def __post_init__(self):
        check_prime_modulus(self.p)
        E = self.curve
        if self.P.infinity or not E.contains(self.P):
            raise ValueError("generator must be a finite point on the curve")
        if not E.mul(self.p, self.P).infinity:
            raise ValueError("generator does not have order p")
        if self.Q.infinity or not E.contains(self.Q) or not E.mul(self.p, self.Q).infinity:
            raise ValueError("challenge is not a nonzero element of <P>")


def largest_prime_factor(N: int) -> int:
    return max(factorint(N))


def find_prime_subgroup(curve: Curve, N: int, rng: np.random.Generator,
                        secret: int | None = None, min_prime: int = 3,
                        p: int | None = None) -> tuple[SubgroupCtx, int] | None:
    """Generator of the largest prime-order subgroup and a challenge Q = secret * P.

    Returns ``(ctx, secret)``; the secret is handed back separately so the
    attack path never sees it.
    """
    if p is None:
        p = largest_prime_factor(N)
    if p < min_prime or N % p:
        return None
    h = N // p
    while True:
        P = curve.mul(h, curve.random_point(rng))
        if not P.infinity:
            break
    if not curve.mul(p, P).infinity:
        raise ValueError(f"{N} is not the order of {curve}")
    if secret is None:
        secret = int(rng.integers(2, p))
    secret %= p
    if secret == 0:
        raise ValueError("secret must be nonzero mod p")
    Q = curve.mul(secret, P)
    return SubgroupCtx(curve, p, P, Q), secret


def curve_search(m: int, rng: np.random.Generator, min_prime_bits: int | None = None,
                 reduction_poly: int | None = None, max_tries: int = 10_000):
    """Random (a, b) until the order has a prime factor of at least ``min_prime_bits`` bits.

    Returns ``(curve, N, p)``.
    """
    F = gf2m(m, reduction_poly)
    if min_prime_bits is None:
        min_prime_bits = m - 2
    for _ in range(max_tries):
        a = F.random_element(rng)
        b = F.random_element(rng, nonzero=True)
        curve = Curve(F, a, b)
        N, _ = enumerate_points(curve)
        p = largest_prime_factor(N)
        if p >= 1 << min_prime_bits:
            return curve, N, p
    raise BudgetError(f"no curve with a {min_prime_bits}-bit prime subgroup in {max_tries} tries")
