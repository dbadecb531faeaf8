"""Arithmetic in GF(2^m) (polynomial basis) and in the integers mod p.

Field elements are plain ``int`` bitmasks; vectors and matrices of field
elements are ``int64`` numpy arrays, so the supported degrees are
``2 <= m <= 62``.
"""

from __future__ import annotations

import functools

import numpy as np
from sympy import factorint, isprime

from . import _gf

#: Lowest-weight irreducible polynomial per degree (trinomial when one
#: exists, else the lexicographically first pentanomial).
DEFAULT_POLYS = {
    2: 0x7, 3: 0xb, 4: 0x13, 5: 0x25,
    6: 0x43, 7: 0x83, 8: 0x11b, 9: 0x203,
    10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201b,
    14: 0x4021, 15: 0x8003, 16: 0x1002b, 17: 0x20009,
    18: 0x40009, 19: 0x80027, 20: 0x100009, 21: 0x200005,
    22: 0x400003, 23: 0x800021, 24: 0x100001b, 25: 0x2000009,
    26: 0x400001b, 27: 0x8000027, 28: 0x10000003, 29: 0x20000005,
    30: 0x40000003, 31: 0x80000009, 32: 0x10000008d, 33: 0x200000401,
    34: 0x400000081, 35: 0x800000005, 36: 0x1000000201, 37: 0x2000000053,
    38: 0x4000000063, 39: 0x8000000011, 40: 0x10000000039, 41: 0x20000000009,
    42: 0x40000000081, 43: 0x80000000059, 44: 0x100000000021, 45: 0x20000000001b,
    46: 0x400000000003, 47: 0x800000000021, 48: 0x100000000002d, 49: 0x2000000000201,
    50: 0x400000000001d, 51: 0x800000000004b, 52: 0x10000000000009, 53: 0x20000000000047,
    54: 0x40000000000201, 55: 0x80000000000081, 56: 0x100000000000095, 57: 0x200000000000011,
    58: 0x400000000080001, 59: 0x800000000000095, 60: 0x1000000000000003, 61: 0x2000000000000027,
    62: 0x4000000020000001,
}

#: Log/antilog tables are built up to this degree (2^22 entries, ~100 MB).
TABLE_MAX_DEGREE = 22

MAX_DEGREE = 62


class FieldError(ValueError):
    pass


# -- polynomials over GF(2) as int bitmasks ---------------------------------

def poly_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def poly_mulmod(a: int, b: int, f: int) -> int:
    m = f.bit_length() - 1
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= f
    return r


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Ben-Or test: gcd(x^(2^k) + x, f) == 1 for k = 1 .. deg(f) // 2."""
    m = f.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    t = 2
    for _ in range(m // 2):
        t = poly_mulmod(t, t, f)
        if poly_gcd(t ^ 2, f) != 1:
            return False
    return True


# -- GF(2^m) ------------------------------------------------------------------

class GF2m:
    """The field GF(2^m) = GF(2)[x] / (reduction_poly)."""

    def __init__(self, m: int, reduction_poly: int | None = None):
        if not 2 <= m <= MAX_DEGREE:
            raise FieldError(f"field degree must lie in [2, {MAX_DEGREE}], got {m}")
        poly = DEFAULT_POLYS[m] if reduction_poly is None else int(reduction_poly)
        if poly.bit_length() - 1 != m:
            raise FieldError(f"reduction polynomial {poly:#x} does not have degree {m}")
        if not is_irreducible(poly):
            raise FieldError(f"reduction polynomial {poly:#x} is reducible")
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self.mask = self.order - 1
        empty = np.zeros(0, dtype=np.int64)
        self._exp = self._log = empty
        if m <= TABLE_MAX_DEGREE:
            self._exp, self._log, self.generator = self._make_tables()
        else:
            self.generator = None
        self._power_traces = None
        self._primitive = None
        self.jit = (self._exp, self._log, m, poly)
        self.trace_mask = sum(self._trace_direct(1 << i) << i for i in range(m))

    def __repr__(self):
        return f"GF2m(m={self.m}, reduction_poly={self.poly:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))

    def _make_tables(self):
        factors = factorint(self.mask)
        for g in range(2, self.order):
            if all(self._pow_plain(g, self.mask // r) != 1 for r in factors):
                break
        exp, log, _ = _gf.build_tables(g, self.m, self.poly)
        return exp, log, g

    def _pow_plain(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mulmod(r, a, self.poly)
            a = poly_mulmod(a, a, self.poly)
            e >>= 1
        return r

    # -- scalar operations

    def element(self, v: int) -> int:
        v = int(v)
        if v < 0 or v >> self.m:
            raise FieldError(f"{v:#x} is not an element of GF(2^{self.m})")
        return v

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp.size:
            return int(self._exp[self._log[a] + self._log[b]])
        return poly_mulmod(a, b, self.poly)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        if self._exp.size:
            return int(self._exp[self.mask - self._log[a]])
        # extended Euclid on polynomials: a*g1 = u, a*g2 = v (mod f)
        u, v, g1, g2 = a, self.poly, 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v, g1, g2 = v, u, g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return poly_mod(g1, self.poly)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def sqrt(self, a: int) -> int:
        # squaring is a bijection; its inverse is a -> a^(2^(m-1))
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def _trace_direct(self, a: int) -> int:
        t, s = 0, a
        for _ in range(self.m):
            t ^= s
            s = poly_mulmod(s, s, self.poly)
        return t

    def trace(self, a: int) -> int:
        return (a & self.trace_mask).bit_count() & 1

    def half_trace(self, c: int) -> int:
        if self.m % 2 == 0:
            raise FieldError("half-trace is only defined for odd m")
        h, s = c, c
        for _ in range((self.m - 1) // 2):
            s = self.sqr(self.sqr(s))
            h ^= s
        return h

    def solve_quadratic(self, c: int) -> tuple[int, int] | None:
        """Roots of z^2 + z = c, or None when Tr(c) = 1."""
        if self.trace(c):
            return None
        if self.m % 2:
            z = self.half_trace(c)
        else:
            z = self._solve_quadratic_linear(c)
        return z, z ^ 1

    def _solve_quadratic_linear(self, c: int) -> int:
        # z -> z^2 + z is GF(2)-linear; solve the bit system by elimination
        cols = [self.mul(1 << i, 1 << i) ^ (1 << i) for i in range(self.m)]
        # rows: equation j has coefficient bits over unknowns i, rhs in bit m
        rows = []
        for j in range(self.m):
            r = sum(((cols[i] >> j) & 1) << i for i in range(self.m))
            rows.append(r | (((c >> j) & 1) << self.m))
        pivots = []
        rank = 0
        for i in range(self.m):
            for k in range(rank, self.m):
                if (rows[k] >> i) & 1:
                    rows[rank], rows[k] = rows[k], rows[rank]
                    break
            else:
                continue
            for k in range(self.m):
                if k != rank and (rows[k] >> i) & 1:
                    rows[k] ^= rows[rank]
            pivots.append(i)
            rank += 1
        z = 0
        for k, i in enumerate(pivots):
            if (rows[k] >> self.m) & 1:
                z |= 1 << i
        return z

    def random_element(self, rng: np.random.Generator, nonzero: bool = False) -> int:
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.order))

    # -- array operations

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.empty(a.shape, dtype=np.int64)
        _gf.vmul(np.ascontiguousarray(a).ravel(), np.ascontiguousarray(b).ravel(), self.jit, out.reshape(-1))
        return out

    def vinv(self, a) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        out = np.empty(a.shape, dtype=np.int64)
        _gf.vinv(a.ravel(), self.jit, out.reshape(-1))
        return out

    def primitive_element(self) -> int:
        """A generator of the multiplicative group (the table generator when tables exist)."""
        if self.generator is not None:
            return self.generator
        if self._primitive is None:
            factors = factorint(self.mask)
            self._primitive = next(g for g in range(2, self.order)
                                   if all(self.pow(g, self.mask // r) != 1 for r in factors))
        return self._primitive

    def log(self, a: int) -> int:
        """Discrete log base ``self.generator`` (table-backed fields only)."""
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return int(self._log[a])

    def power_traces(self) -> np.ndarray:
        """``Tr(g^k)`` for k = 0 .. 2^m - 2, g the table generator."""
        if getattr(self, "_power_traces", None) is None:
            self._power_traces = self.vtrace(self._exp[:self.mask]).astype(np.int8)
        return self._power_traces

    def vtrace(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) & self.trace_mask
        return np.bitwise_count(a.astype(np.uint64)).astype(np.int64) & 1

    def random_array(self, rng: np.random.Generator, shape, nonzero: bool = False) -> np.ndarray:
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.order, size=shape, dtype=np.int64)


@functools.lru_cache(maxsize=16)
def gf2m(m: int, reduction_poly: int | None = None) -> GF2m:
    """Cached field constructor; tables are built once per (m, poly)."""
    return GF2m(m, reduction_poly)


# -- integers mod p -------------------------------------------------------------

def check_prime_modulus(p: int) -> int:
    if p < 2 or not isprime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


def sc_inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    # extended Euclid
    r0, r1, s0, s1 = p, a, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p
