"""Jitted GF(2^m) primitives shared by the field, linalg and search kernels.

A field is handed to jitted code as the tuple ``(exp, log, m, poly)``.
When ``exp`` is empty the shift-and-reduce multiplier is used instead of
the log/antilog tables.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def gmul(a, b, f):
    if a == 0 or b == 0:
        return 0
    exp = f[0]
    if exp.size:
        log = f[1]
        return exp[log[a] + log[b]]
    m = f[2]
    poly = f[3]
    top = np.int64(1) << m
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


@njit(cache=True)
def ginv(a, f):
    exp = f[0]
    if exp.size:
        log = f[1]
        order = (exp.size + 2) // 2 - 1
        return exp[order - log[a]]
    # a^(2^m - 2) by square and multiply
    m = f[2]
    r = 1
    s = a
    for _ in range(1, m):
        s = gmul(s, s, f)
        r = gmul(r, s, f)
    return r


@njit(cache=True)
def vmul(a, b, f, out):
    for i in range(a.size):
        out[i] = gmul(a[i], b[i], f)


@njit(cache=True)
def vinv(a, f, out):
    for i in range(a.size):
        out[i] = ginv(a[i], f)


@njit(cache=True)
def clmul_reduce(a, b, m, poly):
    top = np.int64(1) << m
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


@njit(cache=True)
def build_tables(g, m, poly):
    order = (1 << m) - 1
    exp = np.empty(2 * order, dtype=np.int64)
    log = np.zeros(order + 1, dtype=np.int64)
    x = 1
    for i in range(order):
        exp[i] = x
        exp[i + order] = x
        log[x] = i
        x = clmul_reduce(x, g, m, poly)
    return exp, log, x


@njit(cache=True)
def parity(x):
    x ^= x >> 32
    x ^= x >> 16
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


@njit(cache=True)
def count_affine_points(a, b, tmask, f, lo, hi):
    """Points with x in [lo, hi), x != 0: two per x whose quadratic is solvable."""
    n = 0
    for x in range(max(lo, 1), hi):
        xi = ginv(x, f)
        c = x ^ a ^ gmul(b, gmul(xi, xi, f), f)
        if parity(c & tmask) == 0:
            n += 2
    return n


@njit(cache=True)
def const_mul_tables(c, m, poly):
    """Byte-sliced tables for x -> c x (a GF(2)-linear map)."""
    nb = (m + 7) // 8
    T = np.zeros((nb, 256), dtype=np.int64)
    for i in range(nb):
        for v in range(256):
            x = np.int64(v) << (8 * i)
            if x >> m == 0:
                T[i, v] = clmul_reduce(x, c, m, poly)
    return T


@njit(cache=True)
def const_mul(T, x):
    r = 0
    for i in range(T.shape[0]):
        r ^= T[i, (x >> (8 * i)) & 255]
    return r


@njit(cache=True)
def count_affine_by_walk(tr_a, s, g, g_inv, tmask, m, poly):
    """Affine x != 0 points, walking x = g^k and s / x = s g^-k together.

    Tr(x + a + b / x^2) = Tr(x) + Tr(a) + Tr(s / x) with s^2 = b, so each
    step costs two constant multiplications and no inversion. g must be
    primitive.
    """
    Tg = const_mul_tables(g, m, poly)
    Ti = const_mul_tables(g_inv, m, poly)
    order = (np.int64(1) << m) - 1
    x = np.int64(1)
    y = s
    n = 0
    for _ in range(order):
        if parity((x ^ y) & tmask) == tr_a:
            n += 2
        x = const_mul(Tg, x)
        y = const_mul(Ti, y)
    return n
