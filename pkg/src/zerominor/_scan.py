"""Jitted zero-minor scanners over a matrix of GF(2^m) elements.

Two rows u, v have a zero 2-minor on columns (k, k') iff the projective
points [u_k : v_k] and [u_k' : v_k'] coincide or one of them is [0 : 0].
Each column gets a key (u_k / v_k, ``INF`` when only v_k = 0, ``ZERO``
when both vanish) and equal keys are found by a stable sort.
"""

import numpy as np
from numba import njit

from ._gf import gmul, ginv


@njit(cache=True)
def row_pair_keys(u, v, vinv, f, q, out):
    zero = q + 1
    for k in range(u.size):
        if v[k] != 0:
            out[k] = gmul(u[k], vinv[k], f)
        elif u[k] != 0:
            out[k] = q
        else:
            out[k] = zero


@njit(cache=True)
def first_pair(keys, q):
    """Lexicographically first (k, k') with k < k' giving a zero 2-minor."""
    n = keys.size
    zero = q + 1
    order = np.argsort(keys, kind="mergesort")
    nxt = np.full(n, -1, dtype=np.int64)
    for t in range(n - 1):
        a = order[t]
        b = order[t + 1]
        if keys[a] == keys[b] and keys[a] != zero:
            nxt[a] = b
    zero_after = -1
    best_k = -1
    best_k2 = -1
    # walk backwards so zero_after is the first ZERO column strictly after k
    for k in range(n - 1, -1, -1):
        cand = -1
        if keys[k] == zero:
            if k < n - 1:
                cand = k + 1
        else:
            cand = nxt[k]
            if zero_after >= 0 and (cand < 0 or zero_after < cand):
                cand = zero_after
        if cand >= 0:
            best_k = k
            best_k2 = cand
        if keys[k] == zero:
            zero_after = k
    return best_k, best_k2


@njit(cache=True)
def count_pairs(keys, q):
    n = keys.size
    zero = q + 1
    s = np.sort(keys)
    total = 0
    nz = 0
    t = 0
    while t < n:
        g = 1
        while t + g < n and s[t + g] == s[t]:
            g += 1
        if s[t] == zero:
            nz = g
        else:
            total += g * (g - 1) // 2
        t += g
    total += nz * (n - nz) + nz * (nz - 1) // 2
    return total


@njit(cache=True)
def inverse_or_zero(S, f):
    out = np.zeros_like(S)
    for i in range(S.shape[0]):
        for j in range(S.shape[1]):
            if S[i, j] != 0:
                out[i, j] = ginv(S[i, j], f)
    return out


@njit(cache=True)
def first_zero_entry(S):
    for i in range(S.shape[0]):
        for j in range(S.shape[1]):
            if S[i, j] == 0:
                return i, j
    return -1, -1


@njit(cache=True)
def first_zero2(S, f, q):
    """First zero 2-minor in (row pair, column pair) lexicographic order.

    Returns (i, j, k, k2, row_pairs_done); -1 indices when none exists.
    """
    nr, nc = S.shape
    Sinv = inverse_or_zero(S, f)
    keys = np.empty(nc, dtype=np.int64)
    done = 0
    for i in range(nr):
        for j in range(i + 1, nr):
            row_pair_keys(S[i], S[j], Sinv[j], f, q, keys)
            k, k2 = first_pair(keys, q)
            if k >= 0:
                return i, j, k, k2, done
            done += 1
    return -1, -1, -1, -1, done


@njit(cache=True)
def count_zero2(S, f, q):
    nr, nc = S.shape
    Sinv = inverse_or_zero(S, f)
    keys = np.empty(nc, dtype=np.int64)
    total = 0
    for i in range(nr):
        for j in range(i + 1, nr):
            row_pair_keys(S[i], S[j], Sinv[j], f, q, keys)
            total += count_pairs(keys, q)
    return total


@njit(cache=True)
def _det2(a, b, c, d, f):
    return gmul(a, d, f) ^ gmul(b, c, f)


@njit(cache=True)
def first_zero3(S, f, q):
    """First zero 3-minor in (row triple, column triple) lexicographic order.

    For a row triple (i, j, k) and smallest column a with S[i, a] != 0 the
    minor equals S[i, a] times a 2-minor of the pivoted rows j, k, so the
    remaining columns are scanned with the 2-minor keys. Zero pivots fall
    back to cofactor expansion along row i.
    Returns (i, j, k, a, b, c, row_triples_done).
    """
    nr, nc = S.shape
    done = 0
    u = np.empty(nc, dtype=np.int64)
    v = np.empty(nc, dtype=np.int64)
    vinv = np.empty(nc, dtype=np.int64)
    keys = np.empty(nc, dtype=np.int64)
    R = np.zeros((nc, nc), dtype=np.int64)
    for i in range(nr):
        # R[a, x] = S[i, x] / S[i, a]
        for a in range(nc):
            if S[i, a] != 0:
                ia = ginv(S[i, a], f)
                for x in range(nc):
                    R[a, x] = gmul(S[i, x], ia, f)
        for j in range(i + 1, nr):
            for k in range(j + 1, nr):
                for a in range(nc - 2):
                    w = nc - a - 1
                    if S[i, a] != 0:
                        sja = S[j, a]
                        ska = S[k, a]
                        for t in range(w):
                            x = a + 1 + t
                            u[t] = S[j, x] ^ gmul(sja, R[a, x], f)
                            vv = S[k, x] ^ gmul(ska, R[a, x], f)
                            v[t] = vv
                            vinv[t] = ginv(vv, f) if vv != 0 else 0
                        row_pair_keys(u[:w], v[:w], vinv[:w], f, q, keys[:w])
                        b, c = first_pair(keys[:w], q)
                        if b >= 0:
                            return i, j, k, a, a + 1 + b, a + 1 + c, done
                    else:
                        for b in range(a + 1, nc - 1):
                            for c in range(b + 1, nc):
                                d = gmul(S[i, b], _det2(S[j, a], S[j, c], S[k, a], S[k, c], f), f)
                                d ^= gmul(S[i, c], _det2(S[j, a], S[j, b], S[k, a], S[k, b], f), f)
                                if d == 0:
                                    return i, j, k, a, b, c, done
                done += 1
    return -1, -1, -1, -1, -1, -1, done


@njit(cache=True)
def count_zero3(S, f, q):
    """Count zero 3-minors, grouping each by its (min row, min column) pivot."""
    nr, nc = S.shape
    total = 0
    for i in range(nr - 2):
        for a in range(nc - 2):
            h = nr - i - 1
            w = nc - a - 1
            if S[i, a] != 0:
                ia = ginv(S[i, a], f)
                T = np.empty((h, w), dtype=np.int64)
                for x in range(w):
                    rx = gmul(S[i, a + 1 + x], ia, f)
                    for r in range(h):
                        T[r, x] = S[i + 1 + r, a + 1 + x] ^ gmul(S[i + 1 + r, a], rx, f)
                total += count_zero2(T, f, q)
            else:
                for j in range(i + 1, nr - 1):
                    for k in range(j + 1, nr):
                        for b in range(a + 1, nc - 1):
                            for c in range(b + 1, nc):
                                d = gmul(S[i, b], _det2(S[j, a], S[j, c], S[k, a], S[k, c], f), f)
                                d ^= gmul(S[i, c], _det2(S[j, a], S[j, b], S[k, a], S[k, b], f), f)
                                if d == 0:
                                    total += 1
    return total


# -- generic n via combination enumeration -------------------------------------

@njit(cache=True)
def next_comb(idx, n):
    """Advance ``idx`` to the next k-combination of range(n); False when done."""
    k = idx.size
    t = k - 1
    while t >= 0 and idx[t] == n - k + t:
        t -= 1
    if t < 0:
        return False
    idx[t] += 1
    for s in range(t + 1, k):
        idx[s] = idx[s - 1] + 1
    return True


@njit(cache=True)
def det_small(W, f):
    """Determinant by elimination; destroys W."""
    n = W.shape[0]
    d = 1
    for c in range(n):
        p = -1
        for i in range(c, n):
            if W[i, c] != 0:
                p = i
                break
        if p < 0:
            return 0
        if p != c:
            for j in range(c, n):
                t = W[p, j]
                W[p, j] = W[c, j]
                W[c, j] = t
        piv = W[c, c]
        d = gmul(d, piv, f)
        pinv = ginv(piv, f)
        for i in range(c + 1, n):
            fac = W[i, c]
            if fac != 0:
                fac = gmul(fac, pinv, f)
                for j in range(c, n):
                    W[i, j] ^= gmul(fac, W[c, j], f)
    return d


@njit(cache=True)
def _bordered_det(A, fixed_r, fixed_c, rsel, csel, f, W):
    nf = fixed_r.size
    n = nf + rsel.size
    # row/column order only affects the sign, irrelevant for zero tests
    for s in range(n):
        r = fixed_r[s] if s < nf else rsel[s - nf]
        for t in range(n):
            c = fixed_c[t] if t < nf else csel[t - nf]
            W[s, t] = A[r, c]
    return det_small(W, f)


@njit(cache=True)
def first_bordered(A, fixed_r, fixed_c, rows, cols, n, f):
    """First (row n-set, col n-set) of ``rows`` x ``cols`` (lexicographic in
    positions) whose minor bordered by the fixed index sets vanishes.
    Returns (row positions, col positions, row sets done) or -1 arrays."""
    W = np.empty((fixed_r.size + n, fixed_r.size + n), dtype=np.int64)
    ri = np.arange(n)
    done = 0
    if n > rows.size or n > cols.size:
        return ri * 0 - 1, ri * 0 - 1, done
    while True:
        ci = np.arange(n)
        while True:
            if _bordered_det(A, fixed_r, fixed_c, rows[ri], cols[ci], f, W) == 0:
                return ri.copy(), ci.copy(), done
            if not next_comb(ci, cols.size):
                break
        done += 1
        if not next_comb(ri, rows.size):
            break
    return ri * 0 - 1, ri * 0 - 1, done


@njit(cache=True)
def count_bordered(A, fixed_r, fixed_c, rows, cols, n, f):
    """Number of zero minors ``A[fixed_r + R, fixed_c + C]`` over n-subsets R, C."""
    W = np.empty((fixed_r.size + n, fixed_r.size + n), dtype=np.int64)
    total = 0
    if n > rows.size or n > cols.size:
        return 0
    ri = np.arange(n)
    while True:
        ci = np.arange(n)
        while True:
            if _bordered_det(A, fixed_r, fixed_c, rows[ri], cols[ci], f, W) == 0:
                total += 1
            if not next_comb(ci, cols.size):
                break
        if not next_comb(ri, rows.size):
            break
    return total


@njit(cache=True)
def pivot_schur(S, i, a, f):
    """Schur complement of the 1x1 pivot S[i, a] on rows > i, columns > a."""
    nr, nc = S.shape
    h = nr - i - 1
    w = nc - a - 1
    T = np.empty((h, w), dtype=np.int64)
    ia = ginv(S[i, a], f)
    for x in range(w):
        rx = gmul(S[i, a + 1 + x], ia, f)
        for r in range(h):
            T[r, x] = S[i + 1 + r, a + 1 + x] ^ gmul(S[i + 1 + r, a], rx, f)
    return T
