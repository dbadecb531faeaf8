"""Exact dense linear algebra over GF(2^m).

Matrices are 2-D ``int64`` numpy arrays of field elements. Every public
function treats its inputs as read-only and returns fresh arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

import numpy as np
from numba import njit

from ._gf import gmul, ginv
from .field import GF2m


class SingularBlockError(ArithmeticError):
    """The block handed to a Schur complement is singular (a zero minor)."""


@dataclass(frozen=True)
class MinorIndex:
    """Sorted row set ``alpha`` and column set ``beta`` (0-based) of a minor.

    ``meta`` carries search provenance (strategy, principal position,
    deviation count) and takes no part in equality.
    """

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    meta: dict | None = dc_field(default=None, compare=False, hash=False)

    def __post_init__(self):
        alpha = tuple(int(i) for i in self.alpha)
        beta = tuple(int(j) for j in self.beta)
        if len(alpha) != len(beta) or not alpha:
            raise ValueError("alpha and beta must be non-empty and of equal size")
        if any(x >= y for x, y in zip(alpha, alpha[1:])) or any(x >= y for x, y in zip(beta, beta[1:])):
            raise ValueError("minor indices must be strictly increasing")
        if alpha[0] < 0 or beta[0] < 0:
            raise ValueError("minor indices must be non-negative")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def size(self) -> int:
        return len(self.alpha)

    @classmethod
    def of(cls, rows: Iterable[int], cols: Iterable[int], **meta) -> "MinorIndex":
        return cls(tuple(sorted(rows)), tuple(sorted(cols)), meta or None)


# -- jitted kernels ----------------------------------------------------------------

@njit(cache=True)
def _eliminate(W, ncols, f):
    """In-place reduced row echelon form on the first ``ncols`` columns of W.

    Pivot rows are scaled to 1. Returns the rank.
    """
    rows, width = W.shape
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        p = -1
        for i in range(r, rows):
            if W[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(width):
                t = W[p, j]
                W[p, j] = W[r, j]
                W[r, j] = t
        piv_inv = ginv(W[r, c], f)
        for j in range(c, width):
            W[r, j] = gmul(W[r, j], piv_inv, f)
        for i in range(rows):
            if i != r:
                fac = W[i, c]
                if fac != 0:
                    for j in range(c, width):
                        W[i, j] ^= gmul(fac, W[r, j], f)
        r += 1
    return r


@njit(cache=True)
def _det(A, f):
    W = A.copy()
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
        piv_inv = ginv(piv, f)
        for i in range(c + 1, n):
            fac = W[i, c]
            if fac != 0:
                fac = gmul(fac, piv_inv, f)
                for j in range(c, n):
                    W[i, j] ^= gmul(fac, W[c, j], f)
    return d


@njit(cache=True)
def _matmul(A, B, f):
    n, k = A.shape
    p = B.shape[1]
    out = np.zeros((n, p), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            a = A[i, t]
            if a != 0:
                for j in range(p):
                    out[i, j] ^= gmul(a, B[t, j], f)
    return out


def _check(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return A


# -- public operations ----------------------------------------------------------------

def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def reverse_identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)[::-1].copy()


def matmul(F: GF2m, A, B) -> np.ndarray:
    A, B = _check(A), _check(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    return _matmul(np.ascontiguousarray(A), np.ascontiguousarray(B), F.jit)


def row_reduce(F: GF2m, M) -> tuple[np.ndarray, int, np.ndarray]:
    """Return ``(R, rank, T)`` with ``R = T @ M`` in reduced row echelon form."""
    M = _check(M)
    rows, cols = M.shape
    W = np.zeros((rows, cols + rows), dtype=np.int64)
    W[:, :cols] = M
    W[:, cols:] = identity(rows)
    rank = _eliminate(W, cols, F.jit)
    return W[:, :cols].copy(), int(rank), W[:, cols:].copy()


def rank(F: GF2m, M) -> int:
    W = np.array(_check(M), dtype=np.int64, copy=True)
    return int(_eliminate(W, W.shape[1], F.jit))


def left_kernel(F: GF2m, M) -> np.ndarray:
    """Basis (as rows) of ``{v : v @ M = 0}``."""
    _, r, T = row_reduce(F, M)
    return T[r:].copy()


def inverse(F: GF2m, E) -> np.ndarray:
    E = _check(E)
    n = E.shape[0]
    if E.shape[1] != n:
        raise ValueError("inverse of a non-square matrix")
    R, r, T = row_reduce(F, E)
    if r < n:
        raise SingularBlockError("matrix is singular")
    return T


def determinant(F: GF2m, A) -> int:
    A = _check(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"determinant of non-square {A.shape} matrix")
    if A.shape[0] == 0:
        return 1
    return int(_det(np.ascontiguousarray(A), F.jit))


def submatrix(A, idx: MinorIndex) -> np.ndarray:
    A = _check(A)
    if idx.alpha[-1] >= A.shape[0] or idx.beta[-1] >= A.shape[1]:
        raise IndexError(f"minor {idx.alpha}x{idx.beta} out of bounds for {A.shape}")
    return A[np.ix_(idx.alpha, idx.beta)]


def minor(F: GF2m, A, idx: MinorIndex) -> int:
    return determinant(F, submatrix(A, idx))


def complement(n: int, idx: Iterable[int]) -> list[int]:
    s = set(idx)
    return [i for i in range(n) if i not in s]


def schur_complement(F: GF2m, A, block: MinorIndex | None) -> np.ndarray:
    """``H - G E^-1 F`` for the partition of A by ``block`` (E = A[block]).

    The result is indexed by the complement rows and columns in ascending
    order. An empty block (``None``) returns a copy of A.
    """
    A = _check(A)
    if block is None:
        return A.copy()
    rows = complement(A.shape[0], block.alpha)
    cols = complement(A.shape[1], block.beta)
    E = submatrix(A, block)
    Einv = inverse(F, E)
    Fb = A[np.ix_(block.alpha, cols)]
    G = A[np.ix_(rows, block.beta)]
    H = A[np.ix_(rows, cols)]
    return H ^ matmul(F, matmul(F, G, Einv), Fb)


def reduce_to_reverse_identity(F: GF2m, K) -> np.ndarray | None:
    """Row-reduce an l x 2l kernel basis to ``[A | reverse identity]``.

    Returns the transformed basis, or None when its right l x l block is
    singular. The dense part is ``result[:, :l]``.
    """
    K = _check(K)
    l = K.shape[0]
    if K.shape[1] != 2 * l:
        raise ValueError(f"expected an l x 2l matrix, got {K.shape}")
    try:
        Rinv = inverse(F, K[:, l:])
    except SingularBlockError:
        return None
    out = matmul(F, Rinv[::-1].copy(), K)
    assert np.array_equal(out[:, l:], reverse_identity(l))
    return out


# -- text dump -------------------------------------------------------------------

def dump_matrix(A) -> str:
    """One row per line, entries as space-separated hex."""
    A = _check(A)
    return "".join(" ".join(f"{int(x):x}" for x in row) + "\n" for row in A)


def load_matrix(text: str) -> np.ndarray:
    rows = [[int(t, 16) for t in line.split()] for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(rows, dtype=np.int64)
