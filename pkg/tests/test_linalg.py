import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from zerominor import linalg
from zerominor.field import gf2m
from zerominor.linalg import MinorIndex, SingularBlockError


def test_minor_index_normalizes_and_validates():
    idx = MinorIndex.of((3, 1), [2, 0], x=1)
    assert idx.alpha == (1, 3) and idx.beta == (0, 2) and idx.size == 2
    assert idx == MinorIndex((1, 3), (0, 2))
    with pytest.raises(ValueError):
        MinorIndex((3, 1), (0, 2))
    with pytest.raises(ValueError):
        MinorIndex((1, 1), (0, 2))
    with pytest.raises(ValueError):
        MinorIndex((0,), (0, 1))
    with pytest.raises(IndexError):
        linalg.submatrix(np.zeros((3, 3), dtype=np.int64), MinorIndex((0, 3), (0, 1)))


def test_two_by_two_determinant():
    F = gf2m(3, 0b1011)
    assert linalg.determinant(F, [[2, 1], [1, 2]]) == 5


@pytest.mark.parametrize("m,n", [(3, 5), (8, 6), (13, 7), (31, 5)])
def test_determinant_against_elimination_oracle(m, n):
    F = gf2m(m)
    rng = np.random.default_rng(m * n)
    for _ in range(20):
        A = F.random_array(rng, (n, n))
        assert linalg.determinant(F, A) == oracles.det(A, m, F.poly)


def test_determinant_of_singular_and_empty():
    F = gf2m(8)
    A = F.random_array(np.random.default_rng(0), (5, 5))
    A[3] = A[0] ^ F.vmul(A[1], np.full(5, 7))
    assert linalg.determinant(F, A) == 0
    assert linalg.determinant(F, np.zeros((0, 0), dtype=np.int64)) == 1


def test_inverse_and_rank():
    F = gf2m(10)
    rng = np.random.default_rng(3)
    A = F.random_array(rng, (9, 9))
    Ainv = linalg.inverse(F, A)
    assert np.array_equal(linalg.matmul(F, A, Ainv), linalg.identity(9))
    B = F.random_array(rng, (4, 9))
    C = linalg.matmul(F, F.random_array(rng, (7, 4)), B)
    assert linalg.rank(F, C) == 4
    with pytest.raises(SingularBlockError):
        linalg.inverse(F, C[:7, :7])


def test_left_kernel():
    F = gf2m(12)
    rng = np.random.default_rng(4)
    M = linalg.matmul(F, F.random_array(rng, (10, 3)), F.random_array(rng, (3, 8)))
    K = linalg.left_kernel(F, M)
    assert K.shape == (7, 10)
    assert not linalg.matmul(F, K, M).any()
    assert linalg.rank(F, K) == 7


def test_schur_example():
    F = gf2m(3, 0b1011)
    A = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    S = linalg.schur_complement(F, A, MinorIndex((0, 1), (0, 1)))
    assert np.array_equal(S, linalg.identity(2))
    assert np.array_equal(linalg.schur_complement(F, A, None), A)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(2, 7))
def test_schur_determinant_factorization(seed, k, extra):
    F = gf2m(8)
    rng = np.random.default_rng(seed)
    n = k + extra
    A = F.random_array(rng, (n, n))
    E = MinorIndex(range(k), range(k))
    if linalg.minor(F, A, E) == 0:
        return
    S = linalg.schur_complement(F, A, E)
    assert linalg.determinant(F, A) == F.mul(linalg.minor(F, A, E), linalg.determinant(F, S))


def test_reverse_identity_reduction():
    F = gf2m(9)
    rng = np.random.default_rng(8)
    K = F.random_array(rng, (6, 12))
    R = linalg.reduce_to_reverse_identity(F, K)
    assert np.array_equal(R[:, 6:], linalg.reverse_identity(6))
    # same row space: stacking adds no rank
    assert linalg.rank(F, np.vstack([K, R])) == 6
    K[:, 6:] = 0
    assert linalg.reduce_to_reverse_identity(F, K) is None


def test_dump_roundtrip():
    F = gf2m(16)
    A = F.random_array(np.random.default_rng(1), (4, 7))
    text = "# comment\n" + linalg.dump_matrix(A)
    assert np.array_equal(linalg.load_matrix(text), A)
