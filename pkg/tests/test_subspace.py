import numpy as np
import pytest

from toricsplit import _kernels
from toricsplit.field import GF
from toricsplit.subspace import (
    DimensionMismatch,
    Subspace,
    mat_det,
    mat_inverse,
    matmul,
    nullspace,
    subspace_contains,
    subspace_eq,
    subspace_intersect,
    subspace_sum,
)


def random_subspace(rng, F, m):
    k = int(rng.integers(0, m + 1))
    return Subspace.span(F, rng.integers(0, F.q, size=(k, m)), m)


def test_examples():
    F = GF(3)
    U = Subspace.span(F, [[1, 2, 0], [0, 1, 1]], 3)
    assert subspace_intersect(U, U) == U
    l1 = Subspace.span(F, [[1, 0]], 2)
    l2 = Subspace.span(F, [[1, 1]], 2)
    assert subspace_intersect(l1, l2).is_zero()
    assert subspace_sum(l1, l2).is_full()
    assert subspace_contains(U, [1, 0, 1]) and not subspace_contains(U, [1, 0, 2])
    assert subspace_eq(U, Subspace.span(F, [[1, 0, 1], [0, 1, 1]], 3))


def test_mismatch():
    F = GF(2)
    with pytest.raises(DimensionMismatch):
        Subspace.full(F, 2) & Subspace.full(F, 3)


@pytest.mark.parametrize("p,d,m", [(3, 1, 5), (2, 2, 4), (5, 1, 3)])
def test_modular_law(rng, p, d, m):
    F = GF(p, d)
    for _ in range(1000):
        U, V = random_subspace(rng, F, m), random_subspace(rng, F, m)
        I, S = U & V, U + V
        assert I.dim + S.dim == U.dim + V.dim
        assert I <= U and I <= V and U <= S and V <= S


@pytest.mark.parametrize("p,d", [(3, 1), (2, 3)])
def test_canonical_form_fixed_point(rng, p, d):
    F = GF(p, d)
    for _ in range(200):
        U = random_subspace(rng, F, 5)
        again = Subspace.span(F, U.rows, 5)
        assert again == U and np.array_equal(again.rows, U.rows)
        # A random change of spanning set gives the same canonical rows.
        if U.dim:
            mix = rng.integers(0, F.q, size=(U.dim + 2, U.dim))
            assert Subspace.span(F, matmul(F, mix, U.rows), 5) <= U


def test_inverse_det_nullspace(rng):
    F = GF(7)
    for _ in range(50):
        A = rng.integers(0, 7, size=(4, 4))
        if mat_det(F, A):
            Ai = mat_inverse(F, A)
            assert np.array_equal(matmul(F, A, Ai), np.eye(4, dtype=np.int64))
        N = nullspace(F, A)
        if N.size:
            assert not matmul(F, A, N.T).any()


def test_complement_and_annihilator(rng):
    F = GF(3)
    for _ in range(100):
        U, V = random_subspace(rng, F, 4), random_subspace(rng, F, 4)
        S = U + V
        C = U.complement_in(S)
        assert (U + C) == S and (U & C).is_zero()
        A = U.annihilator()
        assert A.dim == 4 - U.dim
        if U.dim and A.dim:
            assert not matmul(F, U.rows, A.rows.T).any()


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("p,d", [(2, 1), (3, 2), (7, 1)])
def test_backends_agree(rng, p, d):
    F = GF(p, d)
    tabs = (F.add_table, F.mul_table, F.neg_table, F.inv_table)
    for _ in range(100):
        M = rng.integers(0, F.q, size=(int(rng.integers(1, 7)), int(rng.integers(1, 7))))
        R1, p1 = _kernels.rref_numpy(M, *tabs)
        R2, p2 = _kernels.rref_numba(M, *tabs)
        assert np.array_equal(R1, R2) and np.array_equal(p1, p2)
        B = rng.integers(0, F.q, size=(M.shape[1], 3))
        assert np.array_equal(_kernels.matmul_numpy(M, B, F.add_table, F.mul_table), _kernels.matmul_numba(M, B, F.add_table, F.mul_table))


def test_extend_scalars():
    F, K = GF(2), GF(2, 2)
    U = Subspace.span(F, [[1, 1, 0]], 3)
    UK = U.extend_scalars(K)
    assert UK.field is K and UK.dim == 1 and UK.contains([1, 1, 0])
