import random
from fractions import Fraction

import numpy as np
import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.linalg import Matrix, Subspace, block_diag, sparse_nullspace


def rand_int_matrix(K, rng, n, m, rank=None):
    if rank is None:
        return Matrix.from_values(K, [[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)])
    A = [[rng.randint(-3, 3) for _ in range(rank)] for _ in range(n)]
    B = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(rank)]
    prod = [[sum(A[i][t] * B[t][j] for t in range(rank)) for j in range(m)] for i in range(n)]
    return Matrix.from_values(K, prod)


def to_numpy(M):
    return np.array([[float(x.to_fraction()) for x in r] for r in M.rows])


@pytest.mark.parametrize("seed", range(15))
def test_rank_matches_numpy(seed):
    K = field(5)
    rng = random.Random(seed)
    n, m = rng.randint(1, 7), rng.randint(1, 7)
    M = rand_int_matrix(K, rng, n, m, rank=rng.randint(0, min(n, m)))
    assert M.rank() == np.linalg.matrix_rank(to_numpy(M))
    for v in M.nullspace():
        assert not any(M.apply(v))
    assert M.rank() + M.nullity() == m


def test_cyclotomic_solve_and_inverse():
    K = field(7)
    rng = random.Random(3)
    for _ in range(5):
        rows = [[K.from_coeffs([rng.randint(-2, 2) for _ in range(K.phi)]) for _ in range(4)] for _ in range(4)]
        M = Matrix(K, rows)
        if not M.is_invertible():
            continue
        assert (M @ M.inverse()).is_identity()
        b = Matrix.from_columns(K, [[K.zeta, K.one, K.zero, K.q]], 4)
        x = M.solve(b)
        assert M @ x == b
        assert M.det() * M.inverse().det() == K.one


def test_inconsistent_solve_returns_none():
    K = field(3)
    M = Matrix.from_values(K, [[1, 1], [1, 1]])
    assert M.solve(Matrix.from_values(K, [[1], [2]])) is None


def test_det_matches_numpy():
    K = field(3)
    rng = random.Random(11)
    for _ in range(10):
        M = rand_int_matrix(K, rng, 5, 5)
        assert abs(float(M.det().to_fraction()) - np.linalg.det(to_numpy(M))) < 1e-6


def test_subspace_operations():
    K = field(3)
    e = lambda *xs: [K(x) for x in xs]
    S = Subspace.span(K, [e(1, 1, 0), e(2, 2, 0)], 3)
    T = Subspace.span(K, [e(0, 1, 1)], 3)
    assert S.dim == 1
    assert (S + T).dim == 2
    assert S.intersect(T).dim == 0
    assert (S + T).contains(e(1, 2, 1))
    assert not S.contains(e(0, 0, 1))
    v = e(3, 3, 0)
    assert S.coord_matrix().apply(v) == [K(3)]
    assert (S.coord_matrix() @ S.matrix()).is_identity()


def test_block_diag_and_sparse_nullspace():
    K = field(3)
    D = block_diag(K, [Matrix.identity(K, 2), Matrix.scalar(K, 1, K(Fraction(1, 2)))])
    assert D.shape == (3, 3) and D.trace() == K(Fraction(5, 2))
    eqs = [{0: K.one, 1: K(-1)}, {1: K.one, 2: K(-1)}]
    ns = sparse_nullspace(K, eqs, 4)
    assert len(ns) == 2
    dense = Matrix.from_values(K, [[1, -1, 0, 0], [0, 1, -1, 0]])
    for v in ns:
        assert not any(dense.apply(v))
