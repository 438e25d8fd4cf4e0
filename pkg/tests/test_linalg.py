#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import dataclasses
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from backend.algebra import alg_compare, alg_sqrt, rational_bounds
from backend.errors import DependentVectorsError, NotPositiveDefiniteError, NotSymmetricError, SingularMatrixError
from backend.linalg import (ExactMatrix, charpoly_newton, frobenius_bound, eigenblocks_consistent, gram_schmidt, mat_det, mat_inverse,
                            mat_rank, null_space_basis, pencil_decompose, rationalize, spectral_decompose)


def test_charpoly_of_small_symmetric_matrix():
    coefficients = charpoly_newton(ExactMatrix.from_rows([[2, 1], [1, 2]]))
    assert [c.as_fraction() for c in coefficients] == [3, -4, 1]


def test_spectral_decomposition_of_rational_matrix():
    A = ExactMatrix.from_rows([[2, 1], [1, 2]])
    eig = spectral_decompose(A)
    assert [e.as_fraction() for e in eig.eigenvalues] == [1, 3]
    V = eig.eigenvectors
    assert V.T @ V == ExactMatrix.identity(2)
    assert A @ V == V @ ExactMatrix.diag(eig.eigenvalues)


def test_spectral_decomposition_with_irrational_eigenvalues():
    A = ExactMatrix.from_rows([[1, 1], [1, 0]])
    eig = spectral_decompose(A)
    low, high = eig.eigenvalues
    # (1 ± √5)/2
    assert alg_compare(high - low, alg_sqrt(5)) == 0
    V = eig.eigenvectors
    assert V.T @ V == ExactMatrix.identity(2)
    assert A @ V == V @ ExactMatrix.diag(eig.eigenvalues)


def test_repeated_eigenvalue_keeps_full_eigenspace():
    eig = spectral_decompose(ExactMatrix.identity(3).scale(2))
    assert [e.as_fraction() for e in eig.eigenvalues] == [2, 2, 2]
    assert eig.eigenvectors.T @ eig.eigenvectors == ExactMatrix.identity(3)


def test_pencil_decomposition():
    A = ExactMatrix.diag([1, 4])
    B = ExactMatrix.from_rows([[0, 2], [2, 0]])
    pencil = pencil_decompose(A, B)
    assert [m.as_fraction() for m in pencil.mu] == [-1, 1]
    assert pencil.signs == (-1, 1)
    T = pencil.T
    assert T.T @ A @ T == ExactMatrix.identity(2)
    assert T.T @ B @ T == ExactMatrix.diag(pencil.mu)
    assert pencil.T_inv @ T == ExactMatrix.identity(2)


def test_pencil_with_zero_speed():
    pencil = pencil_decompose(ExactMatrix.identity(2), ExactMatrix.diag([0, 3]))
    assert [m.as_fraction() for m in pencil.mu] == [0, 3]
    assert pencil.signs == (0, 1)


def test_pencil_rejects_bad_input():
    with pytest.raises(NotSymmetricError):
        pencil_decompose(ExactMatrix.from_rows([[1, 1], [0, 1]]), ExactMatrix.identity(2))
    with pytest.raises(NotPositiveDefiniteError):
        pencil_decompose(ExactMatrix.diag([1, -1]), ExactMatrix.identity(2))


def test_inverse_det_rank():
    X = ExactMatrix.from_rows([[2, 1], [4, 3]])
    assert mat_det(X).as_fraction() == 2
    assert X @ mat_inverse(X) == ExactMatrix.identity(2)
    singular = ExactMatrix.from_rows([[1, 2], [2, 4]])
    assert mat_rank(singular) == 1
    (v,) = null_space_basis(singular)
    assert [e.as_fraction() for e in v] == [-2, 1]
    with pytest.raises(SingularMatrixError):
        mat_inverse(singular)


def test_gram_schmidt():
    u, v = gram_schmidt([[1, 1], [1, 0]])
    s = alg_sqrt(2)
    assert u[0] == u[1] == 1 / s
    assert v[0] == 1 / s and v[1] == -1 / s
    with pytest.raises(DependentVectorsError):
        gram_schmidt([[1, 2], [2, 4]])


def test_frobenius_bound():
    assert frobenius_bound(ExactMatrix.identity(2))**2 >= 2
    assert frobenius_bound(ExactMatrix.diag([3, 4])) == 5


def test_rationalize():
    rows, err = rationalize(ExactMatrix.diag([Fraction(1, 2), 1]), 4)
    assert rows == [[Fraction(1, 2), 0], [0, 1]] and err == 0
    rows, err = rationalize(ExactMatrix.diag([alg_sqrt(2)]), 8)
    assert 0 < err <= Fraction(1, 2**8)
    assert abs(rows[0][0] - Fraction(181, 128)) <= Fraction(1, 2**8)


@st.composite
def symmetric(draw, n:int, height:int=3):
    entries = st.integers(min_value=-height, max_value=height)
    upper = {(i, j): draw(entries) for i in range(n) for j in range(i, n)}
    return ExactMatrix.from_rows([[upper[min(i, j), max(i, j)] for j in range(n)] for i in range(n)])


def _rows(X:ExactMatrix):
    return [[e.as_fraction() for e in X.row(i)] for i in range(X.rows)]


def _floats(X:ExactMatrix) -> np.ndarray:
    return np.array([[float(sum(rational_bounds(e, Fraction(1, 2**60))) / 2) for e in X.row(i)] for i in range(X.rows)])


def _check_spectral(A:ExactMatrix):
    eig = spectral_decompose(A)
    V = eig.eigenvectors
    assert list(eig.eigenvalues) == sorted(eig.eigenvalues)
    assert V.T @ V == ExactMatrix.identity(A.rows)
    assert A @ V == V @ ExactMatrix.diag(eig.eigenvalues)


def _check_spectral_blocks(A:ExactMatrix):
    """Exact residuals through the field blocks; the materialized V is compared in floating point."""
    eig = spectral_decompose(A)
    n = A.rows
    assert list(eig.eigenvalues) == sorted(eig.eigenvalues)
    assert eigenblocks_consistent(_rows(A), _rows(ExactMatrix.identity(n)), eig.blocks)
    for block in eig.blocks:
        for root in block.roots:
            assert sum(1 for lam in eig.eigenvalues if lam == root) == len(block.basis)
    V, lam = _floats(eig.eigenvectors), np.diag([float(sum(rational_bounds(e, Fraction(1, 2**60))) / 2) for e in eig.eigenvalues])
    assert np.allclose(_floats(A) @ V, V @ lam, atol=1e-9)
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-9)
    _check_charpoly(A)


@given(symmetric(2))
@settings(max_examples=10)
def test_random_spectral_residuals(A):
    _check_spectral(A)


def test_spectral_decomposition_of_dense_integer_4x4():
    rng = random.Random(1)
    upper = {(i, j): rng.randint(-10, 10) for i in range(4) for j in range(i, 4)}
    _check_spectral_blocks(ExactMatrix.from_rows([[upper[min(i, j), max(i, j)] for j in range(4)] for i in range(4)]))


def test_conjugate_eigenvalues_share_one_block():
    eig = spectral_decompose(ExactMatrix.from_rows([[1, 1], [1, 0]]))
    (block,) = eig.blocks
    assert block.field.degree == 2
    assert block.roots == eig.eigenvalues


def test_block_check_rejects_wrong_norms():
    A = ExactMatrix.from_rows([[2, 1], [1, 2]])
    eig = spectral_decompose(A)
    identity = _rows(ExactMatrix.identity(2))
    assert eigenblocks_consistent(_rows(A), identity, eig.blocks)
    block = eig.blocks[0]
    tampered = dataclasses.replace(block, norms=tuple(n + n for n in block.norms))
    assert not eigenblocks_consistent(_rows(A), identity, (tampered,) + eig.blocks[1:])
    assert not eigenblocks_consistent(_rows(ExactMatrix.from_rows([[2, 0], [0, 2]])), identity, eig.blocks)


@pytest.mark.slow
@given(st.integers(min_value=2, max_value=4).flatmap(lambda n: symmetric(n, height=10)))
@settings(max_examples=200)
def test_random_spectral_sweep(A):
    _check_spectral_blocks(A)


def _check_charpoly(A:ExactMatrix):
    x = sp.Symbol('x')
    cofactor = sp.Matrix([[e.as_fraction() for e in row] for row in A.to_rows()]).charpoly(x).all_coeffs()[::-1]
    assert [c.as_fraction() for c in charpoly_newton(A)] == [Fraction(int(sp.numer(c)), int(sp.denom(c))) for c in cofactor]


@given(symmetric(3))
@settings(max_examples=10)
def test_newton_charpoly_matches_cofactor_expansion(A):
    _check_charpoly(A)


@st.composite
def pencils(draw, n:int):
    """(GᵀG + I, B) with G integer and B symmetric."""
    G = ExactMatrix.from_rows([[draw(st.integers(min_value=-2, max_value=2)) for _ in range(n)] for _ in range(n)])
    return G.T @ G + ExactMatrix.identity(n), draw(symmetric(n))


def _check_pencil(A:ExactMatrix, B:ExactMatrix):
    pencil = pencil_decompose(A, B)
    assert eigenblocks_consistent(_rows(B), _rows(A), pencil.blocks)
    if A.rows <= 2:
        for mu in set(pencil.mu):
            assert mat_det(A.scale(mu) - B).is_zero
        assert pencil.T.T @ A @ pencil.T == ExactMatrix.identity(A.rows)
        assert pencil.T.T @ B @ pencil.T == ExactMatrix.diag(pencil.mu)
        assert pencil.T_inv @ pencil.T == ExactMatrix.identity(A.rows)
    else:
        T, T_inv = _floats(pencil.T), _floats(pencil.T_inv)
        assert np.allclose(T.T @ _floats(A) @ T, np.eye(A.rows), atol=1e-9)
        assert np.allclose(T_inv @ T, np.eye(A.rows), atol=1e-9)


@given(pencils(2))
@settings(max_examples=5)
def test_random_pencils(case):
    _check_pencil(*case)


@pytest.mark.slow
@given(st.integers(min_value=1, max_value=3).flatmap(pencils))
@settings(max_examples=100)
def test_random_pencil_sweep(case):
    _check_pencil(*case)
