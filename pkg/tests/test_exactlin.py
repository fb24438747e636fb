import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cinfinity.exactlin import (CompositionNonzero, SparseMatrix, kernel_basis,
                                quotient_and_homology, rank, rref, solve)


def det_cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def test_rref_dependent_rows():
    r, piv, rk = rref(SparseMatrix.from_dense([[1, 2], [2, 4]]))
    assert rk == 1 and piv == [0]
    assert r.to_dense()[0] == [1, 2]


def test_rank_of_zero():
    assert rank(SparseMatrix.from_dense([[0]])) == 0


def test_random_invertible_full_rank():
    rng = random.Random(7)
    while True:
        rows = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(6)]
        if det_cofactor(rows):
            break
    assert rank(SparseMatrix.from_dense(rows)) == 6


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.identity(3)) == []
    assert len(kernel_basis(SparseMatrix.zero(2, 3))) == 3
    m = SparseMatrix.from_dense([[1, 1, 0], [0, 0, 1]])
    (v,) = kernel_basis(m)
    assert m.matvec(v) == [0, 0]
    assert v[0] == -v[1] and v[2] == 0 and v[0] != 0


def test_solve_examples():
    b = [Fraction(3), Fraction(-1, 2), Fraction(7)]
    assert solve(SparseMatrix.identity(3), b) == b
    assert solve(SparseMatrix.zero(2, 2), [1, 0]) is None


def test_solve_planted():
    rng = random.Random(11)
    m = SparseMatrix.from_dense([[rng.randint(-4, 4) for _ in range(3)] for _ in range(4)])
    x0 = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)]
    b = m.matvec(x0)
    x = solve(m, b)
    assert x is not None and m.matvec(x) == b


def test_homology_examples():
    z = SparseMatrix.zero
    assert quotient_and_homology(z(3, 1), z(1, 3))[0] == 3
    assert quotient_and_homology(SparseMatrix.identity(3), z(1, 3))[0] == 0
    # QB of the (1,0) example at word length 3: d = [1 0] into the z line
    dim, reps = quotient_and_homology(z(2, 1), SparseMatrix.from_dense([[1, 0]]))
    assert dim == 1 and reps[0][0] == 0


def test_homology_rejects_non_complex():
    with pytest.raises(CompositionNonzero):
        quotient_and_homology(SparseMatrix.identity(2), SparseMatrix.identity(2))
    with pytest.raises(ValueError):
        quotient_and_homology(SparseMatrix.zero(2, 2), SparseMatrix.zero(2, 3))


small = st.integers(-3, 3)
matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert not any(m.matvec(v))


@given(matrices, st.lists(small, min_size=5, max_size=5))
@settings(max_examples=80, deadline=None)
def test_solve_sound(rows, rhs):
    m = SparseMatrix.from_dense(rows)
    b = rhs[:m.rows]
    x = solve(m, b)
    if x is not None:
        assert m.matvec(x) == b
    else:
        aug = SparseMatrix.from_dense([r + [v] for r, v in zip(rows, b)])
        assert rank(aug) > rank(m)


@given(matrices)
@settings(max_examples=50, deadline=None)
def test_homology_dimension_formula(rows):
    d_in = SparseMatrix.from_dense(rows)
    # d_out kills the image: project onto a complement of the column space
    cols = [list(c) for c in zip(*d_in.to_dense())]
    left = kernel_basis(d_in.transpose())
    d_out = SparseMatrix.from_dense(left, d_in.rows) if left else SparseMatrix.zero(0, d_in.rows)
    dim, reps = quotient_and_homology(d_in, d_out)
    assert dim == len(kernel_basis(d_out)) - rank(d_in)
    assert len(reps) == dim
