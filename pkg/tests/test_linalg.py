import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siltengine import linalg
from siltengine.linalg import GF, QQ, FieldMismatchError, Mat

F5 = GF(5)
F = GF(32003)


def test_rref_identity_fixed():
    a = F.eye(3)
    r, piv = linalg.rref(F, a)
    assert np.array_equal(r, a)
    assert piv == [0, 1, 2]


def test_rref_zero_fixed():
    a = F.zeros((2, 4))
    r, piv = linalg.rref(F, a)
    assert np.array_equal(r, a)
    assert piv == []


def test_rref_f5_rank_one():
    # [[2,1],[4,2]] over F_5: second row is twice the first
    a = F5.array([[2, 1], [4, 2]])
    r, piv = linalg.rref(F5, a)
    assert piv == [0]
    assert np.array_equal(r, F5.array([[1, 3], [0, 0]]))


def test_solve_substitute_back_f5():
    a = F5.array([[2, 1]])
    res = linalg.solve(F5, a, F5.array([1]))
    assert res is not None
    x, ker = res
    assert np.array_equal(F5.matmul(a, x.reshape(-1, 1)).reshape(-1), F5.array([1]))
    assert ker.shape[0] == 1
    for i in range(ker.shape[0]):
        assert np.all(F5.matmul(a, ker[i].reshape(-1, 1)) == 0)


def test_solve_inconsistent():
    a = F.array([[1, 0], [1, 0]])
    assert linalg.solve(F, a, F.array([1, 2])) is None


def test_quotient_dimension_f5():
    sub = F5.array([[1, 1, 0]])
    comp = linalg.complement(F5, sub, F5.eye(3))
    assert comp.shape[0] == 2
    v = F5.array([0, 1, 2])
    c = linalg.quotient_coords(F5, sub, comp, v)
    # reconstruct v modulo sub
    recon = F5.reduce(np.einsum("i,ij->j", c, comp))
    assert linalg.in_span(F5, sub, F5.reduce(v - recon))


def test_intersection_trivial():
    u = F.array([[1, 0, 0]])
    v = F.array([[0, 1, 0]])
    assert linalg.intersect_spaces(F, u, v).shape[0] == 0


def test_intersection_nontrivial():
    u = F.array([[1, 0, 0], [0, 1, 0]])
    v = F.array([[0, 1, 0], [0, 0, 1]])
    inter = linalg.intersect_spaces(F, u, v)
    assert inter.shape[0] == 1
    assert np.array_equal(inter, F.array([[0, 1, 0]]))


def test_rationals_exact():
    a = QQ.array([[1, 2], [3, 4]])
    inv = linalg.invert(QQ, a)
    assert inv is not None
    prod = QQ.matmul(a, inv)
    assert np.array_equal(prod, QQ.eye(2))
    assert inv[0, 0] == Fraction(-2)
    assert inv[0, 1] == Fraction(1)
    assert inv[1, 0] == Fraction(3, 2)


def test_invert_singular():
    a = F.array([[1, 2], [2, 4]])
    assert linalg.invert(F, a) is None


def test_mat_field_tag_mismatch():
    a = Mat(GF(5), [[1, 0], [0, 1]])
    b = Mat(GF(7), [[1, 0], [0, 1]])
    c = Mat(QQ, [[1, 0], [0, 1]])
    for other in (b, c):
        with pytest.raises(FieldMismatchError):
            a @ other
        with pytest.raises(FieldMismatchError):
            a + other


def _rand_matrix(F, rng, rows, cols):
    a = F.zeros((rows, cols))
    for i in range(rows):
        for j in range(cols):
            a[i, j] = F.rand(rng)
    return F.reduce(a)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 5), st.integers(1, 5))
def test_rref_idempotent(seed, rows, cols):
    rng = random.Random(seed)
    a = _rand_matrix(F, rng, rows, cols)
    r1, piv1 = linalg.rref(F, a)
    r2, piv2 = linalg.rref(F, r1)
    assert np.array_equal(r1, r2)
    assert piv1 == piv2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 5), st.integers(1, 5))
def test_rank_nullity(seed, rows, cols):
    rng = random.Random(seed)
    a = _rand_matrix(F, rng, rows, cols)
    ker = linalg.kernel(F, a)
    assert linalg.rank(F, a) + ker.shape[0] == cols
    for i in range(ker.shape[0]):
        assert np.all(F.matmul(a, ker[i].reshape(-1, 1)) == 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 4), st.integers(1, 4))
def test_row_space_canonical(seed, rows, cols):
    """Shuffling and rescaling rows does not change the canonical basis."""
    rng = random.Random(seed)
    a = _rand_matrix(F, rng, rows, cols)
    perm = list(range(a.shape[0]))
    rng.shuffle(perm)
    b = np.array(a[perm], copy=True)
    scale = rng.randrange(1, F.p)
    b[0] = F.reduce(b[0] * scale)
    assert np.array_equal(linalg.row_space(F, a), linalg.row_space(F, b))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_invert_roundtrip(seed, n):
    rng = random.Random(seed)
    a = _rand_matrix(F, rng, n, n)
    inv = linalg.invert(F, a)
    if inv is not None:
        assert np.array_equal(F.matmul(a, inv), F.eye(n))
        assert np.array_equal(F.matmul(inv, a), F.eye(n))
    else:
        assert linalg.rank(F, a) < n


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 4), st.integers(1, 4))
def test_sum_intersection_dimension(seed, rows1, rows2):
    rng = random.Random(seed)
    n = 5
    u = linalg.row_space(F, _rand_matrix(F, rng, rows1, n))
    v = linalg.row_space(F, _rand_matrix(F, rng, rows2, n))
    s = linalg.sum_spaces(F, u, v)
    i = linalg.intersect_spaces(F, u, v)
    assert s.shape[0] + i.shape[0] == u.shape[0] + v.shape[0]
