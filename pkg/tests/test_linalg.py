from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from yonkit.linalg import Field, Matrix, QQ, SubspaceReducer


def M(rows):
    return Matrix(QQ, rows)


def test_rref_proportional_rows():
    R, piv = M([[1, 2], [2, 4]]).rref()
    assert piv == [0]
    assert R.data[0] == [Fraction(1), Fraction(2)]
    assert R.data[1] == [Fraction(0), Fraction(0)]


def test_rref_identity():
    I = Matrix.identity(QQ, 3)
    R, piv = I.rref()
    assert R == I and piv == [0, 1, 2]


def test_rref_zero():
    Z = Matrix.zeros(QQ, 2, 2)
    R, piv = Z.rref()
    assert R == Z and piv == []


def test_kernel_single_relation():
    K = M([[1, 1]]).kernel_basis()
    assert K.cols == 1
    assert K.col(0) in ([Fraction(-1), Fraction(1)], [Fraction(1), Fraction(-1)])


def test_kernel_identity_and_zero():
    assert Matrix.identity(QQ, 3).kernel_basis().cols == 0
    assert Matrix.zeros(QQ, 2, 3).kernel_basis().cols == 3


def test_solve_cases():
    I = Matrix.identity(QQ, 2)
    assert I.solve([3, 4]) == [Fraction(3), Fraction(4)]
    x = M([[1, 1]]).solve([0])
    assert x is not None and x[0] + x[1] == 0
    assert M([[1], [0]]).solve([0, 1]) is None


small = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw):
    r = draw(st.integers(min_value=1, max_value=4))
    c = draw(st.integers(min_value=1, max_value=4))
    return Matrix(QQ, [[draw(small) for _ in range(c)] for _ in range(r)])


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(m):
    R, _ = m.rref()
    R2, _ = R.rref()
    assert R2 == R


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    assert m.rank() + m.kernel_basis().cols == m.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_annihilates(m):
    K = m.kernel_basis()
    for j in range(K.cols):
        assert all(x == 0 for x in m.apply(K.col(j)))


@given(matrices())
@settings(max_examples=40, deadline=None)
def test_solve_consistency(m):
    b = [sum(row) for row in m.data]  # b = m @ (1,...,1), always solvable
    x = m.solve(b)
    assert x is not None
    assert m.apply(x) == [QQ(v) for v in b]
    aug = m.hstack(Matrix.from_cols(QQ, [b]))
    _, piv = aug.rref()
    assert m.cols not in piv


def test_prime_field_roundtrip():
    F5 = Field(5)
    m = Matrix(F5, [[1, 2], [3, 4]])
    assert m.rank() == 2
    inv = m.inverse()
    assert m * inv == Matrix.identity(F5, 2)


def test_field_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        Field(6)


def test_subspace_reducer():
    red = SubspaceReducer(QQ, 3)
    assert red.add([1, 2, 3])
    assert red.add([0, 1, 1])
    assert not red.add([1, 3, 4])
    assert red.contains([2, 5, 7])
    assert not red.contains([0, 0, 1])
    assert red.rank == 2
