from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffindicator.matrix import ExactMatrix, SingularMatrixError, solve_exact


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def square_matrices(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return [[draw(small_rationals) for _ in range(n)] for _ in range(n)]


def test_solve_small_system():
    a = ExactMatrix([[2, 1], [1, 3]])
    assert solve_exact(a, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]


def test_identity_and_zeros():
    assert ExactMatrix.identity(3) @ ExactMatrix([[1, 2, 3]] * 3) == ExactMatrix([[1, 2, 3]] * 3)
    assert ExactMatrix.zeros(2, 3).shape == (2, 3)


def test_transpose_and_indexing():
    a = ExactMatrix([[1, 2, 3], [4, 5, 6]])
    assert a.T.shape == (3, 2)
    assert a.T[2, 1] == 6
    assert a.column(1) == (2, 5)


def test_singular_matrix_raises():
    a = ExactMatrix([[1, 2], [2, 4]])
    assert a.determinant() == 0
    with pytest.raises(SingularMatrixError):
        a.inverse()
    with pytest.raises(SingularMatrixError):
        solve_exact(a, [1, 1])


def test_shape_errors():
    with pytest.raises(ValueError):
        solve_exact(ExactMatrix([[1, 2, 3], [4, 5, 6]]), [1, 2])
    with pytest.raises(ValueError):
        solve_exact(ExactMatrix([[1, 0], [0, 1]]), [1, 2, 3])


def test_fractional_entries():
    a = ExactMatrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]])
    inv = a.inverse()
    assert a @ inv == ExactMatrix.identity(2)
    assert a.determinant() == Fraction(1, 10) - Fraction(1, 12)


@settings(max_examples=150, deadline=None)
@given(square_matrices())
def test_determinant_matches_leibniz(rows):
    assert ExactMatrix(rows).determinant() == leibniz_det(rows)


@settings(max_examples=150, deadline=None)
@given(square_matrices(), st.data())
def test_solve_is_exact(rows, data):
    a = ExactMatrix(rows)
    b = [data.draw(small_rationals) for _ in rows]
    if a.determinant() == 0:
        with pytest.raises(SingularMatrixError):
            solve_exact(a, b)
        return
    x = solve_exact(a, b)
    assert a.matvec(x) == b
    assert a @ a.inverse() == ExactMatrix.identity(len(rows))
