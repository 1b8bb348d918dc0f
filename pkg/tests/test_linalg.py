from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions
from mfwb import linalg

rows_st = st.lists(st.dictionaries(st.integers(0, 3), fractions, max_size=4), min_size=1, max_size=4)


def _apply(rows, v):
    return [sum((c * v.get(j, 0) for j, c in r.items()), Fraction(0)) for r in rows]


@given(rows_st)
def test_nullspace_is_kernel_of_right_size(rows):
    M = linalg.matrix(rows, 4)
    ns = linalg.nullspace(M)
    assert len(ns) + linalg.rank(M) == 4
    for v in ns:
        assert not any(_apply(rows, v))


@given(rows_st, st.dictionaries(st.integers(0, 3), fractions, max_size=4))
def test_solve_consistent_systems(rows, x):
    b = _apply(rows, x)
    sol = linalg.solve(rows, b, 4)
    assert sol is not None
    assert _apply(rows, sol) == b


def test_solve_inconsistent():
    assert linalg.solve([{0: Fraction(1)}, {0: Fraction(1)}], [Fraction(0), Fraction(1)], 1) is None


def test_independent_columns_greedy():
    cols = [{0: Fraction(1)}, {0: Fraction(2)}, {1: Fraction(1)}]
    assert linalg.independent_columns(cols, 2) == (0, 2)


def test_identity_and_zero():
    assert linalg.is_zero(linalg.zero(3, 2))
    assert not linalg.is_zero(linalg.dense_identity(2))
    assert linalg.rank(linalg.dense_identity(3)) == 3
