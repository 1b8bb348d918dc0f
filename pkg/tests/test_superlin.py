import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polynomials
from mfwb.errors import ContextError, ValidationError
from mfwb.polyring import Polynomial
from mfwb.superlin import SuperMatrix, supercommutator, supertrace

V = ("x", "y")
P = polynomials(V, max_degree=2, max_terms=2)
RANKS = (1, 2)


def homogeneous(parity, rr=RANKS, cr=RANKS):
    nr, nc = sum(rr), sum(cr)

    def build(entries):
        rows = []
        it = iter(entries)
        for i in range(nr):
            row = []
            for j in range(nc):
                p = next(it)
                ep = (int(i >= rr[0]) + int(j >= cr[0])) % 2
                row.append(p if ep == parity else Polynomial.zero(V))
            rows.append(row)
        return SuperMatrix(V, rr, cr, rows, parity)

    return st.lists(P, min_size=nr * nc, max_size=nr * nc).map(build)


@given(st.data())
def test_graded_cyclicity_of_supertrace(data):
    a, b = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    M = data.draw(homogeneous(a))
    N = data.draw(homogeneous(b))
    sign = -1 if a * b % 2 else 1
    assert supertrace(M @ N) == supertrace(N @ M).scale(sign)
    assert supertrace(supercommutator(M, N)) == Polynomial.zero(V)


@given(homogeneous(0), homogeneous(1))
def test_product_parity(M, N):
    prod = M @ N
    assert prod.is_zero() or prod.parity == 1


def test_rectangular_product():
    z, one = Polynomial.zero(V), Polynomial.constant(V, 1)
    A = SuperMatrix(V, (1, 1), (1, 0), [[one], [z]], 0)
    B = SuperMatrix(V, (1, 0), (1, 1), [[one, z]], 0)
    assert (A @ B).shape == (2, 2)
    assert (B @ A).shape == (1, 1)
    with pytest.raises(ContextError):
        A @ A


def test_declared_parity_checked():
    one = Polynomial.constant(V, 1)
    z = Polynomial.zero(V)
    with pytest.raises(ValidationError):
        SuperMatrix(V, (1, 1), (1, 1), [[one, z], [z, one]], 1)
    S = SuperMatrix(V, (1, 1), (1, 1), [[one, one], [z, one]])
    assert S.parity is None
    assert S.homogeneous_part(0).parity == 0


def test_identity_supertrace():
    assert supertrace(SuperMatrix.identity(V, (3, 1))) == Polynomial.constant(V, 2)
