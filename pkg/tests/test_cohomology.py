import pytest

from mfwb.cohomology import euler_characteristic, hom_cohomology, null_homotopy
from mfwb.corpus import a_k_factorization, cubic_koszul, cubic_line, xy_factorization
from mfwb.mfcore import direct_sum, hom_differential, shift
from mfwb.milnor import MilnorContext


def test_xy_endomorphisms():
    E = xy_factorization()
    rep = hom_cohomology(E, E)
    assert rep.dims == (1, 0)
    F = rep.representatives[0][0].matrix
    c = F.rows[0][0]
    assert c.is_constant() and c and F == E.identity().matrix.scale(c)
    assert len({t[1:] for t in rep.trajectory[-3:]}) == 1


def test_a2_endomorphisms():
    E = a_k_factorization(2, 1)
    rep = hom_cohomology(E, E)
    assert rep.dims == (1, 1)
    odd = rep.representatives[1][0]
    assert odd.matrix.to_strings() in ([["0", "1"], ["-x", "0"]], [["0", "-1"], ["x", "0"]])


def test_a3_mixed_pair():
    X, Y = a_k_factorization(3, 1), a_k_factorization(3, 2)
    assert hom_cohomology(X, Y).dims == (1, 1)


@pytest.mark.parametrize("k", [2, 3])
def test_closed_form(k):
    mc = MilnorContext(a_k_factorization(k, 1).ctx)
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            m = min(a, b, k + 1 - a, k + 1 - b)
            assert hom_cohomology(a_k_factorization(k, a), a_k_factorization(k, b), mc).dims == (m, m)


def test_trajectory_respects_initial_truncation():
    E = xy_factorization()
    rep = hom_cohomology(E, E, trunc=3)
    assert rep.trajectory[0][0] == 3
    assert rep.truncation >= 3


def test_representatives_closed_and_null_homotopy():
    for X, Y in [(cubic_koszul(), cubic_line()), (a_k_factorization(3, 2), a_k_factorization(3, 2))]:
        rep = hom_cohomology(X, Y)
        for reps in rep.representatives:
            for F in reps:
                assert hom_differential(F).is_zero()
                for i in range(X.ctx.n):
                    h = null_homotopy(F, i)
                    assert hom_differential(h) == F.scale(X.ctx.w.derivative(i))


def test_euler_examples_and_shift():
    E = xy_factorization()
    assert euler_characteristic(E, E) == 1
    assert euler_characteristic(E, shift(E)) == -1
    A = a_k_factorization(2, 1)
    assert euler_characteristic(A, A) == 0


def test_euler_additivity():
    K, L = cubic_koszul(), cubic_line()
    mc = MilnorContext(K.ctx)
    lhs = euler_characteristic(direct_sum(K, L), L, mc)
    assert lhs == euler_characteristic(K, L, mc) + euler_characteristic(L, L, mc)


def test_euler_vanishes_for_odd_n():
    for a in (1, 2):
        for b in (1, 2, 3):
            assert euler_characteristic(a_k_factorization(3, a), a_k_factorization(3, b)) == 0
