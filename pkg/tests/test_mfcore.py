import random

import pytest

from mfwb.corpus import (
    a_k_factorization,
    corpus_factorizations,
    cubic_koszul,
    random_koszul_factorization,
    random_morphism,
    xy_factorization,
)
from mfwb.errors import ValidationError
from mfwb.mfcore import (
    Morphism,
    direct_sum,
    dq_wedge,
    hom_differential,
    leibniz_defect,
    shift,
    square_defect,
    validate_mf,
)
from mfwb.polyring import RingContext
from mfwb.superlin import SuperMatrix, supertrace


def test_validate_examples():
    validate_mf([["x"]], [["y"]], RingContext.from_strings(["x", "y"], "x*y"))
    validate_mf([["x"]], [["x^2"]], RingContext.from_strings(["x"], "x^3"))
    with pytest.raises(ValidationError) as ei:
        validate_mf([["x"]], [["x"]], RingContext.from_strings(["x"], "x^3"), "E")
    err = ei.value.to_dict()
    assert err["where"] == "E"
    assert err["entry"] == ["phi*psi", 0, 0]


@pytest.mark.parametrize("label,X", corpus_factorizations(), ids=lambda v: v if isinstance(v, str) else "")
def test_square_and_leibniz_on_corpus(label, X):
    assert square_defect(X).is_zero()
    for i in range(X.ctx.n):
        assert leibniz_defect(X, i).is_zero()


def test_hom_differential_examples():
    E = a_k_factorization(2, 1)
    assert hom_differential(E.identity()).is_zero()
    Q = Morphism(E, E, E.Q, 1)
    two_w = SuperMatrix.identity(E.variables, E.ranks).scale(E.ctx.w.scale(2))
    assert hom_differential(Q).matrix == two_w
    F = Morphism.from_rows(E, E, [["2", "0"], ["0", "5"]], 0)
    assert hom_differential(F).matrix.to_strings() == [["0", "3*x"], ["-3*x^2", "0"]]


def test_differential_squares_to_zero():
    rng = random.Random(1)
    for label, X in corpus_factorizations():
        Y = X
        for parity in (0, 1):
            F = random_morphism(rng, X, Y, parity)
            assert hom_differential(hom_differential(F)).is_zero(), label


def test_differential_is_a_derivation_for_composition():
    rng = random.Random(2)
    X = cubic_koszul()
    for a in (0, 1):
        for b in (0, 1):
            F, G = random_morphism(rng, X, X, a), random_morphism(rng, X, X, b)
            lhs = hom_differential(F @ G)
            rhs = hom_differential(F) @ G
            rhs = rhs + (F @ hom_differential(G)).scale(-1 if a else 1)
            assert lhs == rhs


def test_dq_wedge_examples():
    E = a_k_factorization(2, 1)
    assert dq_wedge(E).to_strings() == [["0", "1"], ["2*x", "0"]]
    W = dq_wedge(xy_factorization())
    assert W.to_strings() == [["1", "0"], ["0", "-1"]]
    assert supertrace(W) == xy_factorization().ctx.const(2)


def test_dq_wedge_vanishes_when_q_ignores_a_variable():
    ctx = RingContext.from_strings(["x", "y"], "x^3")
    assert dq_wedge(validate_mf([["x"]], [["x^2"]], ctx)).is_zero()


def test_dq_wedge_paths_agree():
    rng = random.Random(3)
    for n in (1, 2, 3):
        for _ in range(5):
            X = random_koszul_factorization(rng, n)
            assert dq_wedge(X) == dq_wedge(X, naive=True)


def test_direct_sum_and_shift():
    E = xy_factorization()
    S = direct_sum(E, E)
    assert S.rank == 2
    assert [[str(p) for p in r] for r in S.phi] == [["x", "0"], ["0", "x"]]
    assert square_defect(S).is_zero()
    assert dq_wedge(S) == dq_wedge(E).direct_sum(dq_wedge(E))
    T = shift(E)
    assert [[str(p) for p in r] for r in T.phi] == [["-y"]]
    assert [[str(p) for p in r] for r in T.psi] == [["-x"]]
    assert square_defect(T).is_zero()


def test_morphism_parity_and_shape_checks():
    E = xy_factorization()
    with pytest.raises(ValidationError):
        Morphism.from_rows(E, E, [["1", "0"], ["0", "1"]], 1)
