import random
from fractions import Fraction

import pytest

from mfwb import linalg
from mfwb.cohomology import hom_cohomology
from mfwb.corpus import (
    a_k_factorization,
    cubic_koszul,
    cubic_line,
    random_morphism,
    xy_factorization,
)
from mfwb.errors import ContextError
from mfwb.klpair import gram_matrix, kl_pairing, kl_pairing_reversed, kl_sign
from mfwb.mfcore import Morphism, hom_differential
from mfwb.milnor import MilnorContext


def test_sign():
    assert kl_sign(1) == -1
    assert kl_sign(2) == Fraction(-1, 2)
    assert kl_sign(3) == Fraction(1, 6)


def test_examples():
    E = a_k_factorization(2, 1)
    mc = MilnorContext(E.ctx)
    G = Morphism.from_rows(E, E, [["0", "1"], ["-x", "0"]], 1)
    assert kl_pairing(E.identity(), G, mc) == -1

    X = xy_factorization()
    mc = MilnorContext(X.ctx)
    assert kl_pairing(X.identity(), X.identity(), mc) == 1
    yid = X.identity().scale(X.ctx.var("y"))
    assert kl_pairing(yid, X.identity(), mc) == 0


def test_parity_mismatch_is_zero():
    E = a_k_factorization(2, 1)
    mc = MilnorContext(E.ctx)
    assert kl_pairing(E.identity(), E.identity(), mc) == 0


def test_shape_mismatch_raises():
    X, Y = cubic_koszul(), cubic_line()
    mc = MilnorContext(X.ctx)
    with pytest.raises(ContextError):
        kl_pairing(X.identity(), Y.identity(), mc)


@pytest.mark.parametrize(
    "X,Y",
    [
        (a_k_factorization(2, 1), a_k_factorization(2, 1)),
        (xy_factorization(), xy_factorization()),
        (a_k_factorization(3, 1), a_k_factorization(3, 2)),
        (cubic_koszul(), cubic_line()),
    ],
    ids=["a2", "xy", "a3-mixed", "cubic"],
)
def test_gram_nondegenerate(X, Y):
    rep = gram_matrix(X, Y, MilnorContext(X.ctx))
    assert rep.nondegenerate
    assert rep.determinant != 0


def test_gram_examples():
    E = a_k_factorization(2, 1)
    rep = gram_matrix(E, E, MilnorContext(E.ctx))
    assert [abs(b.matrix[0][0]) for b in rep.blocks] == [1, 1]
    X = xy_factorization()
    rep = gram_matrix(X, X, MilnorContext(X.ctx))
    assert rep.blocks[0].matrix in ([[1]], [[-1]]) and rep.blocks[1].shape == (0, 0)


def test_homotopy_invariance_and_scaling():
    rng = random.Random(7)
    X, Y = cubic_koszul(), cubic_line()
    mc = MilnorContext(X.ctx)
    fwd, bwd = hom_cohomology(X, Y, mc), hom_cohomology(Y, X, mc)
    for p in (0, 1):
        for F in fwd.representatives[p]:
            for G in bwd.representatives[p]:
                assert kl_pairing(F.scale(Fraction(3, 2)), G, mc) == Fraction(3, 2) * kl_pairing(F, G, mc)
            for _ in range(5):
                H = random_morphism(rng, Y, X, 1 - p)
                assert kl_pairing(F, hom_differential(H), mc) == 0
        for G in bwd.representatives[p]:
            for _ in range(5):
                H = random_morphism(rng, X, Y, 1 - p)
                assert kl_pairing(hom_differential(H), G, mc) == 0


def test_naive_wedge_gives_same_value():
    rng = random.Random(8)
    X, Y = cubic_koszul(), cubic_line()
    mc = MilnorContext(X.ctx)
    for p in (0, 1):
        F, G = random_morphism(rng, X, Y, p), random_morphism(rng, Y, X, p)
        assert kl_pairing(F, G, mc) == kl_pairing(F, G, mc, naive=True)


def test_reversed_convention_has_same_rank():
    X, Y = cubic_koszul(), cubic_line()
    mc = MilnorContext(X.ctx)
    fwd, bwd = hom_cohomology(X, Y, mc), hom_cohomology(Y, X, mc)
    for p in (0, 1):
        A = [[kl_pairing(F, G, mc) for G in bwd.representatives[p]] for F in fwd.representatives[p]]
        B = [[kl_pairing_reversed(F, G, mc) for G in bwd.representatives[p]] for F in fwd.representatives[p]]
        assert _rank(A) == _rank(B)


def _rank(M) -> int:
    if not M or not M[0]:
        return 0
    return linalg.rank(linalg.matrix([dict(enumerate(r)) for r in M], len(M[0])))
