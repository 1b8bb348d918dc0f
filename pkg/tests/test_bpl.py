from fractions import Fraction

import pytest

from mfwb import linalg
from mfwb.bpl import RetractDatum, bpl_check, bpl_perturb, stab_retract
from mfwb.corpus import a_k_factorization, xy_factorization
from mfwb.errors import ComputationError, ValidationError

ONE = Fraction(1)


def _m(entries, n):
    rows = [{} for _ in range(n)]
    for (i, j), c in entries.items():
        rows[i][j] = Fraction(c)
    return linalg.matrix(rows, n)


def trivial_datum(par):
    n = len(par)
    I, Z = linalg.dense_identity(n), linalg.zero(n, n)
    return RetractDatum(Z, Z, I, I, Z, tuple(par), tuple(par)).verify()


def test_zero_perturbation_is_identity():
    r = trivial_datum((0, 1, 0))
    out = bpl_perturb(r, linalg.zero(3, 3))
    for a, b in [(out.dA, r.dA), (out.iota, r.iota), (out.p, r.p), (out.h, r.h)]:
        assert linalg.is_zero(a - b)


def test_strictly_triangular_perturbation_transfers_verbatim():
    r = trivial_datum((0, 1, 0))
    delta = _m({(1, 0): 1}, 3)
    out = bpl_perturb(r, delta)
    assert linalg.is_zero(out.dA - delta)


def test_bad_datum_rejected():
    I = linalg.dense_identity(2)
    Z = linalg.zero(2, 2)
    with pytest.raises(ValidationError, match="p iota"):
        RetractDatum(Z, Z, I, I + I, Z, (0, 1), (0, 1)).verify()
    with pytest.raises(ValidationError, match="degrees"):
        RetractDatum(Z, Z, I, I, _m({(0, 0): 1}, 2), (0, 1), (0, 1)).verify()


def test_nonsquare_zero_perturbation_rejected():
    r = trivial_datum((0, 1))
    with pytest.raises(ValidationError, match="square to zero"):
        bpl_perturb(r, _m({(1, 0): 1, (0, 1): 1}, 2))


def test_nonterminating_series_hits_cap():
    I, Z = linalg.dense_identity(2), linalg.zero(2, 2)
    h = _m({(0, 1): 1}, 2)
    r = RetractDatum(Z, Z, I, I, h, (0, 1), (0, 1)).verify()
    with pytest.raises(ComputationError, match="did not terminate"):
        bpl_perturb(r, _m({(1, 0): 1}, 2), cap=10)


def test_stab_retract_unperturbed():
    sr = stab_retract(a_k_factorization(2, 1), 4)
    assert all(sr.datum.identities().values())
    assert sr.datum.degrees_ok()


@pytest.mark.parametrize("X", [a_k_factorization(2, 1), xy_factorization()], ids=["x3", "xy"])
def test_perturbed_stab_retract(X):
    rep = bpl_check(X, 4)
    assert rep.passed, rep.identities
    assert rep.perturbed_dA_is_dQ
