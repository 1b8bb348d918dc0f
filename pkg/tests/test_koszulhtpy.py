import random
from fractions import Fraction

import pytest

from mfwb.corpus import (
    SEED,
    a_k_factorization,
    corpus_factorizations,
    koszul_suite,
    random_theta_form,
    xy_factorization,
)
from mfwb.koszulhtpy import (
    DoubledContext,
    EtaMachine,
    ThetaForm,
    big_H,
    big_H_recursive,
    big_P,
    delta_stab,
    divide_without_remainder,
    eta_check,
    iota_delta,
    koszul_h,
    koszul_pr,
    p_coefficient,
)
from mfwb.mfcore import shift
from mfwb.polyring import RingContext, parse_polynomial


def dc_of(variables, w) -> DoubledContext:
    return DoubledContext(RingContext.from_strings(variables, w))


D1 = dc_of(["x"], "x^3")
D2 = dc_of(["x1", "x2"], "x1*x2")


def test_doubled_names():
    assert D1.variables == ("x", "x'")
    assert D1.w_tilde == _parse(D1, "x'^3 - x^3")


def _parse(dc, s):
    return parse_polynomial(s, dc.variables)


@pytest.mark.parametrize(
    "f,f0,f1",
    [("x'", "x", "1"), ("x'^2 + x*x' + x^2", "3*x^2", "x' + 2*x"), ("x^2 + 1", "x^2 + 1", "0")],
)
def test_divide_examples(f, f0, f1):
    q0, q1 = divide_without_remainder(_parse(D1, f), 0)
    assert (q0, q1) == (_parse(D1, f0), _parse(D1, f1))
    assert q0 + D1.delta(0) * q1 == _parse(D1, f)


def test_pr_and_h_examples():
    f = ThetaForm(D2, {(1,): _parse(D2, "x1'*x2'")})
    assert koszul_pr(f, 0) == ThetaForm(D2, {(1,): _parse(D2, "x1*x2'")})
    assert koszul_pr(ThetaForm.scalar(D2, _parse(D2, "1"), (0,)), 0).is_zero()
    h = koszul_h(ThetaForm.scalar(D1, D1.w_tilde), 0)
    assert h == ThetaForm(D1, {(0,): _parse(D1, "x'^2 + x*x' + x^2")})


def test_p_coefficients_and_examples():
    assert [p_coefficient(2, l) for l in (0, 1)] == [Fraction(1, 2), Fraction(1, 2)]
    top = ThetaForm.scalar(D2, _parse(D2, "1"), (0, 1))
    assert big_P(top) == top.scale(Fraction(1, 2))
    f = _parse(D2, "x2'")
    got = big_P(ThetaForm(D2, {(0,): f}))
    assert got == ThetaForm(D2, {(0,): _parse(D2, "1/2*x2' + 1/2*x2")})


def test_big_H_examples():
    lam = big_H(ThetaForm.scalar(D2, D2.w_tilde))
    assert lam == ThetaForm(D2, {(0,): _parse(D2, "1/2*x2 + 1/2*x2'"), (1,): _parse(D2, "1/2*x1 + 1/2*x1'")})
    assert iota_delta(lam) == ThetaForm.scalar(D2, D2.w_tilde)
    assert big_H(ThetaForm.scalar(D1, D1.w_tilde)) == ThetaForm(D1, {(0,): _parse(D1, "x^2 + x*x' + x'^2")})
    om = random_theta_form(random.Random(1), D1)
    assert big_H(om) == koszul_h(om, 0)


@pytest.mark.parametrize("variables,w", [(["x"], "x^3"), (["x"], "x^2"), (["x", "y"], "x*y"), (["x", "y"], "x^3+y^3")])
def test_delta_stab(variables, w):
    assert delta_stab(RingContext.from_strings(variables, w)).check()


def test_lambda_for_x_squared():
    dc = dc_of(["x"], "x^2")
    assert delta_stab(dc).lam == ThetaForm(dc, {(0,): _parse(dc, "x + x'")})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_homotopy_identity_suite(n):
    assert koszul_suite(random.Random(SEED + n), n, 25) == []


def test_h_anticommute_and_recursive_agree_on_seeded_forms():
    rng = random.Random(3)
    dc = dc_of(["x", "y"], "x^3+y^3")
    for _ in range(20):
        om = random_theta_form(rng, dc)
        assert (koszul_h(koszul_h(om, 0), 1) + koszul_h(koszul_h(om, 1), 0)).is_zero()
        assert koszul_h(koszul_h(om, 1), 1).is_zero()
        assert big_H(om) == big_H_recursive(om)


def _h_without_koszul_sign(om: ThetaForm, i: int) -> ThetaForm:
    out = ThetaForm.zero(om.dc)
    for S, p in om.terms.items():
        sign = -1 if sum(1 for j in S if j < i) % 2 else 1
        out = out + koszul_h(ThetaForm(om.dc, {S: p}), i).scale(sign)
    return out


def test_wrong_sign_convention_is_caught():
    rng = random.Random(4)
    dc = dc_of(["x", "y"], "x^3+y^3")
    broken = 0
    for _ in range(20):
        om = random_theta_form(rng, dc)
        ac = _h_without_koszul_sign(_h_without_koszul_sign(om, 1), 0)
        ac = ac + _h_without_koszul_sign(_h_without_koszul_sign(om, 0), 1)
        broken += not ac.is_zero()
    assert broken > 0


def test_eta_examples():
    E = a_k_factorization(2, 1)
    r = eta_check(E)
    assert r.passed
    assert [[str(p) for p in row] for row in r.reduced] == [["0", "-1"], ["-2*x", "0"]]
    r = eta_check(xy_factorization())
    assert r.passed
    assert [[str(p) for p in row] for row in r.reduced] == [["-1/2", "0"], ["0", "1/2"]]


@pytest.mark.parametrize("label,X", [(k, X) for k, X in corpus_factorizations() if X.ctx.n <= 2 and X.rank <= 2][:8])
def test_eta_on_corpus(label, X):
    assert eta_check(X).passed
    assert eta_check(shift(X)).passed


def test_total_differential_squares_to_zero():
    mach = EtaMachine(xy_factorization())
    one = mach.identity()
    assert mach.total(mach.total(one)).is_zero()
