
import pytest
from hypothesis import given

from conftest import polynomials
from mfwb.errors import ComputationError
from mfwb.milnor import LocalQuotient, MilnorContext, jacobian, milnor_number_oracle
from mfwb.polyring import RingContext


def mc_of(variables, w, **kw) -> MilnorContext:
    return MilnorContext(RingContext.from_strings(variables, w), **kw)


def test_jacobian_examples():
    assert [str(p) for p in jacobian(RingContext.from_strings(["x"], "x^3"))] == ["3*x^2"]
    assert [str(p) for p in jacobian(RingContext.from_strings(["x", "y"], "x*y"))] == ["y", "x"]
    assert [str(p) for p in jacobian(RingContext.from_strings(["x", "y"], "x^3+y^5"))] == ["3*x^2", "5*y^4"]


@pytest.mark.parametrize(
    "variables,w,mu,basis",
    [
        (["x"], "x^3", 2, ["1", "x"]),
        (["x", "y"], "x*y", 1, ["1"]),
        (["x", "y"], "x^3+y^3", 4, ["1", "x", "y", "x*y"]),
        (["x", "y"], "x^2+y^3", 2, ["1", "y"]),
    ],
)
def test_milnor_examples(variables, w, mu, basis):
    mc = mc_of(variables, w)
    assert mc.mu == mu
    assert mc.basis_strings() == basis


@pytest.mark.parametrize("k", range(1, 7))
def test_a_k_against_oracle(k):
    ctx = RingContext.from_strings(["x"], f"x^{k + 1}")
    assert MilnorContext(ctx).mu == k
    assert milnor_number_oracle(ctx, k + 3) == k


def test_normal_form_examples():
    mc = mc_of(["x"], "x^3")
    p = mc.ctx.parse
    assert mc.normal_form(p("1")) == [1, 0]
    assert mc.normal_form(p("3*x^2")) == [0, 0]
    assert mc.normal_form(p("x + x^5")) == [0, 1]


CUBIC = mc_of(["x", "y"], "x^3 + y^3")
P = polynomials(("x", "y"), max_degree=4)


@given(P, P)
def test_normal_form_kills_the_ideal(q, r):
    for t in CUBIC.jacobian:
        assert not any(CUBIC.normal_form(t * q))
    assert CUBIC.normal_form(q + r) == [a + b for a, b in zip(CUBIC.normal_form(q), CUBIC.normal_form(r))]


@given(P)
def test_normal_form_is_idempotent(q):
    assert CUBIC.normal_form(CUBIC.lift(CUBIC.normal_form(q))) == CUBIC.normal_form(q)
    assert CUBIC.contains(q - CUBIC.reduce(q))


def test_non_isolated_hits_cap():
    with pytest.raises(ComputationError, match="did not stabilize"):
        mc_of(["x", "y"], "x^2", cap=12)


def test_smooth_point_warns():
    with pytest.warns(UserWarning, match="mu = 0"):
        mc = mc_of(["x"], "x + x^2")
    assert mc.mu == 0


def test_local_quotient_ignores_far_zeros():
    # x^2 - x^3 vanishes at x = 1 too; only the point at the origin counts
    lq = LocalQuotient(("x",), (RingContext.from_strings(["x"], "x").parse("x^2 - x^3"),))
    assert lq.dimension == 2
