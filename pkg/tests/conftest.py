from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mfwb.polyring import Polynomial, monomials_up_to

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture
def problems() -> Path:
    return PROBLEMS


fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


def polynomials(variables, max_degree=3, max_terms=4, min_degree=0):
    variables = tuple(variables)
    monos = [e for e in monomials_up_to(len(variables), max_degree) if sum(e) >= min_degree]
    return st.dictionaries(st.sampled_from(monos), fractions, max_size=max_terms).map(
        lambda d: Polynomial(variables, d)
    )
