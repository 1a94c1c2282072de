import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nctorus.ncsymbol import DELTA_EXP_H, DELTA_H, EXP_H, Atom, SymbolExpr, Term, XiPart

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

signs = st.sampled_from([1, -1])


@st.composite
def atoms(draw, max_order=2):
    kind = draw(st.sampled_from([EXP_H, DELTA_EXP_H, DELTA_H]))
    if kind == EXP_H:
        return Atom(EXP_H, (0, 0, 0, 0), draw(signs))
    dirs = draw(st.lists(st.integers(0, 3), min_size=1, max_size=max_order))
    index = tuple(dirs.count(k) for k in range(4))
    if kind == DELTA_H:
        return Atom(DELTA_H, index, 0)
    return Atom(DELTA_EXP_H, index, draw(signs))


words = st.lists(atoms(), min_size=0, max_size=4).map(tuple)
xiparts = st.builds(XiPart, st.tuples(*[st.integers(0, 2)] * 4), st.integers(-2, 1))
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def symbols(draw, max_terms=3, xi=True, pi2=False):
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        part = draw(xiparts) if xi else XiPart()
        terms.append(Term(draw(coeffs), 1 if pi2 and draw(st.booleans()) else 0, part, draw(words)))
    return SymbolExpr.from_terms(terms)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
