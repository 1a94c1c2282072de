import pytest

from nctorus.ncsymbol import DIM, E_MINUS, E_PLUS, INHOMOGENEOUS, SymbolExpr, degree, delta_exp_h, delta_multi, mul, unit, xi_derive
from nctorus.parametrix import (
    EmptyCompositionError,
    GradedSymbol,
    compose,
    laplacian_symbol,
    parametrix,
    parametrix_term,
)


def test_laplacian_symbol_parts():
    a = laplacian_symbol()
    assert sorted(a.parts) == [0, 1, 2]
    assert a[2] == SymbolExpr.monomial(1, [E_PLUS], radial=1)
    assert len(a[1]) == 4 and len(a[0]) == 8
    for d in (0, 1, 2):
        assert degree(a[d]) == d


def test_b0():
    assert parametrix_term(0) == SymbolExpr.monomial(1, [E_MINUS], radial=-1)


def test_b1_by_hand():
    a = laplacian_symbol()
    b0 = parametrix_term(0)
    expected = mul(mul(b0, a[1]), b0)
    for i in range(1, DIM + 1):
        expected = expected + mul(mul(xi_derive(b0, i), delta_multi(a[2], unit(i))), b0)
    assert parametrix_term(1) == -expected


@pytest.mark.parametrize("n", range(4))
def test_homogeneity(n):
    assert degree(parametrix_term(n)) == -2 - n


def test_term_counts():
    assert [len(parametrix_term(n)) for n in range(4)] == [1, 4, 26, 268]


@pytest.mark.parametrize("N", range(4))
def test_parametrix_is_left_inverse(N):
    # the recursion solves sigma(B o A) = 1 degree by degree
    prod = compose(parametrix(N), laplacian_symbol(), min_degree=-N)
    assert prod[0] == SymbolExpr.one()
    for d in range(-N, 0):
        assert not prod[d]


def test_right_composition_leading_order():
    prod = compose(laplacian_symbol(), parametrix(2), min_degree=-2)
    assert prod[0] == SymbolExpr.one()


def test_empty_composition():
    with pytest.raises(EmptyCompositionError):
        compose(laplacian_symbol(), parametrix(0), min_degree=1)


def test_graded_symbol_checks_degrees():
    with pytest.raises(ValueError):
        GradedSymbol({3: SymbolExpr.monomial(1, radial=1)})
    assert degree(GradedSymbol({})[5]) == INHOMOGENEOUS


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        parametrix_term(-1)


def test_derivatives_of_exponential_only():
    atoms = {a for t in parametrix_term(2).terms for a in t.word}
    assert all(a.kind in (0, 1) for a in atoms)
    assert delta_exp_h((2, 0, 0, 0)) in atoms


def test_right_composition_vanishes_numerically():
    import numpy as np

    from nctorus import oracle

    model = oracle.random_model(np.random.default_rng(0), 4, commuting=True)
    xi = np.array([0.3, -1.2, 0.8, 0.5])

    def value(x):
        out = np.zeros((4, 4), dtype=complex)
        for c, _, part, word in x.terms:
            scalar = np.prod(xi ** np.array(part.mono)) * (xi @ xi) ** part.radial
            out += float(c) * scalar * oracle.eval_word(model, word)
        return out

    prod = compose(laplacian_symbol(), parametrix(3), min_degree=-3)
    for d in (-1, -2, -3):
        assert prod[d]  # not zero as an expression
        assert np.max(np.abs(value(prod[d]))) < 1e-11
