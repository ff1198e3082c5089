from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attainable.polynomial import (
    Polynomial,
    PolynomialVectorField,
    evaluate_field,
    format_polynomial,
    parse_polynomial,
)


def naive_eval(poly: Polynomial, x) -> float:
    """Term-by-term evaluation with repeated multiplication."""
    total = 0.0
    for coef, exps in poly.terms:
        term = coef
        for xi, e in zip(x, exps):
            for _ in range(e):
                term *= xi
        total += term
    return total


def test_merge_combines_like_terms_and_drops_zeros():
    p = Polynomial.from_terms(2, [(2.0, (1, 0)), (3.0, (1, 0)), (1.0, (0, 1)), (-1.0, (0, 1))])
    assert p.terms == ((5.0, (1, 0)),)


def test_parse_and_evaluate_example_field(quad_pair):
    x0 = [10.0, 8.0, 9.0, 2.0]
    got = evaluate_field(quad_pair.field, x0)
    expected = [naive_eval(c, x0) for c in quad_pair.field.components]
    assert np.array_equal(got, expected)
    # by hand: -2*100 - 6*20 + 10*18, 100 - 8*72, 100 + 6*20 - 9*18, 8*72 - 18
    assert got.tolist() == [-140.0, -476.0, 58.0, 558.0]


def test_vanishing_monomials_give_zero(quad_pair):
    assert np.array_equal(quad_pair.field(np.zeros(4)), np.zeros(4))


def test_batch_evaluation_matches_pointwise(cubic_triple):
    rng = np.random.default_rng(3)
    X = rng.uniform(0, 3, size=(20, 6))
    batch = cubic_triple.field(X)
    for row, x in zip(batch, X):
        assert np.allclose(row, cubic_triple.field(x), rtol=1e-14, atol=0)


def test_dimension_mismatch():
    p = parse_polynomial("x1 + x2", 2)
    with pytest.raises(ValueError):
        p([1.0, 2.0, 3.0])
    f = PolynomialVectorField(2, (p, p))
    with pytest.raises(ValueError):
        f([1.0])


@pytest.mark.parametrize(
    "text",
    ["", "x3", "x1 * * x2", "x1 +", "x0", "x1 ^ ", "3*y1"],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_polynomial(text, 2)


def test_parse_powers_and_coefficients():
    p = parse_polynomial("-2.5*x1**2*x2 + x2^3 - 4", 2)
    assert dict((e, c) for c, e in p.terms) == {(2, 1): -2.5, (0, 3): 1.0, (0, 0): -4.0}


def test_linear_matrix():
    f = PolynomialVectorField(2, (parse_polynomial("-x1 + x2", 2), parse_polynomial("x1 - x2", 2)))
    assert f.is_linear()
    assert np.array_equal(f.linear_matrix(), [[-1, 1], [1, -1]])
    g = PolynomialVectorField(1, (parse_polynomial("x1^2", 1),))
    assert not g.is_linear()
    with pytest.raises(ValueError):
        g.linear_matrix()


coef = st.integers(-20, 20).map(float) | st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
exps = st.lists(st.integers(0, 3), min_size=3, max_size=3).map(tuple)
polys = st.lists(st.tuples(coef, exps), max_size=8).map(lambda t: Polynomial.from_terms(3, t))


@given(polys)
def test_format_parse_round_trip(p):
    if not p.terms:
        return
    assert parse_polynomial(format_polynomial(p), 3) == p


@given(polys, st.lists(st.floats(-2, 2), min_size=3, max_size=3))
@settings(max_examples=200)
def test_vectorised_evaluation_matches_naive(p, x):
    assert p(np.array(x)) == pytest.approx(naive_eval(p, x), rel=1e-12, abs=1e-9)


@given(polys, polys)
def test_addition_is_commutative(p, q):
    assert p + q == q + p
