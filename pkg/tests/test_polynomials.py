from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn import (
    INF,
    NEG_INF,
    Polynomial,
    norm_constant_exponent,
    poly_derivative,
    poly_eval,
    taylor_shift,
)
from padicdyn.domains import Ball
from padicdyn.polynomials import content_and_primitive, poly_divexact, poly_gcd


def P(coeffs, p=7):
    return Polynomial.of(coeffs, p)


def test_eval_example():
    # F = x^2 - 1 at 2
    assert poly_eval(P([-1, 0, 1]), 2).value == 3


def test_derivative_example():
    # d/dx (2x^3 + x^2 + x) = 6x^2 + 2x + 1
    d = poly_derivative(P([0, 1, 1, 2]))
    assert d.fraction_coefficients() == (Fraction(1), Fraction(2), Fraction(6))


def test_taylor_shift_example():
    # (x+1)^2 = x^2 + 2x + 1
    g = taylor_shift(P([0, 0, 1]), 1)
    assert g.fraction_coefficients() == (Fraction(1), Fraction(2), Fraction(1))


def test_zero_polynomial_degree_is_minus_one():
    assert Polynomial.zero(5).degree == -1
    assert P([0, 0]).degree == -1


coeff_lists = st.lists(
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    min_size=1,
    max_size=6,
)


@given(coeff_lists, st.fractions(min_value=-20, max_value=20, max_denominator=10))
@settings(max_examples=200)
def test_taylor_shift_property(coeffs, a):
    # G(x) = F(x + a) evaluated at x - a recovers F(x)
    F = P(coeffs, 5)
    G = taylor_shift(F, a)
    for x in (Fraction(0), Fraction(1), Fraction(-3, 2), Fraction(7)):
        assert poly_eval(G, x - a).value == poly_eval(F, x).value


def test_gcd_and_exact_division():
    A = P([-1, 0, 1], 3)  # x^2 - 1
    B = P([1, 1], 3)  # x + 1
    g = poly_gcd(A, B)
    assert g.fraction_coefficients() == (Fraction(1), Fraction(1))
    q = poly_divexact(A, B)
    assert q.fraction_coefficients() == (Fraction(-1), Fraction(1))
    with pytest.raises(ValueError):
        poly_divexact(P([1, 0, 1], 3), B)


def test_content_and_primitive():
    c, prim = content_and_primitive(P([Fraction(2, 3), Fraction(4, 3)], 5))
    assert c == Fraction(2, 3)
    assert prim.fraction_coefficients() == (Fraction(1), Fraction(2))


@pytest.mark.parametrize(
    "p,coeffs,center,expected",
    [
        (7, [1, 0, 1], 2, -1),  # x^2 + 1 around 2
        (3, [5], 0, INF),  # nonzero constant
        (3, [0, 1], 0, NEG_INF),  # root at the center
    ],
)
def test_norm_constant_examples(p, coeffs, center, expected):
    assert norm_constant_exponent(Polynomial.of(coeffs, p), center) == expected


@pytest.mark.parametrize(
    "p,coeffs,center",
    [
        (7, [1, 0, 1], 2),
        (3, [1, 2, 0, 1], 4),
        (5, [2, 1, 1], 3),
        (2, [1, 1, 1], 1),
    ],
)
def test_norm_constant_soundness_exhaustive(p, coeffs, center):
    # every point of the certified ball, enumerated two levels deeper,
    # has the same norm as the center
    F = Polynomial.of(coeffs, p)
    t = norm_constant_exponent(F, center)
    assert isinstance(t, int) and abs(t) <= 4
    want = poly_eval(F, center).valuation
    ball = Ball.containing(center, t, p)
    for sub in ball.subdivide(t - 2):
        assert poly_eval(F, sub.center).valuation == want
