import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn import INF, PAdicRational, canonical_key
from padicdyn.errors import PrimeMismatch, ZeroDenominator
from padicdyn.padics import fraction_valuation, unit_residue


@pytest.mark.parametrize(
    "p,num,den,expected",
    [
        (7, 98, 3, 2),
        (7, 0, 1, INF),
        (3, 5, 9, -2),
        (2, 12, 1, 2),
        (5, 1, 5, -1),
        (3, -27, 4, 3),
    ],
)
def test_valuation_examples(p, num, den, expected):
    x = PAdicRational(Fraction(num, den), p)
    assert x.valuation == expected


def test_norm_is_an_exponent_never_a_float():
    x = PAdicRational(Fraction(98, 3), 7)
    assert x.norm_exponent == -2
    assert isinstance(x.norm_exponent, int)


rationals = st.fractions(
    min_value=-10**6, max_value=10**6, max_denominator=10**4
)


@given(rationals, rationals, rationals, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=200)
def test_field_laws(a, b, c, p):
    x, y, z = (PAdicRational(v, p) for v in (a, b, c))
    assert ((x + y) + z).value == (x + (y + z)).value
    assert (x * (y + z)).value == (x * y + x * z).value
    assert (x * y).value == (y * x).value
    if not y.is_zero():
        assert ((x / y) * y).value == x.value


def test_valuation_arithmetic_bulk():
    # v(xy) = v(x) + v(y); v(x+y) >= min with equality for distinct valuations
    rng = random.Random(20260811)
    for p in (2, 3, 5):
        for _ in range(4000):
            x = PAdicRational(
                Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**4)), p
            )
            y = PAdicRational(
                Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**4)), p
            )
            if x.is_zero() or y.is_zero():
                continue
            assert (x * y).valuation == x.valuation + y.valuation
            s = x + y
            bound = min(x.valuation, y.valuation)
            if s.is_zero():
                continue
            assert s.valuation >= bound
            if x.valuation != y.valuation:
                assert s.valuation == bound


@given(rationals, st.sampled_from([2, 3, 5]), st.integers(-5, 5))
@settings(max_examples=300)
def test_canonical_key_idempotent(x, p, t):
    k = canonical_key(x, t, p)
    assert canonical_key(k, t, p) == k
    # the key is in the same level-t ball as x
    if k != x:
        assert fraction_valuation(x - k, p) >= -t


def test_unit_residue_matches_modular_inverse():
    assert unit_residue(Fraction(3, 2), 7, 2) == (3 * pow(2, -1, 49)) % 49
    assert unit_residue(Fraction(5), 3, 3) == 5


def test_reduce_requires_integrality():
    x = PAdicRational(Fraction(1, 3), 3)
    with pytest.raises(ValueError):
        x.reduce(2)


def test_prime_mismatch_rejected():
    with pytest.raises(PrimeMismatch):
        PAdicRational(Fraction(1), 3) + PAdicRational(Fraction(1), 5)


def test_zero_division_raises():
    x = PAdicRational(Fraction(1), 3)
    with pytest.raises(ZeroDenominator):
        x / PAdicRational(Fraction(0), 3)
