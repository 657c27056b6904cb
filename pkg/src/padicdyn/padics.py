"""Exact elements of Q_p represented as rational numbers.

A value is stored as a reduced ``Fraction`` together with the prime p.  The
valuation v(x) = v_p(numerator) - v_p(denominator) is always an exact
integer (infinity for 0), and the norm |x| = p^(-v(x)) is only ever handled
through its integer exponent.  Nothing here rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import PrimeMismatch, ZeroDenominator

INF = math.inf
NEG_INF = -math.inf

# exact integer except for the +/- infinity sentinels
ExtendedInt = Union[int, float]

RationalLike = Union[int, Fraction, "PAdicRational"]


def int_valuation(n: int, p: int) -> ExtendedInt:
    """Largest e with p^e dividing n; INF for n = 0."""
    if n == 0:
        return INF
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def fraction_valuation(x: Fraction, p: int) -> ExtendedInt:
    if x == 0:
        return INF
    # a reduced fraction has p-powers in at most one of the two parts
    vn = int_valuation(x.numerator, p)
    if vn:
        return vn
    return -int_valuation(x.denominator, p)


def unit_residue(x: Fraction, p: int, modulus_exponent: int) -> int:
    """Canonical integer representative of x modulo p^k for v(x) >= 0.

    The denominator must be coprime to p, which holds exactly when the
    valuation is nonnegative.
    """
    if modulus_exponent <= 0:
        return 0
    mod = p**modulus_exponent
    num = x.numerator % mod
    den = x.denominator % mod
    if den == 1:
        return num
    return (num * pow(den, -1, mod)) % mod


def canonical_key(x: Fraction, level: int, p: int) -> Fraction:
    """The unique finite base-p expansion congruent to x with all digits at
    exponents below -level.

    This is the canonical center of the closed ball of radius p^level
    containing x; two points share a level-t ball exactly when their keys
    agree.
    """
    if x == 0:
        return Fraction(0)
    v = fraction_valuation(x, p)
    if v >= -level:
        return Fraction(0)
    # x = p^v * u with u a unit; keep the expansion of u up to p^(-level-v)
    pv = Fraction(p) ** v
    u = x / pv
    r = unit_residue(u, p, -level - int(v))
    return r * pv


def fraction_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class PAdicRational:
    """An exact element of Q_p that happens to be rational.

    Supports field arithmetic, exact valuation, and canonical reduction
    modulo powers of p.  Immutable and hashable.
    """

    value: Fraction
    prime: int

    @staticmethod
    def of(x: RationalLike, p: int) -> "PAdicRational":
        if isinstance(x, PAdicRational):
            if x.prime != p:
                raise PrimeMismatch(f"value for p={x.prime} used in p={p} context")
            return x
        return PAdicRational(Fraction(x), p)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def valuation(self) -> ExtendedInt:
        return fraction_valuation(self.value, self.prime)

    @property
    def norm_exponent(self) -> ExtendedInt:
        """e with |x| = p^e (so -valuation; NEG_INF for zero)."""
        v = self.valuation
        return NEG_INF if v is INF else -v

    def is_zero(self) -> bool:
        return self.value == 0

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def _coerce(self, other) -> "PAdicRational":
        if isinstance(other, PAdicRational):
            if other.prime != self.prime:
                raise PrimeMismatch(
                    f"cannot combine p={self.prime} and p={other.prime} values"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicRational(Fraction(other), self.prime)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value + other.value, self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value - other.value, self.prime)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PAdicRational(other.value - self.value, self.prime)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PAdicRational(self.value * other.value, self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.value == 0:
            raise ZeroDenominator("division by zero in Q_p")
        return PAdicRational(self.value / other.value, self.prime)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.value == 0:
            raise ZeroDenominator("division by zero in Q_p")
        return PAdicRational(other.value / self.value, self.prime)

    def __neg__(self):
        return PAdicRational(-self.value, self.prime)

    def __pow__(self, n: int):
        return PAdicRational(self.value**n, self.prime)

    def reduce(self, precision_exponent: int) -> "PAdicRational":
        """Canonical representative modulo p^k (requires valuation >= 0)."""
        if self.valuation < 0:
            raise ValueError("cannot reduce a value of negative valuation")
        r = unit_residue(self.value, self.prime, precision_exponent)
        return PAdicRational(Fraction(r), self.prime)

    def key_at_level(self, level: int) -> Fraction:
        return canonical_key(self.value, level, self.prime)

    def __str__(self):
        return fraction_str(self.value)
