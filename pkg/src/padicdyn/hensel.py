"""Root lifting by Newton iteration in exact arithmetic.

The classical criterion |F(a)| < |F'(a)|^2 guarantees a unique root a' with
|a' - a| <= |F(a)|/|F'(a)|.  Iterates are reduced modulo p^K with K chosen
large enough that the reduction never disturbs the requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HenselPreconditionFailed
from .padics import INF, NEG_INF, ExtendedInt, PAdicRational
from .polynomials import Polynomial, poly_derivative, poly_eval

_MAX_NEWTON_STEPS = 128


@dataclass(frozen=True)
class HenselResult:
    root: PAdicRational  # truncated to the requested precision exponent
    bound_exponent: ExtendedInt  # t with |root - seed| <= p^t
    precision_exponent: int
    steps: int


def hensel_precondition(F: Polynomial, seed: PAdicRational) -> tuple[ExtendedInt, ExtendedInt]:
    """Valuations (v(F(seed)), v(F'(seed))); raises unless v(F) > 2 v(F')."""
    v_val = poly_eval(F, seed).valuation
    v_der = poly_eval(poly_derivative(F), seed).valuation
    if v_der is INF or not v_val > 2 * v_der:
        raise HenselPreconditionFailed(v_val, v_der)
    return v_val, v_der


def certifies_root_in_radius(
    F: Polynomial, seed: PAdicRational, radius_exponent: int
) -> bool:
    """True when the lifting lemma proves a root within p^radius of the seed."""
    try:
        v_val, v_der = hensel_precondition(F, seed)
    except HenselPreconditionFailed:
        return False
    if v_val is INF:
        return True
    # |root - seed| <= |F(seed)|/|F'(seed)| = p^(v_der - v_val)
    return v_der - v_val <= radius_exponent


def hensel_lift(
    F: Polynomial, seed: PAdicRational, precision_exponent: int
) -> HenselResult:
    """Lift the seed to a root of F modulo p^precision.

    Preconditions: integral coefficients, integral seed, and the strict
    inequality |F(seed)| < |F'(seed)|^2.  The returned root r satisfies
    |F(r)| <= p^(-precision) and |r - seed| <= |F(seed)|/|F'(seed)|.
    """
    if not F.is_integral():
        raise ValueError("lifting requires coefficients of valuation >= 0")
    if seed.valuation < 0:
        raise ValueError("lifting requires a seed of valuation >= 0")
    if precision_exponent < 1:
        raise ValueError("precision exponent must be positive")
    v_val, v_der = hensel_precondition(F, seed)
    k = precision_exponent
    if v_val is INF:
        return HenselResult(seed.reduce(k), NEG_INF, k, 0)
    bound = v_der - v_val  # exponent of the distance bound
    dF = poly_derivative(F)
    # reduction modulus: k digits plus slack for the derivative valuation
    K = k + 2 * int(v_der) + 2
    x = seed.reduce(K)
    steps = 0
    while True:
        fx = poly_eval(F, x)
        if fx.valuation >= k:
            break
        steps += 1
        if steps > _MAX_NEWTON_STEPS:
            raise RuntimeError("Newton iteration failed to converge")
        dfx = poly_eval(dF, x)
        x = (x - fx / dfx).reduce(K)
    root = x.reduce(k)
    assert poly_eval(F, root).valuation >= k
    if not (root - seed).is_zero():
        assert (root - seed).valuation >= -bound
    return HenselResult(root, bound, k, steps)
