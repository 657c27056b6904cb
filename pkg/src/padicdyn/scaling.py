"""Certified lower bounds, uniform scaling radius, and classification.

``lower_bound_bF`` runs the representative descent: starting at the domain's
base level (coerced below 0), it evaluates F at every representative and
descends one level while some value vanishes modulo p^(-t); on termination
p^(t+1) is a proven lower bound for |F| on the whole domain.  Domains that
extend beyond the unit ball are rescaled into Z_p first so the one-step
Lipschitz argument behind the descent stays valid.

The uniform scaling radius is r = min(b(Q), b(T1))/p with T1 = P'Q - PQ'
(corrected by a height factor for domains outside Z_p), and on any ball of
radius r the map scales distances by exactly |f'(a)|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .config import DEFAULT_CONFIG, AnalysisConfig
from .domains import Ball, CompactDomain, decompose
from .errors import (
    DepthCapExceeded,
    DerivativeRootInDomain,
    PoleInDomain,
    RootCertified,
)
from .hensel import certifies_root_in_radius
from .maps import RationalMap
from .padics import INF, NEG_INF
from .polynomials import (
    Polynomial,
    norm_constant_exponent,
    poly_eval,
    squarefree_part,
)

LOCALLY_ISOMETRIC = "LocallyIsometric"
LOCALLY_1_LIPSCHITZ = "Locally1Lipschitz"
BOUNDED_SCALING = "BoundedScaling"
LOCALLY_RHO_LIPSCHITZ = "LocallyRhoLipschitz"


@dataclass(frozen=True)
class ScalingReport:
    prime: int
    domain: CompactDomain
    classification: str
    # exponent of the bound C (BoundedScaling) or rho (LocallyRhoLipschitz)
    classification_exponent: int | None
    # exponent l of the uniform scaling radius r = p^l (descent route only)
    radius_exponent: int | None
    b_q_exponent: int | None
    b_t1_exponent: int | None
    derivative_root_free: bool
    # coarsest level at which every ball is certified to map into one ball;
    # None when the map is not locally 1-Lipschitz
    transport_level: int | None
    scalar_profile: dict[Ball, int] = field(default_factory=dict)
    scalar_upper_bounds: dict[Ball, int] = field(default_factory=dict)

    @property
    def is_one_lipschitz(self) -> bool:
        return self.classification in (LOCALLY_ISOMETRIC, LOCALLY_1_LIPSCHITZ)


def _rescaled(F: Polynomial, X: CompactDomain):
    """Substitute x = y/p^M so the domain lands inside Z_p.

    Returns (G, X_scaled, shift) with G integral, X_scaled in Z_p, and
    |F(x)| = p^shift * |G(p^M x)| for x in X.
    """
    p = F.prime
    M = X.height_exponent()
    if M <= 0:
        return F, X, 0
    d = max(F.degree, 0)
    G = F.shift_variable(-M).scale(Fraction(p) ** (M * d))
    pm = Fraction(p) ** M
    keys = frozenset(k * pm for k in X.keys)
    Xs = CompactDomain(p, X.base_level - M, keys)
    return G, Xs, M * d


def lower_bound_bF(
    F: Polynomial, X: CompactDomain, config: AnalysisConfig = DEFAULT_CONFIG
) -> int:
    """Exponent b with |F(x)| >= p^b certified for every x in X.

    Raises RootCertified when a root of F provably lies in X, and
    DepthCapExceeded when the descent cannot separate |F| from zero within
    the configured depth (reporting the suspect ball).
    """
    if F.is_zero():
        raise ValueError("lower bound of the zero polynomial")
    if not F.is_integral():
        raise ValueError("descent requires integral coefficients")
    G, Xs, shift = _rescaled(F, X)
    sf = squarefree_part(G)
    if sf.degree < G.degree:
        # multiple roots defeat the one-step lifting certificate; settle
        # root existence on the squarefree part first (same root set)
        _descend(sf, Xs, config)
    return _descend(G, Xs, config) + shift


def _descend(F: Polynomial, X: CompactDomain, config: AnalysisConfig) -> int:
    t = min(X.base_level, -1)
    floor = t - config.descent_cap
    work = decompose(X, t, config)
    while True:
        suspects = []
        for b in work:
            value = poly_eval(F, b.center)
            if value.valuation >= -t:
                suspects.append(b)
        if not suspects:
            return t + 1
        for b in suspects:
            a = b.center
            if poly_eval(F, a).is_zero():
                raise RootCertified(
                    f"{a} is a root of F inside the domain", ball=b, seed=a
                )
            if a.valuation >= 0 and certifies_root_in_radius(F, a, b.level):
                raise RootCertified(
                    f"a root of F provably lies in {b}", ball=b, seed=a
                )
        if t - 1 < floor:
            raise DepthCapExceeded(
                f"|F| not separated from 0 after {config.descent_cap} levels; "
                f"suspect ball {suspects[0]}",
                level=t,
                suspect_ball=suspects[0],
            )
        t -= 1
        work = [c for b in suspects for c in b.children()]


def _two_variable_lipschitz_exponent(f: RationalMap, M: int) -> int:
    """Exponent h with |T(x,y) - T(a,a)| <= p^h max(|x-a|, |y-a|) on the
    ball of radius p^M, for the symmetric difference-quotient polynomial T
    of an integral P/Q pair."""
    if M <= 0:
        return 0
    total_degree = max(f.P.degree + f.Q.degree - 1, 1)
    return M * (total_degree - 1)


def _q_lipschitz_exponent(f: RationalMap, M: int) -> int:
    if M <= 0 or f.Q.degree <= 0:
        return 0
    return M * (f.Q.degree - 1)


def _denominator_bound(
    f: RationalMap, X: CompactDomain, config: AnalysisConfig
) -> int:
    try:
        return lower_bound_bF(f.Q, X, config)
    except RootCertified as exc:
        raise PoleInDomain(
            f"denominator has a root in the domain: {exc}", ball=exc.ball
        ) from exc


def scaling_radius(
    f: RationalMap, X: CompactDomain, config: AnalysisConfig = DEFAULT_CONFIG
) -> ScalingReport:
    """Radius exponent l and per-ball scalars for a root-free derivative.

    Requires Q and T1 = P'Q - PQ' to have no roots in X (certified by the
    descent); on every level-l ball |f(x)-f(y)| = |f'(a)| |x-y| exactly.
    """
    b_q = _denominator_bound(f, X, config)
    if f.t1.is_zero():
        raise DerivativeRootInDomain(
            "derivative vanishes identically (constant map)"
        )
    try:
        b_t1 = lower_bound_bF(f.t1, X, config)
    except RootCertified as exc:
        raise DerivativeRootInDomain(
            f"derivative has a root in the domain: {exc}", ball=exc.ball
        ) from exc
    return _root_free_report(f, X, b_q, b_t1, config)


def _root_free_report(
    f: RationalMap,
    X: CompactDomain,
    b_q: int,
    b_t1: int,
    config: AnalysisConfig,
) -> ScalingReport:
    M = X.height_exponent()
    l = min(b_q - _q_lipschitz_exponent(f, M), b_t1 - _two_variable_lipschitz_exponent(f, M)) - 1
    profile: dict[Ball, int] = {}
    for b in decompose(X, l, config):
        e = f.scalar_exponent(b.center)
        assert e is not NEG_INF
        profile[b] = int(e)
    exponents = set(profile.values())
    if exponents <= {0}:
        kind, bound = LOCALLY_ISOMETRIC, None
    elif all(e <= 0 for e in exponents):
        kind, bound = LOCALLY_1_LIPSCHITZ, None
    else:
        kind, bound = BOUNDED_SCALING, max(exponents)
    return ScalingReport(
        prime=f.prime,
        domain=X,
        classification=kind,
        classification_exponent=bound,
        radius_exponent=l,
        b_q_exponent=b_q,
        b_t1_exponent=b_t1,
        derivative_root_free=True,
        transport_level=l if kind in (LOCALLY_ISOMETRIC, LOCALLY_1_LIPSCHITZ) else None,
        scalar_profile=profile,
    )


def classify(
    f: RationalMap, X: CompactDomain, config: AnalysisConfig = DEFAULT_CONFIG
) -> ScalingReport:
    """Classification of the local scaling behaviour of f on X.

    Uses the radius descent when the derivative is root-free; otherwise
    falls back to a per-ball certification that still decides 1-Lipschitz
    behaviour (recording exact scalars where |f'| is locally constant and
    certified upper bounds around derivative roots).
    """
    if f.t1.is_zero():
        # constant map: distances collapse, trivially 1-Lipschitz
        return ScalingReport(
            prime=f.prime,
            domain=X,
            classification=LOCALLY_1_LIPSCHITZ,
            classification_exponent=None,
            radius_exponent=None,
            b_q_exponent=None,
            b_t1_exponent=None,
            derivative_root_free=False,
            transport_level=X.base_level,
        )
    b_q = _denominator_bound(f, X, config)
    try:
        b_t1 = lower_bound_bF(f.t1, X, config)
    except (RootCertified, DepthCapExceeded):
        # derivative vanishes somewhere (or cannot be separated from zero):
        # decide 1-Lipschitz behaviour ball by ball instead
        return _certified_profile(f, X, config)
    return _root_free_report(f, X, b_q, b_t1, config)


def _certified_profile(
    f: RationalMap, X: CompactDomain, config: AnalysisConfig
) -> ScalingReport:
    """Per-ball Lipschitz certification for maps whose derivative vanishes
    somewhere in the domain."""
    p = f.prime
    M = X.height_exponent()
    h_t = _two_variable_lipschitz_exponent(f, M)
    start = min(X.base_level, -1)
    floor = start - config.certify_cap
    exact: dict[Ball, int] = {}
    upper: dict[Ball, int] = {}
    work = list(decompose(X, start, config))
    while work:
        b = work.pop()
        if b.level < floor:
            raise DepthCapExceeded(
                f"per-ball certification exceeded depth cap at {b}",
                level=b.level,
                suspect_ball=b,
            )
        a = b.center
        t = b.level
        qa = poly_eval(f.Q, a)
        if qa.is_zero():
            raise PoleInDomain(f"denominator vanishes at {a}", ball=b)
        if a.valuation >= 0 and certifies_root_in_radius(f.Q, a, t):
            raise PoleInDomain(f"denominator has a root inside {b}", ball=b)
        if t > norm_constant_exponent(f.Q, a):
            work.extend(b.children())
            continue
        vq = int(qa.valuation)
        ta = poly_eval(f.t1, a)
        t1_norm_exp = ta.norm_exponent  # NEG_INF at an exact derivative root
        lip_bound = max(t1_norm_exp, t + h_t)
        if not ta.is_zero() and t <= norm_constant_exponent(f.t1, a):
            e = int(2 * vq + t1_norm_exp)
            if e > 0 or lip_bound <= -2 * vq:
                exact[b] = e
                continue
            # scalar known but the ball-to-ball certificate needs more depth
            work.extend(b.children())
            continue
        if lip_bound <= -2 * vq:
            upper[b] = int(lip_bound + 2 * vq)
            continue
        work.extend(b.children())

    # this route is only entered once a derivative root has been certified,
    # so the map cannot be isometric
    exponents = list(exact.values()) + list(upper.values())
    max_exp = max(exponents) if exponents else 0
    if max_exp <= 0:
        kind, bound = LOCALLY_1_LIPSCHITZ, None
        transport = min((b.level for b in list(exact) + list(upper)), default=start)
    else:
        kind, bound = LOCALLY_RHO_LIPSCHITZ, max_exp
        transport = None
    return ScalingReport(
        prime=p,
        domain=X,
        classification=kind,
        classification_exponent=bound,
        radius_exponent=transport,
        b_q_exponent=None,
        b_t1_exponent=None,
        derivative_root_free=False,
        transport_level=transport,
        scalar_profile=exact,
        scalar_upper_bounds=upper,
    )
