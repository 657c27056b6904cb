"""Global analysis over all of Q_p.

Invertible local isometry and measure preservation on Q_p force alpha = 0
and deg P1 = deg Q1 + 1; when the gate passes, behaviour outside a computed
ball B(0, N-1) is rigid (spheres around 0 map into themselves), so the
global questions reduce to the compact ball.  Maps failing the gate carry
constructive obstruction witnesses: an invariant (or measure-distorting)
ball, or an escaping region; gate-passing maps always leave the sphere
S_{p^N}(0) invariant, which rules out global ergodicity and minimality.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .config import DEFAULT_CONFIG, AnalysisConfig
from .digraph import (
    MEASURE_PRESERVING,
    MPVerdict,
    UNDECIDED,
    build_digraph,
    mp_check,
)
from .domains import Ball, CompactDomain, decompose
from .errors import (
    DepthCapExceeded,
    NotForwardInvariant,
    PoleInDomain,
    RootCertified,
)
from .maps import RationalMap
from .polynomials import Polynomial
from .scaling import LOCALLY_ISOMETRIC, ScalingReport, classify, lower_bound_bF

MINIMALITY = "Minimality"
ERGODICITY = "Ergodicity"


@dataclass(frozen=True)
class SphereRegion:
    """The set of points at norm exactly p^radius_exponent from 0."""

    radius_exponent: int
    prime: int

    def __str__(self):
        return f"S(0, {self.radius_exponent})"


@dataclass(frozen=True)
class GlobalGateReport:
    prime: int
    alpha: int
    m: int
    n: int
    gate_passed: bool
    q1_certification: str = "unchecked"
    N_exponent: int | None = None
    l0_exponent: int | None = None
    forward_invariant_ball: bool | None = None
    derived_levels: dict | None = None


@dataclass(frozen=True)
class ObstructionWitness:
    kind: str  # InvariantBall / EscapingRegion / InvariantSphere
    case_tag: str
    region: Ball | SphereRegion
    # for contraction witnesses: samples of the region must land here
    image_region: Ball | None = None
    # for escaping witnesses: spheres from this exponent up stay at norm
    # at least p^min_image_exponent
    sphere_exponent: int | None = None
    min_image_exponent: int | None = None
    derived_levels: dict | None = None
    checked_depth: int | None = None
    verified: bool = False


@dataclass(frozen=True)
class GlobalVerdict:
    verdict: str  # Yes / No / Undecided
    reason: str
    gate: GlobalGateReport
    compact_report: ScalingReport | None = None
    compact_mp: MPVerdict | None = None


def lemma_n_bound(F: Polynomial) -> int:
    """Smallest positive N with p^N exceeding every non-leading coefficient
    norm, so that |F(x)| = |lc| |x|^deg whenever |x| >= p^N."""
    best = 1
    for i in range(0, F.degree):
        c = F.coefficient(i)
        if c.is_zero():
            continue
        v = int(c.valuation)
        if v < 0:
            best = max(best, 1 - v)
    return best


def unit_normalized(F: Polynomial) -> tuple[int, Polynomial]:
    """(k, G) with F = p^k G and G of unit leading coefficient."""
    v = int(F.leading_coefficient.valuation)
    return v, F.scale(Fraction(F.prime) ** (-v))


def certify_no_roots_qp(
    F: Polynomial, config: AnalysisConfig = DEFAULT_CONFIG
) -> tuple[str, Ball | None]:
    """('root-free' | 'root' | 'unknown', witness ball if a root was found).

    Outside the coefficient-bound radius the norm is |x|^deg, so roots can
    only live in a compact ball, where the descent either separates |F| from
    zero or certifies a root.
    """
    if F.is_zero():
        return "root", None
    if F.degree == 0:
        return "root-free", None
    _, G = unit_normalized(F)
    n0 = lemma_n_bound(G)
    ball = CompactDomain.ball(0, n0, F.prime)
    cleared = _cleared_integral(F)
    try:
        lower_bound_bF(cleared, ball, config)
    except RootCertified as exc:
        return "root", exc.ball
    except DepthCapExceeded:
        return "unknown", None
    return "root-free", None


def _cleared_integral(F: Polynomial) -> Polynomial:
    """Scale by a power of p so every coefficient is integral."""
    v = F.min_coefficient_valuation()
    if v >= 0:
        return F
    return F.scale(Fraction(F.prime) ** (-int(v)))


def degree_gate(
    f: RationalMap, config: AnalysisConfig = DEFAULT_CONFIG
) -> GlobalGateReport:
    """Necessary condition for global invertible isometry / measure
    preservation: alpha = 0 and deg P1 = deg Q1 + 1."""
    cert, _ = certify_no_roots_qp(f.Q1, config)
    return GlobalGateReport(
        prime=f.prime,
        alpha=f.alpha,
        m=f.m,
        n=f.n,
        gate_passed=(f.alpha == 0 and f.m == f.n + 1),
        q1_certification=cert,
    )


def _derivative_pair(f: RationalMap) -> tuple[Polynomial, Polynomial]:
    """Unit-leading numerator and denominator of f' (common factor cleared)."""
    from .polynomials import poly_divexact, poly_gcd

    num = f.t1
    den = f.Q1 * f.Q1
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = poly_divexact(num, g)
        den = poly_divexact(den, g)
    _, p2 = unit_normalized(num)
    _, q2 = unit_normalized(den)
    return p2, q2


def compute_N(
    f: RationalMap, gate: GlobalGateReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> GlobalGateReport:
    """Smallest positive N past which norms behave like leading terms:
    p^N exceeds every P1 and Q1 coefficient norm and both derivative parts
    scale as |x|^(deg).  Integral P1, Q1 always give N = 1."""
    if gate is None:
        gate = degree_gate(f, config)
    if not gate.gate_passed:
        raise ValueError("N is defined only once the degree gate passes")
    n = 1
    for c in list(f.P1.coefficients) + list(f.Q1.coefficients):
        v = c.valuation
        if v < 0:
            n = max(n, 1 - int(v))
    if not (f.P1.is_integral() and f.Q1.is_integral()):
        p2, q2 = _derivative_pair(f)
        n = max(n, lemma_n_bound(p2), lemma_n_bound(q2))
    l0 = None
    if gate.q1_certification == "root-free":
        l0 = _q1_lower_bound_exponent(f, config)
    return replace(gate, N_exponent=n, l0_exponent=l0)


def _q1_lower_bound_exponent(f: RationalMap, config: AnalysisConfig) -> int:
    """Exponent l0 with |Q1(x)| >= p^l0 on all of Q_p (root-free Q1)."""
    _, q1u = unit_normalized(f.Q1)
    n0 = lemma_n_bound(q1u)
    shift = int(f.Q1.leading_coefficient.valuation)  # 0 by normalization
    if f.Q1.degree == 0:
        return shift
    inside = lower_bound_bF(
        _cleared_integral(f.Q1), CompactDomain.ball(0, n0, f.prime), config
    )
    clear = f.Q1.min_coefficient_valuation()
    if clear < 0:
        # clearing multiplied Q1 by p^(-clear), shrinking norms by p^clear
        inside -= int(clear)
    outside = f.n * n0
    return min(inside, outside)


def _compact_reduction(
    f: RationalMap, config: AnalysisConfig
) -> tuple[GlobalGateReport, CompactDomain | None, ScalingReport | None, MPVerdict | None, str]:
    """Shared reduction: gate, invariance of B(0, N-1), classification and
    measure preservation on it.  Returns (gate, ball, report, mp, failure)."""
    gate = degree_gate(f, config)
    if not gate.gate_passed:
        return gate, None, None, None, "degree gate failed"
    if gate.q1_certification == "root":
        return gate, None, None, None, "denominator has a root in Q_p"
    if gate.q1_certification == "unknown":
        return gate, None, None, None, "denominator root-freeness undecided"
    gate = compute_N(f, gate, config)
    ball_domain = CompactDomain.ball(0, gate.N_exponent - 1, f.prime)
    report = classify(f, ball_domain, config)
    if not report.is_one_lipschitz:
        gate = replace(gate, forward_invariant_ball=None)
        return gate, ball_domain, report, None, "not locally 1-Lipschitz on the reduction ball"
    try:
        build_digraph(f, ball_domain, report.transport_level, report, config)
    except NotForwardInvariant:
        gate = replace(gate, forward_invariant_ball=False)
        return gate, ball_domain, report, None, "reduction ball is not forward invariant"
    gate = replace(gate, forward_invariant_ball=True)
    mp = mp_check(f, ball_domain, report, config)
    return gate, ball_domain, report, mp, ""


def global_inv_iso_check(
    f: RationalMap, config: AnalysisConfig = DEFAULT_CONFIG
) -> GlobalVerdict:
    """Is f an invertible local isometry on Q_p?

    Spheres past the reduction radius are always invertible local
    isometries for gate-passing maps, so the verdict is decided by forward
    invariance of B(0, N-1) together with invertibility and isometry there
    (the latter via the cycle criterion)."""
    gate, ball, report, mp, failure = _compact_reduction(f, config)
    if failure:
        verdict = "Undecided" if "undecided" in failure else "No"
        return GlobalVerdict(verdict, failure, gate, report, mp)
    if report.classification != LOCALLY_ISOMETRIC:
        return GlobalVerdict(
            "No",
            f"not locally isometric on the reduction ball "
            f"(classification: {report.classification})",
            gate,
            report,
            mp,
        )
    if mp.kind == MEASURE_PRESERVING:
        return GlobalVerdict(
            "Yes", "reduction ball is invariant, isometric and invertible",
            gate, report, mp,
        )
    if mp.kind == UNDECIDED:
        return GlobalVerdict("Undecided", "cycle criterion undecided", gate, report, mp)
    return GlobalVerdict(
        "No", "not invertible on the reduction ball", gate, report, mp
    )


def global_mp_check(
    f: RationalMap, config: AnalysisConfig = DEFAULT_CONFIG
) -> GlobalVerdict:
    """Is f measure preserving on Q_p?

    For locally 1-Lipschitz maps this is equivalent to being an invertible
    local isometry, and the reduction is the same; the verdict carries that
    equivalence."""
    gate, ball, report, mp, failure = _compact_reduction(f, config)
    if failure:
        verdict = "Undecided" if "undecided" in failure or "1-Lipschitz" in failure else "No"
        if failure == "degree gate failed":
            verdict = "No"
        return GlobalVerdict(verdict, failure, gate, report, mp)
    if mp.kind == MEASURE_PRESERVING:
        return GlobalVerdict(
            "Yes",
            "measure preserving on the invariant reduction ball "
            "(equivalent to invertible local isometry here)",
            gate, report, mp,
        )
    if mp.kind == UNDECIDED:
        return GlobalVerdict("Undecided", "cycle criterion undecided", gate, report, mp)
    return GlobalVerdict(
        "No", "not measure preserving on the reduction ball", gate, report, mp
    )


def global_obstruction(
    f: RationalMap,
    goal: str,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> ObstructionWitness:
    """A concrete witness that f is not minimal (resp. not both measure
    preserving and ergodic) on Q_p.

    Minimality: an invariant ball around 0 or a region that orbits never
    leave.  Ergodicity: for gate-passing maps the invariant sphere
    S_{p^N}(0); otherwise a measure-distorting ball or escaping region.
    The stated property is verified at sampled representatives before the
    witness is returned.
    """
    if goal not in (MINIMALITY, ERGODICITY):
        raise ValueError(f"unknown goal {goal!r}")
    alpha, m, n = f.alpha, f.m, f.n
    if goal == ERGODICITY and alpha == 0 and m == n + 1:
        gate = compute_N(f, None, config)
        N = gate.N_exponent
        witness = ObstructionWitness(
            kind="InvariantSphere",
            case_tag="invariant-sphere",
            region=SphereRegion(N, f.prime),
            derived_levels={"N": N},
        )
        return _verify_witness(f, witness, config)
    strict = goal == ERGODICITY  # measure distortion needs strict scaling
    if m <= n or (m == n + 1 and alpha > 0):
        return _contraction_witness(f, strict, config)
    # now m > n with alpha <= 0, or m - n >= 2 with alpha > 0
    return _escape_witness(f, strict, config)


def _coefficient_peak(f: RationalMap, N: int) -> int:
    """max over i of (N*i - v(a_i)) for the P1 coefficients: exponent bound
    for |P1| on the ball of radius p^N."""
    peak = 0
    for i, c in enumerate(f.P1.coefficients):
        if not c.is_zero():
            peak = max(peak, N * i - int(c.valuation))
    return peak


def _contraction_witness(
    f: RationalMap, strict: bool, config: AnalysisConfig
) -> ObstructionWitness:
    alpha, m, n = f.alpha, f.m, f.n
    _, q1u = unit_normalized(f.Q1)
    n0 = lemma_n_bound(q1u)
    if not f.P1.is_zero():
        n0 = max(n0, lemma_n_bound(unit_normalized(f.P1)[1]))
    cert, ball = certify_no_roots_qp(f.Q1, config)
    if cert != "root-free":
        raise PoleInDomain(
            "the invariant-ball witness needs a pole-free denominator", ball=ball
        )
    if m == n + 1:
        N = n0
    else:
        # past p^N the map does not expand: p^-alpha |x|^(m-n) <= |x|
        need = -alpha if not strict else -alpha + 1
        N = max(n0, _ceil_div_int(need, n + 1 - m))
    l0 = _q1_lower_bound_exponent(f, config)
    l1 = -alpha - l0 + _coefficient_peak(f, N)
    if strict:
        n1 = max(N, l1)
        region = Ball.containing(0, n1 + 1, f.prime)
        image = Ball.containing(0, n1, f.prime)
        tag = "measure-distorting-ball"
    else:
        n1 = max(N, l1)
        region = Ball.containing(0, n1, f.prime)
        image = region
        tag = "invariant-ball"
    witness = ObstructionWitness(
        kind="InvariantBall",
        case_tag=tag,
        region=region,
        image_region=image,
        derived_levels={"N0": n0, "N": N, "l0": l0, "l1": l1, "N1": n1},
    )
    return _verify_witness(f, witness, config)


def _escape_witness(
    f: RationalMap, strict: bool, config: AnalysisConfig
) -> ObstructionWitness:
    alpha, m, n = f.alpha, f.m, f.n
    n0 = max(
        lemma_n_bound(unit_normalized(f.P1)[1]),
        lemma_n_bound(unit_normalized(f.Q1)[1]),
    )
    if m - n == 1:
        # alpha <= 0 here, so |f(x)| = p^-alpha |x| >= |x|
        N = n0
    else:
        need = alpha if not strict else alpha + 1
        N = max(n0, _ceil_div_int(need, m - n - 1))
    sphere_exp = N + 1 if strict else N
    min_image = sphere_exp + 1 if strict else sphere_exp
    witness = ObstructionWitness(
        kind="EscapingRegion",
        case_tag="escaping-orbit" if not strict else "measure-distorting-escape",
        region=Ball.containing(0, sphere_exp - 1, f.prime),
        sphere_exponent=sphere_exp,
        min_image_exponent=min_image,
        derived_levels={"N0": n0, "N": N},
    )
    return _verify_witness(f, witness, config)


def _ceil_div_int(a: int, b: int) -> int:
    return -((-a) // b)


def _verify_witness(
    f: RationalMap, w: ObstructionWitness, config: AnalysisConfig
) -> ObstructionWitness:
    depth = config.witness_depth
    ok = True
    if w.kind == "InvariantSphere":
        N = w.region.radius_exponent
        sphere = CompactDomain.sphere(N, f.prime)
        for b in decompose(sphere, N - 1 - depth, config):
            if f.eval(b.center).norm_exponent != N:
                ok = False
                break
    elif w.kind == "InvariantBall":
        dom = CompactDomain.ball(0, w.region.level, f.prime)
        for b in decompose(dom, w.region.level - depth, config):
            if not w.image_region.contains(f.eval(b.center)):
                ok = False
                break
    else:  # EscapingRegion
        for k in range(3):
            sphere = CompactDomain.sphere(w.sphere_exponent + k, f.prime)
            lvl = w.sphere_exponent + k - 1 - depth
            for b in decompose(sphere, lvl, config):
                if f.eval(b.center).norm_exponent < w.min_image_exponent:
                    ok = False
                    break
            if not ok:
                break
    return replace(w, checked_depth=depth, verified=ok)
