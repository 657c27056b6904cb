"""Level digraphs of a rational map on a compact open domain.

One vertex per level-t ball; the unique out-edge of a ball is the ball
containing the image of its canonical representative (a single evaluation
suffices because the map is locally 1-Lipschitz at and below the certified
transport level).  Cycle structure decides measure preservation and
semi-decides ergodicity and minimality; subsidiary edge data decides how far
the finite digraphs certify the infinite family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_CONFIG, AnalysisConfig
from .domains import Ball, CompactDomain, decompose, locate
from .errors import (
    ConstantTermNotIntegral,
    DecompositionTooLarge,
    DepthCapExceeded,
    DerivativeRootInDomain,
    LevelAboveIntrinsic,
    LevelTooCoarse,
    NotForwardInvariant,
    NotInDomain,
    NotOneLipschitz,
)
from .hensel import hensel_lift
from .maps import RationalMap
from .padics import INF, NEG_INF, ExtendedInt, PAdicRational, fraction_valuation
from .polynomials import Polynomial, poly_eval, taylor_shift
from .scaling import ScalingReport, classify

MEASURE_PRESERVING = "MeasurePreserving"
NOT_MEASURE_PRESERVING = "NotMeasurePreserving"
UNDECIDED = "Undecided"
NOT_ERGODIC = "NotErgodic"
SINGLE_CYCLE_TO_DEPTH = "SingleCycleToDepth"


@dataclass(frozen=True)
class SubsidiaryEdgeData:
    s_exponent: int
    # exponents of the four bounds compared against p^t, in order:
    # rescaling, radius/scalar, denominator-vs-its-derivative, lifting
    bound_exponents: tuple[ExtendedInt, ExtendedInt, ExtendedInt, ExtendedInt]
    passes: bool


@dataclass(frozen=True)
class LevelDigraph:
    prime: int
    level: int
    domain: CompactDomain
    vertices: tuple[Ball, ...]
    edge: dict[Ball, Ball]
    reps: dict[Ball, PAdicRational]
    subsidiary: dict[Ball, SubsidiaryEdgeData] | None = None

    @property
    def is_subsidiary_equal(self) -> bool:
        if self.subsidiary is None:
            raise ValueError("subsidiary data was not computed")
        return all(d.passes for d in self.subsidiary.values())

    def subsidiary_edges(self) -> list[tuple[Ball, Ball]]:
        if self.subsidiary is None:
            raise ValueError("subsidiary data was not computed")
        return [(v, self.edge[v]) for v in self.vertices if self.subsidiary[v].passes]

    def in_degrees(self) -> dict[Ball, int]:
        deg = {v: 0 for v in self.vertices}
        for v in self.vertices:
            deg[self.edge[v]] += 1
        return deg


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[tuple[Ball, ...], ...]
    tail_vertices: tuple[Ball, ...]
    is_union_of_cycles: bool
    is_single_cycle: bool

    @property
    def cycle_lengths(self) -> list[int]:
        return sorted(len(c) for c in self.cycles)


@dataclass(frozen=True)
class ComponentSelection:
    level: int
    cycle: tuple[Ball, ...]
    domain: CompactDomain
    verdict: str  # MeasurePreserving / NotMeasurePreserving
    route: str  # "isometric" or "refinement"
    witness_level: int | None = None
    witness_ball: Ball | None = None


@dataclass(frozen=True)
class MPVerdict:
    kind: str  # MeasurePreserving / NotMeasurePreserving / Undecided
    witness_level: int | None = None
    witness_ball: Ball | None = None
    in_degree: int | None = None
    scanned_to: int | None = None
    intrinsic_level: int | None = None
    route: str = ""


@dataclass(frozen=True)
class ErgodicVerdict:
    kind: str  # NotErgodic / SingleCycleToDepth
    level: int | None = None
    cycle_count: int | None = None
    depth: int | None = None

    @property
    def is_minimal_report(self) -> str:
        # ergodicity plus measure preservation coincides with minimality here
        return self.kind


def _transport_level(
    f: RationalMap,
    X: CompactDomain,
    report: ScalingReport | None,
    config: AnalysisConfig,
) -> tuple[ScalingReport, int]:
    if report is None:
        report = classify(f, X, config)
    if not report.is_one_lipschitz or report.transport_level is None:
        raise NotOneLipschitz(
            "digraph levels are only defined for locally 1-Lipschitz maps "
            f"(classification: {report.classification})"
        )
    return report, report.transport_level


def build_digraph(
    f: RationalMap,
    X: CompactDomain,
    t: int,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> LevelDigraph:
    """The level-t digraph: one out-edge per ball, towards the ball holding
    the image of its representative.

    Requires t at or below the certified transport level, and the domain to
    be forward invariant at the representatives.
    """
    report, level = _transport_level(f, X, report, config)
    if t > level:
        raise LevelTooCoarse(
            f"level {t} is above the certified 1-Lipschitz level {level}"
        )
    balls = decompose(X, t, config)
    reps = {b: b.center for b in balls}
    edge: dict[Ball, Ball] = {}
    escaping = []
    for b in balls:
        image = f.eval(reps[b])
        try:
            edge[b] = locate(X, image, t)
        except NotInDomain:
            escaping.append((b, image))
    if escaping:
        raise NotForwardInvariant(
            f"{len(escaping)} ball(s) leave the domain, first: "
            f"{escaping[0][0]} -> {escaping[0][1]}",
            escaping=escaping,
        )
    return LevelDigraph(
        prime=f.prime,
        level=t,
        domain=X,
        vertices=tuple(balls),
        edge=edge,
        reps=reps,
    )


def s_exponent(
    f: RationalMap, a: PAdicRational, b: PAdicRational
) -> tuple[int, Polynomial, Polynomial]:
    """Least s >= 0 making P(p^s x + a) - (p^s y + b) Q(p^s x + a) integral.

    Computed from the s = 0 expansion: a monomial of total degree d scales
    by p^(s*d), so s = max over monomials of ceil(-v(coefficient)/d).
    Returns (s, P(x + a), Q(x + a)).
    """
    Pa = taylor_shift(f.P, a)
    Qa = taylor_shift(f.Q, a)
    bv = b.value
    # constant term: P(a) - b Q(a)
    c00 = Pa.coefficient(0).value - bv * Qa.coefficient(0).value
    if c00 != 0 and fraction_valuation(c00, f.prime) < 0:
        raise ConstantTermNotIntegral(
            f"constant term P(a) - b Q(a) has negative valuation at a={a}, b={b}"
        )
    s = 0
    deg = max(Pa.degree, Qa.degree)
    for i in range(0, deg + 1):
        # x^i y^1 monomial: -Q_a[i]
        cq = Qa.coefficient(i)
        if not cq.is_zero():
            v = cq.valuation
            if v < 0:
                s = max(s, _ceil_div(-int(v), i + 1))
        if i >= 1:
            # x^i y^0 monomial: P_a[i] - b Q_a[i]
            c = Pa.coefficient(i).value - bv * cq.value
            if c != 0:
                v = fraction_valuation(c, f.prime)
                if v < 0:
                    s = max(s, _ceil_div(-int(v), i))
    return s, Pa, Qa


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def subsidiary_edge_data(
    f: RationalMap,
    source_rep: PAdicRational,
    target_rep: PAdicRational,
    t: int,
    radius_exponent: int,
) -> SubsidiaryEdgeData:
    """Edge admission data at level t.

    The edge is kept when p^t is at most each of: p^(-s); p^l / |f'(a)|;
    |Q(a)| |f'(a)| / |Q'(a)|; p^(-2s) |Q(a)| |f'(a)|^2 (third bound infinite
    when Q'(a) = 0).
    """
    a = source_rep
    s, _, _ = s_exponent(f, a, target_rep)
    vq = poly_eval(f.Q, a).valuation
    vt = poly_eval(f.t1, a).valuation
    e: ExtendedInt = NEG_INF if vt is INF else 2 * int(vq) - int(vt)
    vqd = poly_eval(f.Q_derivative, a).valuation
    b1: ExtendedInt = -s
    b2: ExtendedInt = NEG_INF if e is NEG_INF else radius_exponent - e
    b3: ExtendedInt = (
        INF if vqd is INF else (NEG_INF if e is NEG_INF else int(vqd) - int(vq) + e)
    )
    b4: ExtendedInt = NEG_INF if e is NEG_INF else -2 * s - int(vq) + 2 * e
    passes = t <= min(b1, b2, b3, b4)
    return SubsidiaryEdgeData(s, (b1, b2, b3, b4), passes)


def build_subsidiary(
    f: RationalMap,
    X: CompactDomain,
    t: int,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> LevelDigraph:
    """The level-t digraph with subsidiary admission data on every edge."""
    report, level = _transport_level(f, X, report, config)
    G = build_digraph(f, X, t, report, config)
    data = {}
    for v in G.vertices:
        data[v] = subsidiary_edge_data(
            f, G.reps[v], G.edge[v].center, t, level
        )
    return LevelDigraph(
        prime=G.prime,
        level=G.level,
        domain=G.domain,
        vertices=G.vertices,
        edge=G.edge,
        reps=G.reps,
        subsidiary=data,
    )


def cycle_decomposition(G: LevelDigraph) -> CycleDecomposition:
    """Cycles and tails of the out-degree-1 functional graph.

    Deterministic: cycles are rotated to start at their smallest key and
    sorted by that key.
    """
    color: dict[Ball, int] = {}  # 0 in progress, 1 done
    on_cycle: set[Ball] = set()
    cycles: list[tuple[Ball, ...]] = []
    for start in G.vertices:
        if start in color:
            continue
        path = []
        v = start
        while v not in color:
            color[v] = 0
            path.append(v)
            v = G.edge[v]
        if color[v] == 0:
            # found a new cycle: unwind path back to v
            idx = path.index(v)
            cyc = path[idx:]
            cycles.append(tuple(cyc))
            on_cycle.update(cyc)
        for u in path:
            color[u] = 1
    normalized = []
    for cyc in cycles:
        k = min(range(len(cyc)), key=lambda i: cyc[i].key)
        normalized.append(cyc[k:] + cyc[:k])
    normalized.sort(key=lambda c: c[0].key)
    tails = tuple(v for v in G.vertices if v not in on_cycle)
    return CycleDecomposition(
        cycles=tuple(normalized),
        tail_vertices=tails,
        is_union_of_cycles=not tails,
        is_single_cycle=not tails and len(normalized) == 1,
    )


def intrinsic_level(
    f: RationalMap,
    X: CompactDomain,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> int:
    """Largest level t where the subsidiary digraph keeps every edge, with a
    guard margin of coinciding levels below it.

    Coincidence below a candidate is verified rather than assumed (it is not
    monotone by construction), so the returned level carries
    ``config.intrinsic_margin`` extra certificate levels.
    """
    report, level = _transport_level(f, X, report, config)
    if not report.derivative_root_free:
        raise DerivativeRootInDomain(
            "intrinsic level requires a root-free derivative on the domain"
        )
    cache: dict[int, bool] = {}

    def coincides(t: int) -> bool:
        if t not in cache:
            cache[t] = build_subsidiary(f, X, t, report, config).is_subsidiary_equal
        return cache[t]

    floor = level - config.descent_cap
    for t in range(level, floor - 1, -1):
        if all(coincides(t - j) for j in range(config.intrinsic_margin + 1)):
            return t
    raise DepthCapExceeded(
        f"no level down to {floor} has matching digraph and subsidiary digraph",
        level=floor,
    )


def mp_check(
    f: RationalMap,
    X: CompactDomain,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> MPVerdict:
    """Measure preservation verdict for a locally 1-Lipschitz map.

    Root-free derivative: decided finitely by checking the cycle criterion
    at the intrinsic level and one level below.  With derivative roots the
    criterion is scanned level by level to a depth cap and an honest
    Undecided is returned when every scanned level passes.
    """
    report, level = _transport_level(f, X, report, config)
    if report.derivative_root_free:
        t0 = intrinsic_level(f, X, report, config)
        # a failure at a fine level forces failures at all finer levels, so
        # scanning from the top finds the first (coarsest) counterexample
        for t in range(level, t0 - 2, -1):
            verdict = _cycle_failure(f, X, t, report, config)
            if verdict is not None:
                return verdict
        return MPVerdict(
            kind=MEASURE_PRESERVING, intrinsic_level=t0, route="intrinsic"
        )
    floor = level - config.mp_scan_depth
    for t in range(level, floor - 1, -1):
        try:
            verdict = _cycle_failure(f, X, t, report, config)
        except DecompositionTooLarge:
            return MPVerdict(kind=UNDECIDED, scanned_to=t + 1, route="scan")
        if verdict is not None:
            return verdict
    return MPVerdict(kind=UNDECIDED, scanned_to=floor, route="scan")


def _cycle_failure(f, X, t, report, config) -> MPVerdict | None:
    G = build_digraph(f, X, t, report, config)
    deg = G.in_degrees()
    worst = max(deg.values())
    if worst <= 1:
        return None
    ball = min((b for b, d in deg.items() if d >= 2), key=lambda b: b.key)
    return MPVerdict(
        kind=NOT_MEASURE_PRESERVING,
        witness_level=t,
        witness_ball=ball,
        in_degree=deg[ball],
        route="cycle-criterion",
    )


def ergodic_check(
    f: RationalMap,
    X: CompactDomain,
    depth: int,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> ErgodicVerdict:
    """Single-cycle scan down to ``depth``.

    NotErgodic is definitive; a full pass is only a certificate to the
    scanned depth since the criterion quantifies over every level.  The
    same verdict answers minimality.
    """
    report, level = _transport_level(f, X, report, config)
    if depth > level:
        raise LevelTooCoarse(f"depth {depth} is above the starting level {level}")
    for t in range(level, depth - 1, -1):
        G = build_digraph(f, X, t, report, config)
        dec = cycle_decomposition(G)
        if not dec.is_single_cycle:
            return ErgodicVerdict(
                kind=NOT_ERGODIC, level=t, cycle_count=len(dec.cycles)
            )
    return ErgodicVerdict(kind=SINGLE_CYCLE_TO_DEPTH, depth=depth)


def mp_components(
    f: RationalMap,
    X: CompactDomain,
    t: int,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> list[ComponentSelection]:
    """Per-cycle measure preservation verdicts at a level t <= t0.

    For a local isometry every union of cycles is measure preserving; in
    general a cycle survives exactly when its balls stay a union of cycles
    one level down.  Verdicts for unions combine conjunctively
    (see ``union_verdict``).
    """
    report, level = _transport_level(f, X, report, config)
    t0 = intrinsic_level(f, X, report, config)
    if t > t0:
        raise LevelAboveIntrinsic(
            f"components are certified only at levels <= t0 = {t0}, got {t}"
        )
    G = build_digraph(f, X, t, report, config)
    dec = cycle_decomposition(G)
    isometric = report.classification == "LocallyIsometric"
    out = []
    finer = None
    if not isometric:
        finer = build_digraph(f, X, t - 1, report, config)
    for cyc in dec.cycles:
        domain = CompactDomain.from_balls(cyc)
        if isometric:
            out.append(
                ComponentSelection(
                    level=t,
                    cycle=cyc,
                    domain=domain,
                    verdict=MEASURE_PRESERVING,
                    route="isometric",
                )
            )
            continue
        # children of the cycle's balls must again be a union of cycles
        children = {c for b in cyc for c in b.children()}
        indeg = {c: 0 for c in children}
        ok = True
        witness = None
        for c in children:
            target = finer.edge[c]
            if target not in indeg:
                ok = False
                witness = c
                break
            indeg[target] += 1
        if ok:
            bad = [c for c, d in indeg.items() if d != 1]
            if bad:
                ok = False
                witness = min(bad, key=lambda b: b.key)
        out.append(
            ComponentSelection(
                level=t,
                cycle=cyc,
                domain=domain,
                verdict=MEASURE_PRESERVING if ok else NOT_MEASURE_PRESERVING,
                route="refinement",
                witness_level=None if ok else t - 1,
                witness_ball=witness,
            )
        )
    return out


def union_verdict(components: list[ComponentSelection]) -> str:
    return (
        MEASURE_PRESERVING
        if all(c.verdict == MEASURE_PRESERVING for c in components)
        else NOT_MEASURE_PRESERVING
    )


def verify_bijection(
    f: RationalMap,
    X: CompactDomain,
    source: Ball,
    sample_level: int,
    report: ScalingReport | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> bool:
    """Certify that the edge out of ``source`` is a sampled bijection.

    Every representative of the target ball at ``sample_level`` is lifted
    back through the rescaled polynomial; the lifted preimage must land in
    the enlarged source ball of radius p^t/|f'(a)|.  Raises on the first
    lifting failure (which would contradict the edge admission data).
    """
    report, level = _transport_level(f, X, report, config)
    t = source.level
    t0 = intrinsic_level(f, X, report, config)
    if t > t0:
        raise LevelAboveIntrinsic(f"bijectivity is certified only at t <= {t0}")
    G = build_digraph(f, X, t, report, config)
    target = G.edge[source]
    a = source.center
    s, Pa, Qa = s_exponent(f, a, target.center)
    e = f.scalar_exponent(a)
    assert e is not NEG_INF
    k = config.bijection_precision + max(0, -sample_level)
    for b_ball in target.subdivide(sample_level):
        b_point = b_ball.center
        # F(x) = P(p^s x + a) - b Q(p^s x + a), integral by choice of s
        F = Pa.shift_variable(s) - Qa.shift_variable(s).scale(b_point.value)
        res = hensel_lift(F, PAdicRational(Fraction(0), f.prime), k)
        x_root = res.root
        preimage = PAdicRational(Fraction(f.prime) ** s * x_root.value, f.prime) + a
        dist = preimage - a
        if not dist.is_zero() and dist.valuation < -(t - int(e)):
            return False
        image_error = f.eval(preimage) - b_point
        if not image_error.is_zero() and image_error.valuation < -sample_level:
            return False
    return True
