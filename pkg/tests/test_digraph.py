import random
from fractions import Fraction

import pytest

from padicdyn import (
    Ball,
    CompactDomain,
    PAdicRational,
    build_digraph,
    build_subsidiary,
    classify,
    cycle_decomposition,
    decompose,
    ergodic_check,
    intrinsic_level,
    mp_check,
    mp_components,
    parse_domain,
    parse_map,
    union_verdict,
    verify_bijection,
)
from padicdyn.config import AnalysisConfig
from padicdyn.digraph import s_exponent
from padicdyn.errors import (
    ConstantTermNotIntegral,
    DerivativeRootInDomain,
    LevelAboveIntrinsic,
    LevelTooCoarse,
    NotForwardInvariant,
)
from padicdyn.maps import map_from_coefficients
from padicdyn.polynomials import taylor_shift


def p7_instance():
    return parse_map("(x^2-1)/x", 7), parse_domain("B(2,-1) + B(5,-1)", 7)


def p3_punctured_instance():
    return (
        parse_map("(2x^3 + x^2 + x)/(x^2 + 1)", 3),
        parse_domain("Zp - B(4,-2) - B(5,-2)", 3),
    )


def p3_quartic_instance():
    return parse_map("(x^4 + x^3 + 2x^2 + 1)/(x^3 - x + 1)", 3), CompactDomain.zp(3)


def keys(balls):
    return [b.key for b in balls]


class TestSevenAdicTwoBallMap:
    def test_digraph_level_minus_two(self):
        f, X = p7_instance()
        G = build_digraph(f, X, -2)
        assert len(G.vertices) == 14
        dec = cycle_decomposition(G)
        assert dec.cycle_lengths == [2, 6, 6]
        assert dec.is_union_of_cycles
        cycle_key_sets = [set(keys(c)) for c in dec.cycles]
        assert {Fraction(k) for k in (2, 9, 23, 26, 40, 47)} in cycle_key_sets

    def test_edge_map_against_modular_oracle(self):
        # f(x) = x - 1/x on residues mod 49, computed independently
        f, X = p7_instance()
        G = build_digraph(f, X, -2)
        for v in G.vertices:
            r = int(v.key)
            image = (r - pow(r, -1, 49)) % 49
            assert G.edge[v].key == Fraction(image)

    def test_subsidiary_all_edges_kept_at_minus_two(self):
        f, X = p7_instance()
        G = build_subsidiary(f, X, -2)
        assert G.is_subsidiary_equal
        assert all(d.s_exponent == 0 for d in G.subsidiary.values())

    def test_mp_and_ergodic(self):
        f, X = p7_instance()
        assert mp_check(f, X).kind == "MeasurePreserving"
        verdict = ergodic_check(f, X, -6)
        assert verdict.kind == "NotErgodic"
        assert verdict.level == -2
        assert verdict.cycle_count == 3

    def test_components_all_preserving(self):
        f, X = p7_instance()
        comps = mp_components(f, X, -2)
        assert len(comps) == 3
        assert all(c.verdict == "MeasurePreserving" for c in comps)
        assert all(c.route == "isometric" for c in comps)
        six_cycle = next(
            c for c in comps if set(keys(c.cycle)) == {Fraction(k) for k in (2, 9, 23, 26, 40, 47)}
        )
        assert six_cycle.domain.measure == Fraction(6, 49)

    def test_bijection_certificate(self):
        f, X = p7_instance()
        source = Ball.containing(2, -2, 7)
        assert verify_bijection(f, X, source, -4)


class TestThreeAdicPuncturedMap:
    def test_level_minus_two_structure(self):
        f, X = p3_punctured_instance()
        G = build_digraph(f, X, -2)
        edges = {int(v.key): int(G.edge[v].key) for v in G.vertices}
        assert edges == {0: 0, 1: 2, 2: 8, 3: 3, 6: 6, 7: 8, 8: 8}
        dec = cycle_decomposition(G)
        assert dec.cycle_lengths == [1, 1, 1, 1]
        assert {int(v.key) for v in dec.tail_vertices} == {1, 2, 7}

    def test_intrinsic_level(self):
        f, X = p3_punctured_instance()
        assert intrinsic_level(f, X) == -2

    def test_components_verdicts(self):
        f, X = p3_punctured_instance()
        comps = {int(c.cycle[0].key): c for c in mp_components(f, X, -2)}
        assert comps[8].verdict == "NotMeasurePreserving"
        assert comps[8].witness_level == -3
        for k in (0, 3, 6):
            assert comps[k].verdict == "MeasurePreserving"
        # the level -1 ball around 0 is the union of the three good cycles
        y2 = [comps[k] for k in (0, 3, 6)]
        assert union_verdict(y2) == "MeasurePreserving"
        merged = CompactDomain.from_balls([b for c in y2 for b in c.cycle])
        assert merged.keys == frozenset([Fraction(0)]) and merged.base_level == -1

    def test_restriction_to_bad_ball_not_preserving(self):
        f, _ = p3_punctured_instance()
        Y1 = CompactDomain.ball(8, -2, 3)
        verdict = mp_check(f, Y1)
        assert verdict.kind == "NotMeasurePreserving"
        assert verdict.witness_level == -3
        assert verdict.in_degree >= 2

    def test_restriction_to_good_ball_preserves(self):
        f, _ = p3_punctured_instance()
        Y2 = CompactDomain.ball(0, -1, 3)
        assert mp_check(f, Y2).kind == "MeasurePreserving"

    def test_level_above_intrinsic_rejected(self):
        f, X = p3_punctured_instance()
        with pytest.raises(LevelAboveIntrinsic):
            mp_components(f, X, -1)


class TestThreeAdicQuarticMap:
    def test_single_three_cycle_and_subsidiary(self):
        f, X = p3_quartic_instance()
        G = build_subsidiary(f, X, -1)
        dec = cycle_decomposition(G)
        assert dec.is_single_cycle
        assert dec.cycle_lengths == [3]
        assert G.is_subsidiary_equal

    def test_intrinsic_level(self):
        f, X = p3_quartic_instance()
        assert intrinsic_level(f, X) == -1

    def test_mp_on_z3(self):
        f, X = p3_quartic_instance()
        assert mp_check(f, X).kind == "MeasurePreserving"

    def test_bijection_on_each_cycle_edge(self):
        f, X = p3_quartic_instance()
        for k in (0, 1, 2):
            assert verify_bijection(f, X, Ball.containing(k, -1, 3), -4)


def test_translation_single_cycle():
    f = parse_map("x + 1", 5)
    X = CompactDomain.zp(5)
    G = build_digraph(f, X, -2)
    dec = cycle_decomposition(G)
    assert dec.is_single_cycle and dec.cycle_lengths == [25]
    assert ergodic_check(f, X, -6).kind == "SingleCycleToDepth"
    assert verify_bijection(f, X, Ball.containing(3, -1, 5), -4)


def test_identity_all_self_loops():
    f = parse_map("x", 3)
    G = build_digraph(f, CompactDomain.zp(3), -1)
    dec = cycle_decomposition(G)
    assert dec.cycle_lengths == [1, 1, 1]
    verdict = ergodic_check(f, CompactDomain.zp(3), -4)
    assert verdict.kind == "NotErgodic" and verdict.level == -1
    # every ball is its own measure-preserving component
    comps = mp_components(f, CompactDomain.zp(3), -1)
    assert [c.verdict for c in comps] == ["MeasurePreserving"] * 3
    assert all(len(c.cycle) == 1 for c in comps)


def test_scaling_toward_zero_not_preserving():
    f = parse_map("5x", 5)
    X = CompactDomain.zp(5)
    verdict = mp_check(f, X)
    assert verdict.kind == "NotMeasurePreserving"
    assert verdict.witness_ball.key == Fraction(0)
    assert verdict.in_degree == 5
    G = build_digraph(f, X, -2)
    dec = cycle_decomposition(G)
    assert dec.cycle_lengths == [1]
    assert keys(dec.cycles[0]) == [Fraction(0)]
    assert len(dec.tail_vertices) == 24


def test_forward_invariance_checked():
    # x + 1/5 is an isometry but maps Z_5 outside itself
    f = parse_map("x + 1/5", 5)
    X = CompactDomain.zp(5)
    report = classify(f, X)
    with pytest.raises(NotForwardInvariant):
        build_digraph(f, X, report.transport_level, report)


def test_level_above_radius_rejected():
    f, X = p3_punctured_instance()
    with pytest.raises(LevelTooCoarse):
        build_digraph(f, X, -1)


def test_out_degree_one_and_refinement_consistency():
    f, X = p3_punctured_instance()
    coarse = build_digraph(f, X, -2)
    fine = build_digraph(f, X, -3)
    for v in fine.vertices:
        assert fine.edge[v].parent() == coarse.edge[v.parent()]
    assert set(coarse.edge) == set(coarse.vertices)


def test_single_cycle_length_counts_measure():
    f, X = p3_quartic_instance()
    for t in (-1, -2):
        G = build_digraph(f, X, t)
        dec = cycle_decomposition(G)
        if dec.is_single_cycle:
            assert len(dec.cycles[0]) == X.measure / Fraction(3) ** t


def test_subsidiary_edges_subset_of_edges():
    f, X = p3_punctured_instance()
    G = build_subsidiary(f, X, -2)
    all_edges = {(v, G.edge[v]) for v in G.vertices}
    assert set(G.subsidiary_edges()) <= all_edges


def _brute_force_s(f, a, b, bound=8):
    # least s >= 0 making P(p^s x + a) - (p^s y + b) Q(p^s x + a) integral:
    # the y^0 coefficients are those of P(p^s x+a) - b Q(p^s x+a) and the
    # y^1 coefficients those of -p^s Q(p^s x+a)
    p = f.prime
    for s in range(bound):
        shift = Fraction(p) ** s
        Pa = taylor_shift(f.P, a).shift_variable(s)
        Qa = taylor_shift(f.Q, a).shift_variable(s)
        const_part = Pa - Qa.scale(b.value)
        y_part = Qa.scale(shift)
        if const_part.is_integral() and y_part.is_integral():
            return s
    raise AssertionError("no s found")


def test_s_exponent_matches_brute_force():
    rng = random.Random(99)
    f, X = p3_punctured_instance()
    reps = decompose(X, -2)
    for v in reps:
        a = v.center
        b = PAdicRational(Fraction(int(f.eval(a).value.numerator * pow(f.eval(a).value.denominator, -1, 81)) % 81), 3)
        s, _, _ = s_exponent(f, a, b)
        assert s == _brute_force_s(f, a, b)


def test_s_exponent_positive_outside_unit_ball():
    # around a center of norm p, rescaling is needed for integrality
    f = map_from_coefficients([0, 0, 1], [1], 3)  # x^2
    a = PAdicRational(Fraction(1, 3), 3)
    b = PAdicRational(Fraction(1, 9), 3)
    s, _, _ = s_exponent(f, a, b)
    assert s == _brute_force_s(f, a, b)
    assert s > 0


def test_constant_term_must_be_integral():
    f = map_from_coefficients([0, 1], [1], 3)  # identity
    a = PAdicRational(Fraction(1, 3), 3)
    b = PAdicRational(Fraction(0), 3)
    with pytest.raises(ConstantTermNotIntegral):
        s_exponent(f, a, b)


def test_intrinsic_level_needs_root_free_derivative():
    froot = parse_map("(x^2 + 2x)/2", 3)
    with pytest.raises(DerivativeRootInDomain):
        intrinsic_level(froot, CompactDomain.zp(3))


def test_mp_scan_route_with_derivative_root():
    # |f'| vanishes at -1; the scan finds a two-to-one collapse
    froot = parse_map("(x^2 + 2x)/2", 3)
    verdict = mp_check(froot, CompactDomain.zp(3))
    assert verdict.kind == "NotMeasurePreserving"
    assert verdict.route == "cycle-criterion"


def test_mp_scan_depth_controls_undecided():
    # x^3 fixes every residue mod 3 but collapses three balls mod 9: with a
    # zero scan budget the verdict is an honest Undecided, with the default
    # budget the collapse is found one level down
    f = parse_map("x^3", 3)
    X = CompactDomain.zp(3)
    report = classify(f, X)
    assert not report.derivative_root_free
    shallow = mp_check(f, X, report, AnalysisConfig(mp_scan_depth=0))
    assert shallow.kind == "Undecided"
    full = mp_check(f, X, report)
    assert full.kind == "NotMeasurePreserving"
    assert full.witness_level == -2
    assert full.in_degree == 3
