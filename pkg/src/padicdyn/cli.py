"""Command-line front end.

One analysis per invocation: parse the map and domain, dispatch, print a
text report, optionally write DOT/JSON artifacts.  Exit status 0 on a
decided verdict, 2 on honest semi-decisions (Undecided, single-cycle scans
that only certify to a depth), 1 on errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_CONFIG, AnalysisConfig
from .digraph import (
    MEASURE_PRESERVING,
    NOT_ERGODIC,
    UNDECIDED,
    build_digraph,
    build_subsidiary,
    cycle_decomposition,
    ergodic_check,
    intrinsic_level,
    mp_check,
    mp_components,
)
from .errors import PadicDynError
from .global_qp import (
    ERGODICITY,
    MINIMALITY,
    compute_N,
    degree_gate,
    global_inv_iso_check,
    global_mp_check,
    global_obstruction,
)
from .hensel import hensel_lift
from .padics import PAdicRational
from .parsing import QP_GLOBAL, parse_domain, parse_map
from .render import digraph_to_dot, digraph_to_json, write_atomic
from .scaling import classify

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2


@dataclass(frozen=True)
class Invocation:
    prime: int
    map_text: str
    domain_text: str
    command: str
    level: int | None = None
    depth: int | None = None
    dot_path: str | None = None
    json_path: str | None = None
    margin: int | None = None
    cap: int | None = None
    seed: str | None = None
    precision: int | None = None
    goal: str | None = None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description="Exact analysis of rational map dynamics over Q_p",
    )
    parser.add_argument("-p", "--prime", type=int, required=True, help="the prime p")
    parser.add_argument("--map", required=True, help="rational map, e.g. '(x^2-1)/x'")
    parser.add_argument(
        "--domain",
        default="Qp",
        help="domain: 'Zp', 'B(c,t)' combined with + and -, or 'Qp'",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **flags):
        s = sub.add_parser(name)
        if flags.get("level"):
            s.add_argument("--level", type=int, required=True, help="level exponent t")
        if flags.get("depth"):
            s.add_argument("--depth", type=int, required=True, help="deepest level scanned")
        s.add_argument("--dot", dest="dot_path", help="write the digraph as DOT")
        s.add_argument("--json", dest="json_path", help="write the digraph as JSON")
        s.add_argument("--margin", type=int, help="intrinsic-level guard margin")
        s.add_argument("--cap", type=int, help="descent/scan depth cap")
        return s

    add("classify")
    add("radius")
    add("digraph", level=True)
    add("subsidiary", level=True)
    add("intrinsic-level")
    add("mp")
    add("ergodic", depth=True)
    add("components", level=True)
    add("global")
    h = add("hensel")
    h.add_argument("--seed", required=True, help="integer or rational seed")
    h.add_argument("--prec", dest="precision", type=int, default=12)
    w = add("witness")
    w.add_argument(
        "--goal",
        choices=["minimality", "ergodicity"],
        required=True,
    )
    return parser


def invocation_from_args(argv: list[str]) -> Invocation:
    ns = _build_parser().parse_args(argv)
    return Invocation(
        prime=ns.prime,
        map_text=ns.map,
        domain_text=ns.domain,
        command=ns.command,
        level=getattr(ns, "level", None),
        depth=getattr(ns, "depth", None),
        dot_path=getattr(ns, "dot_path", None),
        json_path=getattr(ns, "json_path", None),
        margin=getattr(ns, "margin", None),
        cap=getattr(ns, "cap", None),
        seed=getattr(ns, "seed", None),
        precision=getattr(ns, "precision", None),
        goal=getattr(ns, "goal", None),
    )


def _config_for(inv: Invocation) -> AnalysisConfig:
    cfg = DEFAULT_CONFIG
    updates = {}
    if inv.margin is not None:
        updates["intrinsic_margin"] = inv.margin
    if inv.cap is not None:
        updates["descent_cap"] = inv.cap
        updates["mp_scan_depth"] = inv.cap
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _emit_graph(inv: Invocation, G, out) -> None:
    if inv.dot_path:
        write_atomic(inv.dot_path, digraph_to_dot(G))
        out(f"dot written: {inv.dot_path}")
    if inv.json_path:
        write_atomic(inv.json_path, digraph_to_json(G))
        out(f"json written: {inv.json_path}")


def run(inv: Invocation, stdout=None) -> int:
    """Execute one invocation; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout

    def out(line: str):
        print(line, file=stdout)

    cfg = _config_for(inv)
    p = inv.prime
    f = parse_map(inv.map_text, p)
    domain = parse_domain(inv.domain_text, p)
    is_global = domain == QP_GLOBAL

    if inv.command in ("global", "witness", "hensel"):
        pass
    elif is_global:
        raise PadicDynError(
            f"command '{inv.command}' needs a compact domain, not Qp"
        )

    if inv.command == "hensel":
        if f.Q.degree > 0:
            raise PadicDynError(
                "hensel lifts polynomial roots: give a map with a constant denominator"
            )
        seed = PAdicRational(Fraction(inv.seed), p)
        res = hensel_lift(f.P, seed, inv.precision)
        out(f"root: {res.root} (mod {p}^{res.precision_exponent})")
        out(f"distance bound exponent: {res.bound_exponent}")
        out(f"newton steps: {res.steps}")
        return EXIT_OK

    if inv.command == "witness":
        goal = MINIMALITY if inv.goal == "minimality" else ERGODICITY
        w = global_obstruction(f, goal, cfg)
        out(f"kind: {w.kind}")
        out(f"case: {w.case_tag}")
        out(f"region: {w.region}")
        if w.image_region is not None:
            out(f"image region: {w.image_region}")
        if w.sphere_exponent is not None:
            out(
                f"spheres from exponent {w.sphere_exponent} keep norm >= "
                f"p^{w.min_image_exponent}"
            )
        out(f"derived levels: {w.derived_levels}")
        out(f"verified at depth {w.checked_depth}: {'ok' if w.verified else 'FAILED'}")
        return EXIT_OK if w.verified else EXIT_ERROR

    if inv.command == "global":
        gate = degree_gate(f, cfg)
        out(
            f"gate: {'passed' if gate.gate_passed else 'failed'} "
            f"(alpha={gate.alpha}, m={gate.m}, n={gate.n})"
        )
        out(f"denominator roots in Qp: {gate.q1_certification}")
        if not gate.gate_passed:
            out("invertible local isometry: No")
            out("measure preserving: No")
            return EXIT_OK
        gate = compute_N(f, gate, cfg)
        out(f"N: {gate.N_exponent}")
        iso = global_inv_iso_check(f, cfg)
        mp = global_mp_check(f, cfg)
        out(f"forward invariant ball B(0,{gate.N_exponent - 1}): "
            f"{_yesno(iso.gate.forward_invariant_ball)}")
        out(f"invertible local isometry: {iso.verdict} ({iso.reason})")
        out(f"measure preserving: {mp.verdict} ({mp.reason})")
        if iso.verdict == "Undecided" or mp.verdict == "Undecided":
            return EXIT_UNDECIDED
        return EXIT_OK

    report = classify(f, domain, cfg)

    if inv.command == "classify":
        out(f"classification: {report.classification}"
            + (f" (exponent {report.classification_exponent})"
               if report.classification_exponent is not None else ""))
        out(f"radius exponent l: {report.radius_exponent}")
        out(f"derivative root-free: {_yesno(report.derivative_root_free)}")
        exps = sorted(set(report.scalar_profile.values()))
        out(f"scalar exponents at level {report.radius_exponent}: {exps}")
        if report.scalar_upper_bounds:
            out(
                "certified upper bounds on "
                f"{len(report.scalar_upper_bounds)} ball(s) near derivative roots"
            )
        return EXIT_OK

    if inv.command == "radius":
        out(f"radius exponent l: {report.radius_exponent}")
        out(f"b(Q) exponent: {report.b_q_exponent}")
        out(f"b(T1) exponent: {report.b_t1_exponent}")
        out(f"classification: {report.classification}")
        return EXIT_OK

    if inv.command == "digraph":
        G = build_digraph(f, domain, inv.level, report, cfg)
        dec = cycle_decomposition(G)
        out(f"vertices: {len(G.vertices)}")
        out(f"cycle lengths: {dec.cycle_lengths}")
        out(f"tail vertices: {len(dec.tail_vertices)}")
        for cyc in dec.cycles:
            out("cycle: " + " -> ".join(str(v.key) for v in cyc))
        _emit_graph(inv, G, out)
        return EXIT_OK

    if inv.command == "subsidiary":
        G = build_subsidiary(f, domain, inv.level, report, cfg)
        kept = sum(1 for d in G.subsidiary.values() if d.passes)
        out(f"vertices: {len(G.vertices)}")
        out(f"subsidiary edges kept: {kept} of {len(G.vertices)}")
        out(f"coincides with full digraph: {_yesno(G.is_subsidiary_equal)}")
        for v in G.vertices:
            d = G.subsidiary[v]
            out(
                f"edge {v.key} -> {G.edge[v].key}: s={d.s_exponent} "
                f"bounds={list(d.bound_exponents)} passes={_yesno(d.passes)}"
            )
        _emit_graph(inv, G, out)
        return EXIT_OK

    if inv.command == "intrinsic-level":
        t0 = intrinsic_level(f, domain, report, cfg)
        margin = cfg.intrinsic_margin
        levels = ", ".join(str(t0 - j) for j in range(margin + 1))
        out(f"t0: {t0} (coincidence certified at levels {levels})")
        return EXIT_OK

    if inv.command == "mp":
        verdict = mp_check(f, domain, report, cfg)
        if verdict.kind == MEASURE_PRESERVING:
            out("MeasurePreserving")
            out(f"certified via intrinsic level {verdict.intrinsic_level}")
            return EXIT_OK
        if verdict.kind == UNDECIDED:
            out(f"Undecided (all levels down to {verdict.scanned_to} are unions of cycles)")
            return EXIT_UNDECIDED
        out(
            f"NotMeasurePreserving at level {verdict.witness_level}: ball "
            f"{verdict.witness_ball.key} has in-degree {verdict.in_degree}"
        )
        return EXIT_OK

    if inv.command == "ergodic":
        verdict = ergodic_check(f, domain, inv.depth, report, cfg)
        if verdict.kind == NOT_ERGODIC:
            out(f"NotErgodic at level {verdict.level} ({verdict.cycle_count} cycles)")
            out("minimality: No (same criterion)")
            return EXIT_OK
        out(f"SingleCycleToDepth {verdict.depth}")
        out("ergodic and minimal as far as scanned; no finite certificate exists")
        return EXIT_UNDECIDED

    if inv.command == "components":
        comps = mp_components(f, domain, inv.level, report, cfg)
        for c in comps:
            balls = ", ".join(str(b.key) for b in c.cycle)
            out(f"component [{balls}]: {c.verdict} (route: {c.route})")
        return EXIT_OK

    raise PadicDynError(f"unknown command {inv.command!r}")


def _yesno(flag) -> str:
    if flag is None:
        return "unknown"
    return "yes" if flag else "no"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        inv = invocation_from_args(argv)
        return run(inv)
    except PadicDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
