#!/usr/bin/env python3
"""End-to-end runs of the three bundled worked instances.

Prints the full analysis for each (classification, radius, intrinsic level,
digraph cycle structure, verdicts) and optionally writes DOT files with
--dot-dir.  Useful as a quick visual sanity check after changes.
"""

import argparse
import os

from padicdyn import (
    CompactDomain,
    build_subsidiary,
    classify,
    compute_N,
    cycle_decomposition,
    degree_gate,
    ergodic_check,
    global_inv_iso_check,
    global_mp_check,
    intrinsic_level,
    mp_check,
    mp_components,
    parse_domain,
    parse_map,
)
from padicdyn.render import digraph_to_dot, write_atomic

INSTANCES = [
    ("quadratic-over-linear on two unit balls", 7, "(x^2-1)/x", "B(2,-1)+B(5,-1)", -2),
    ("cubic-over-quadratic on a punctured Z_3", 3, "(2x^3+x^2+x)/(x^2+1)", "Zp-B(4,-2)-B(5,-2)", -2),
    ("quartic-over-cubic on Z_3", 3, "(x^4+x^3+2x^2+1)/(x^3-x+1)", "Zp", -1),
]


def analyze(name, p, map_text, domain_text, level, dot_dir=None):
    print(f"== {name}: p={p}, f={map_text}, X={domain_text}")
    f = parse_map(map_text, p)
    X = parse_domain(domain_text, p)
    report = classify(f, X)
    print(f"   classification: {report.classification}, l={report.radius_exponent}")
    t0 = intrinsic_level(f, X, report)
    print(f"   intrinsic level t0 = {t0}")
    G = build_subsidiary(f, X, level, report)
    dec = cycle_decomposition(G)
    print(
        f"   level {level}: {len(G.vertices)} balls, cycles {dec.cycle_lengths}, "
        f"{len(dec.tail_vertices)} tails, subsidiary=full: {G.is_subsidiary_equal}"
    )
    verdict = mp_check(f, X, report)
    print(f"   measure preserving: {verdict.kind}")
    erg = ergodic_check(f, X, level - 2, report)
    print(f"   ergodic scan: {erg.kind} (level {erg.level}, depth {erg.depth})")
    if t0 <= level:
        comps = mp_components(f, X, min(level, t0), report)
        for c in comps:
            balls = ",".join(str(b.key) for b in c.cycle)
            print(f"   component [{balls}]: {c.verdict}")
    if dot_dir:
        path = os.path.join(dot_dir, f"p{p}_level{abs(level)}.dot")
        write_atomic(path, digraph_to_dot(G))
        print(f"   dot written: {path}")
    print()


def global_analysis():
    print("== global analysis of the quartic-over-cubic map on Q_3")
    f = parse_map("(x^4+x^3+2x^2+1)/(x^3-x+1)", 3)
    gate = compute_N(f)
    print(f"   gate: alpha={gate.alpha}, m={gate.m}, n={gate.n}, N={gate.N_exponent}")
    print(f"   invertible local isometry: {global_inv_iso_check(f).verdict}")
    print(f"   measure preserving: {global_mp_check(f).verdict}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dot-dir", help="directory for DOT artifacts")
    args = ap.parse_args()
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
    for name, p, m, d, level in INSTANCES:
        analyze(name, p, m, d, level, args.dot_dir)
    global_analysis()


if __name__ == "__main__":
    main()
