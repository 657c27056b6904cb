#!/usr/bin/env python3
"""Survey of random integral rational maps on Z_p.

Samples maps, keeps the locally 1-Lipschitz ones with Z_p forward
invariant, and tabulates classification, measure preservation, and how far
single-cycle scans reach.  Cross-checks every kept digraph against the
brute-force functional graph on residues.
"""

import argparse
import random
from collections import Counter
from fractions import Fraction

from padicdyn import (
    CompactDomain,
    build_digraph,
    classify,
    cycle_decomposition,
    ergodic_check,
    mp_check,
)
from padicdyn.errors import PadicDynError
from padicdyn.maps import map_from_coefficients


def brute_force_edges(f, p, t, depth=4):
    mod_full, mod_t = p**depth, p**(-t)
    pc = [int(c.value) for c in f.P.coefficients]
    qc = [int(c.value) for c in f.Q.coefficients]
    edges = {}
    for r in range(mod_full):
        num = 0
        for c in reversed(pc):
            num = num * r + c
        den = 0
        for c in reversed(qc):
            den = den * r + c
        value = Fraction(num, den)
        if value.denominator % p == 0:
            return None
        image = value.numerator * pow(value.denominator, -1, mod_t) % mod_t
        prev = edges.setdefault(r % mod_t, image)
        if prev != image:
            return None
    return edges


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    args = ap.parse_args()

    rng = random.Random(args.seed)
    stats = Counter()
    kept = 0
    drawn = 0
    while kept < args.count:
        drawn += 1
        p = args.primes[kept % len(args.primes)]
        deg_p = rng.randint(1, 4)
        deg_q = rng.randint(0, 3)
        pc = [rng.randint(-9, 9) for _ in range(deg_p)] + [rng.randint(1, 9)]
        qc = [rng.randint(-9, 9) for _ in range(deg_q)] + [rng.randint(1, 9)]
        X = CompactDomain.zp(p)
        try:
            f = map_from_coefficients(pc, qc, p)
            if f.P.degree < 1:
                continue
            report = classify(f, X)
            if not report.is_one_lipschitz or report.transport_level is None:
                stats["rejected: not 1-Lipschitz"] += 1
                continue
            top = min(report.transport_level, -1)
            build_digraph(f, X, top, report)
        except PadicDynError:
            stats["rejected: pole/escape/undecidable"] += 1
            continue
        kept += 1
        stats[f"classification: {report.classification}"] += 1
        verdict = mp_check(f, X, report)
        stats[f"measure preserving: {verdict.kind}"] += 1
        if verdict.kind == "MeasurePreserving":
            erg = ergodic_check(f, X, -4, report)
            stats[f"ergodic scan: {erg.kind}"] += 1
        for t in range(top, -4, -1):
            G = build_digraph(f, X, t, report)
            oracle = brute_force_edges(f, p, t)
            lib = {int(v.key): int(G.edge[v].key) for v in G.vertices}
            assert oracle == lib, f"oracle mismatch for {f} at level {t}"
        stats["oracle-checked maps"] += 1

    print(f"kept {kept} of {drawn} drawn maps\n")
    for key in sorted(stats):
        print(f"  {key}: {stats[key]}")


if __name__ == "__main__":
    main()
