#!/usr/bin/env python3
"""Sweep small elementary modules and print where each tower stabilizes.

For every module built from up to two generators of a small pool, this prints
lambda, mu, the per-level brute-force index and the level past which it agrees
with lambda + (p^n - p^{n-1}) mu.
"""

import argparse
import itertools

from iwkit import ElementaryModule, IwasawaSeries, phi, tower_report


def pool(p, precision, cap):
    return {
        "p": IwasawaSeries.constant(p, p, precision, cap),
        "X": IwasawaSeries.monomial(1, p, precision, cap),
        "X+p": IwasawaSeries.make(p, precision, [p, 1], cap),
        "X^2+p": IwasawaSeries.make(p, precision, [p, 0, 1], cap),
        "Phi_1": phi(1, prime=p, precision=precision, degree_cap=cap),
        "Phi_2": phi(2, prime=p, precision=precision, degree_cap=cap),
        "p*Phi_1": phi(1, prime=p, precision=precision, degree_cap=cap) * p,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--precision", type=int, default=24)
    ap.add_argument("--n-max", type=int, default=4)
    args = ap.parse_args()

    cap = args.prime**args.n_max + 8
    gens = pool(args.prime, args.precision, cap)
    names = sorted(gens)
    print(f"p = {args.prime}, levels 1..{args.n_max}")
    print(f"{'module':24} {'lam':>3} {'mu':>2}  nabla by level   stab")
    for size in (1, 2):
        for combo in itertools.combinations_with_replacement(names, size):
            m = ElementaryModule(args.prime, tuple(gens[k] for k in combo))
            rep = tower_report(m, args.n_max)
            seq = " ".join(
                f"{lv.nabla if lv.nabla is not None else '-':>4}"
                for lv in rep.levels if lv.n >= 1
            )
            label = "(+)".join(combo)
            print(f"{label:24} {rep.lambda_invariant:>3} {rep.mu_invariant:>2}"
                  f"  {seq}   {rep.stabilization_level}")


if __name__ == "__main__":
    main()
