#!/usr/bin/env python3
"""Run the bundled growth scenarios and print their increment tables."""

import argparse
import pathlib

from iwkit.growth import synthetic_tower_verify
from iwkit.serialize import load_json, scenario_from_dict


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario-dir",
                    default=str(pathlib.Path(__file__).parent.parent / "scenarios"))
    ap.add_argument("--precision", type=int, default=24)
    args = ap.parse_args()

    for path in sorted(pathlib.Path(args.scenario_dir).glob("growth_*.json")):
        raw = load_json(str(path))
        prime = int(raw["selmer"]["prime"])
        cap = prime ** max(int(raw.get("n_max", 4)), 1) + 8
        selmer, shape, n_max, expected = scenario_from_dict(
            raw, degree_cap=cap, precision=args.precision)
        rep = synthetic_tower_verify(selmer, shape, n_max)
        print(f"{path.name}: lambda={rep.lambda_invariant} mu={rep.mu_invariant} "
              f"n0={rep.n0} stab={rep.stabilization_level}")
        print("  n   s_n   obs   pred")
        for lv in rep.levels:
            obs = "-" if lv.nabla is None else lv.nabla
            pred = "-" if lv.predicted is None else lv.predicted
            print(f"  {lv.n}   {lv.finite_length:>3}   {obs:>3}   {pred:>4}")
        if expected is not None:
            got = [lv.nabla for lv in rep.levels if lv.n >= 1]
            tag = "ok" if got[:len(expected)] == expected else "MISMATCH"
            print(f"  expected increments: {expected} -> {tag}")


if __name__ == "__main__":
    main()
