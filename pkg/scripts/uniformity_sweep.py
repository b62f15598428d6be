#!/usr/bin/env python3
"""Measure how far the lone measurer's outcome distribution strays from uniform.

For every (d, t) cell the exact marginal is computed for a batch of random
term vectors; the reported deviation from 1/d stays at float-epsilon scale no
matter which terms are encoded, which is the whole point: the measuring
agent's qudit is maximally mixed and local operations cannot change that.
"""

import argparse

import numpy as np

from quditshare.analysis import outcome_marginal
from quditshare.protocol import DEFAULT_SEED, ProtocolParams, derived_seed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=8)
    ap.add_argument("--t-max", type=int, default=4)
    ap.add_argument("--vectors-per-cell", type=int, default=25)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args()

    print(f"seed={args.seed} vectors_per_cell={args.vectors_per_cell}")
    print(" d  t  max |p - 1/d|")
    cell = 0
    for d in range(2, args.d_max + 1):
        for t in range(2, args.t_max + 1):
            rng = np.random.default_rng(derived_seed(args.seed, cell))
            cell += 1
            worst = 0.0
            for _ in range(args.vectors_per_cell):
                s_vec = tuple(int(v) for v in rng.integers(0, d, size=t))
                probs = outcome_marginal(ProtocolParams(d=d, t=t, s_vector=s_vec)).probs
                worst = max(worst, float(np.max(np.abs(probs - 1.0 / d))))
            print(f"{d:2d} {t:2d}  {worst:.3e}")


if __name__ == "__main__":
    main()
