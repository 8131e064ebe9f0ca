#!/usr/bin/env python3
"""Block entropy S_L and its sub-block upper bound U_L across fall-off rates.

Prints one table per alpha; area-law behaviour shows up as S_L flattening
with L, volume-law as steady growth.

Usage: python3 scripts/entropy_profiles.py [--n 1000] [--d 2] [--t 0.5]
"""

import argparse

from wgslab.chain import ChainSpec, PhaseModel, subsystem_size_limit
from wgslab.measures import block_entropy, u_l_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--alphas", default="0.5,1.0,2.0,5.0")
    ap.add_argument("--sub-len", type=int, default=None)
    args = ap.parse_args()

    limit = subsystem_size_limit(args.d)
    lengths = range(1, limit + 1)
    sub_len = args.sub_len or max(1, limit // 2 - 1)

    for alpha in (float(tok) for tok in args.alphas.split(",")):
        model = PhaseModel(ChainSpec(args.n, args.d, alpha), args.t)
        print(f"\nalpha = {alpha}  (d={args.d}, N={args.n}, t={args.t})")
        print(f"{'L':>4} {'S_L':>10} {'U_L':>10}")
        for length in lengths:
            s = block_entropy(model, length)
            u = (
                u_l_bound(model, length, sub_len)
                if length % sub_len == 0 and 2 * sub_len <= limit
                else float("nan")
            )
            print(f"{length:>4} {s:>10.6f} {u:>10.6f}")


if __name__ == "__main__":
    main()
