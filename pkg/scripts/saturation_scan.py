#!/usr/bin/env python3
"""Time-averaged genuine multipartite entanglement vs system size and the
saturation size N_sat(alpha, epsilon).

Usage: python3 scripts/saturation_scan.py --d 3 --alphas 1.5,2.5,3.5,4.5
"""

import argparse

import numpy as np

from wgslab.transitions import avg_ggm_vs_n, n_sat_from_sequence


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--alphas", default="1.5,2.5,3.5,4.5")
    ap.add_argument("--epsilons", default="1e-2,1e-3,1e-4,1e-5")
    ap.add_argument("--n-cap", type=int, default=400)
    ap.add_argument("--t0", type=float, default=3 * np.pi)
    args = ap.parse_args()
    epsilons = [float(tok) for tok in args.epsilons.split(",")]

    header = " ".join(f"{f'N_sat@{e:g}':>12}" for e in epsilons)
    print(f"{'alpha':>7} {'<G>(N_cap)':>11} {header}")
    for alpha in (float(tok) for tok in args.alphas.split(",")):
        seq = avg_ggm_vs_n(args.d, alpha, args.n_cap, t0=args.t0)
        sats = [n_sat_from_sequence(seq, eps).n_sat for eps in epsilons]
        cells = " ".join(f"{str(s) if s is not None else '-':>12}" for s in sats)
        print(f"{alpha:>7.3f} {seq[args.n_cap]:>11.6f} {cells}")


if __name__ == "__main__":
    main()
