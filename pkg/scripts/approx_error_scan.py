#!/usr/bin/env python3
"""Time-averaged gap between the exact GGM (exhaustive bipartition scan) and
its edge-site proxy, as a function of system size.

Warning: the exact scan is exponential in N; N = 11 at d = 3 takes minutes.

Usage: python3 scripts/approx_error_scan.py --d 3 --alpha 2 --n-values 5,6,7,8,9
"""

import argparse
import math
import time

import numpy as np

from wgslab.transitions import ggm_approx_error


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--n-values", default="5,6,7,8,9")
    ap.add_argument("--t0", type=float, default=3 * np.pi)
    args = ap.parse_args()
    n_values = [int(tok) for tok in args.n_values.split(",")]

    print(f"{'N':>4} {'E(N)':>12} {'log10 E':>9} {'secs':>7}")
    for n in n_values:
        tic = time.time()
        (_, err), = ggm_approx_error(args.d, [n], args.alpha, t0=args.t0)
        log10 = math.log10(err) if err > 0 else float("-inf")
        print(f"{n:>4} {err:>12.3e} {log10:>9.3f} {time.time() - tic:>7.1f}")


if __name__ == "__main__":
    main()
