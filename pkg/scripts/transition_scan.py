#!/usr/bin/env python3
"""Locate the non-local -> quasi-local transition alpha*_d for several local
dimensions via the derivative-jump detector, then fit alpha* against log2(d).

Usage: python3 scripts/transition_scan.py [--n 1000] [--dims 2,3,4,5]
"""

import argparse
import math

from wgslab.transitions import DerivativeKind, alpha_star_scan, scaling_law_fit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1000, help="chain length")
    ap.add_argument("--dims", default="2,3,4,5", help="comma-separated local dims")
    args = ap.parse_args()
    dims = [int(tok) for tok in args.dims.split(",")]

    points = []
    print(f"{'d':>3} {'alpha*':>8} {'log2 d':>8} {'jump':>10} {'grid':>7}")
    for d in dims:
        report = alpha_star_scan(args.n, d, DerivativeKind.ALPHA)
        points.append((d, report.alpha_star))
        print(
            f"{d:>3} {report.alpha_star:>8.4f} {math.log2(d):>8.4f} "
            f"{report.jump_magnitude:>10.3e} {report.grid_resolution:>7.3f}"
        )

    if len(points) >= 4:
        slope, intercept, rms = scaling_law_fit(points)
        print(f"\nalpha* = {slope:.4f} * log2(d) + {intercept:.4f}   (rms {rms:.4f})")


if __name__ == "__main__":
    main()
