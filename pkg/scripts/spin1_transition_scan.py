"""Scan beta omega0 for the spin-1 great-circle Uhlmann phase and locate its jumps.

The phase is the argument of a real number, so it sits at 0 or pi and jumps
where that number changes sign. The scan prints the phase on a grid and the
sign changes refined with a root finder.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np
from scipy.optimize import brentq

from phase_lab import ParameterLoop, SpinModel, uhlmann_phase
from phase_lab.errors import ZeroTrace
from phase_lab.models.spin import spin1_equator_argument


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lo", type=float, default=0.25)
    p.add_argument("--hi", type=float, default=6.0)
    p.add_argument("--points", type=int, default=48)
    p.add_argument("--K", type=int, default=1024)
    args = p.parse_args(argv)
    loop = ParameterLoop.equator(K=args.K)
    grid = np.linspace(args.lo, args.hi, args.points)
    print("beta_omega0,theta_u,argument")
    for x in grid:
        try:
            theta = uhlmann_phase(SpinModel(j=1, omega0=1, beta=x), loop)
        except ZeroTrace:
            theta = math.nan
        print(f"{x:.6f},{theta:+.6f},{spin1_equator_argument(x):+.6e}")
    vals = [spin1_equator_argument(x) for x in grid]
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa * fb < 0:
            root = brentq(spin1_equator_argument, a, b, xtol=1e-14)
            print(f"# jump at beta_omega0 = {root:.10f}", file=sys.stderr)
    print(f"# 2 arccosh(2) = {2 * math.acosh(2):.10f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
