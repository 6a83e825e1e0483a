"""K-convergence of both holonomy estimators on a spin-1 latitude loop.

Prints theta_U(K) for each estimator, the change from the previous K, and the
ratio of successive changes (about 4 for a second-order scheme).
"""

from __future__ import annotations

import argparse
import math
import sys

from phase_lab import ParameterLoop, SpinModel, uhlmann_phase


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--theta0", type=float, default=math.pi / 3)
    p.add_argument("--Ks", type=int, nargs="+", default=[128, 256, 512, 1024, 2048, 4096])
    args = p.parse_args(argv)
    model = SpinModel(j=1, beta=args.beta)
    loop = ParameterLoop.latitude(args.theta0)
    print("estimator,K,theta_u,delta,ratio")
    for est in ("connection_product", "polar_isometry"):
        prev = prev_delta = None
        for K in args.Ks:
            theta = uhlmann_phase(model, loop, K, est)
            delta = None if prev is None else abs(theta - prev)
            ratio = prev_delta / delta if prev_delta and delta else None
            print(f"{est},{K},{theta:.12f},{'' if delta is None else f'{delta:.3e}'},"
                  f"{'' if ratio is None else f'{ratio:.3f}'}")
            prev, prev_delta = theta, delta
    return 0


if __name__ == "__main__":
    sys.exit(main())
