"""Invariant suite behind ``phase-lab selftest``.

Each check returns a ``CheckResult``; ``run_selftest`` runs them all in order.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import TruncationWarning
from .holonomy import level_states, numeric_uhlmann_connection, uhlmann_holonomy, uhlmann_phase, wilson_loop_phase
from .linops import anti_hermiticity_defect
from .loops import ParameterLoop
from .models import BosonModel, SpinModel, UnitaryFamily

GAUGE_TOL = 1e-12
UNITARITY_TOL = 1e-6
ANTI_HERMITIAN_TOL = 1e-8
RATIO_WINDOW = (3.0, 5.0)
NCUT_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} ({self.threshold}) [{self.seconds:.1f}s]"


def check_gauge_invariance(seed: int = 0) -> CheckResult:
    """Random phases e^{i chi_k} on every eigenvector sample leave the Wilson loop unchanged."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = [
        (SpinModel(j=1, beta=1), ParameterLoop.latitude(math.pi / 3, K=512), 2),
        (BosonModel(beta=2), ParameterLoop.circle(0, 0.5, K=256), 0),
        (UnitaryFamily.random(dim=3, seed=seed), ParameterLoop.circle(0, 0.5, K=256), 1),
    ]
    for model, loop, level in cases:
        states = level_states(model, loop, level)
        base = wilson_loop_phase(states)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=loop.K))
        shuffled = [p * v for p, v in zip(phases, states[:-1])]
        shuffled.append(shuffled[0])
        worst = max(worst, abs(math.remainder(wilson_loop_phase(shuffled) - base, 2 * math.pi)))
    return CheckResult("gauge_invariance", worst < GAUGE_TOL, worst, f"< {GAUGE_TOL:g}")


def check_holonomy_unitarity() -> CheckResult:
    worst = 0.0
    for model, loop in [
        (BosonModel(beta=2), ParameterLoop.circle(0, 0.5, K=2048)),
        (SpinModel(j=1, beta=1), ParameterLoop.equator(K=2048)),
        (SpinModel(j=1, beta=1), ParameterLoop.latitude(math.pi / 3, K=2048)),
    ]:
        worst = max(worst, uhlmann_holonomy(model, loop).unitarity_defect)
    return CheckResult("holonomy_unitarity", worst < UNITARITY_TOL, worst, f"< {UNITARITY_TOL:g}")


def check_anti_hermiticity(h: float = 1e-4) -> CheckResult:
    """Every analytic and numeric connection sample of a holonomy run is anti-Hermitian."""
    worst = 0.0
    for model, loop in [
        (BosonModel(beta=2), ParameterLoop.circle(0, 0.5, K=256)),
        (SpinModel(j=1, beta=1), ParameterLoop.latitude(math.pi / 3, K=256)),
        (UnitaryFamily.random(dim=3, beta=2, seed=1), ParameterLoop.circle(0, 0.5, K=256)),
    ]:
        worst = max(worst, uhlmann_holonomy(model, loop, source="analytic").connection_defect)
        for t in loop.midpoints()[::8]:
            worst = max(worst, anti_hermiticity_defect(numeric_uhlmann_connection(model, loop, t, h)))
    tol = ANTI_HERMITIAN_TOL + h**2
    return CheckResult("anti_hermiticity", worst <= tol, worst, f"<= {tol:g}")


def check_second_order(Ks=(512, 1024, 2048)) -> CheckResult:
    """|theta(K) - theta(2K)| shrinks about fourfold on a spin-1 latitude loop."""
    model = SpinModel(j=1, beta=1)
    loop = ParameterLoop.latitude(math.pi / 3)
    thetas = [uhlmann_phase(model, loop, K) for K in Ks]
    diffs = np.abs(np.diff(thetas))
    ratio = float(diffs[0] / diffs[1])
    lo, hi = RATIO_WINDOW
    return CheckResult("second_order_ratio", lo <= ratio <= hi, ratio, f"in [{lo:g}, {hi:g}]")


def check_ncut_doubling(K: int = 512) -> CheckResult:
    """Doubling N_cut moves the phase and the low-block holonomy by < 1e-8.

    The low block is the lower half of the smaller basis: edge effects of the
    truncated ladder operators leak about one level per unit of chi * radius
    and reach the third quarter of the basis at low temperature.
    """
    loop = ParameterLoop.circle(0, 0.5, K=K)
    worst = 0.0
    for beta in (1.0, 2.0, 4.0):
        small, big = BosonModel(beta=beta, n_cut=48), BosonModel(beta=beta, n_cut=96)
        g1 = uhlmann_holonomy(small, loop).matrix
        g2 = uhlmann_holonomy(big, loop).matrix
        low = small.n_cut // 2
        worst = max(worst, float(np.abs(g1[:low, :low] - g2[:low, :low]).max()))
        worst = max(worst, abs(uhlmann_phase(small, loop) - uhlmann_phase(big, loop)))
    return CheckResult("ncut_doubling", worst < NCUT_TOL, worst, f"< {NCUT_TOL:g}")


CHECKS = (
    check_gauge_invariance,
    check_holonomy_unitarity,
    check_anti_hermiticity,
    check_second_order,
    check_ncut_doubling,
)


def run_selftest(seed: int = 0) -> list[CheckResult]:
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for check in CHECKS:
            t0 = time.perf_counter()
            res = check(seed) if check is check_gauge_invariance else check()
            results.append(CheckResult(res.name, res.passed, res.value, res.threshold, time.perf_counter() - t0))
    return results
