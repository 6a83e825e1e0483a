"""Berry phases, Uhlmann connections, holonomies and the low-temperature study.

Conventions
-----------
* Berry phase of level n: theta_n = -arg prod_k <n(t_k)|n(t_{k+1})>, the
  discrete form of i \\oint <n|d|n>.
* Uhlmann holonomy: g = prod_k exp(-A_U(t_{k+1/2}) dt) with the latest factor
  leftmost, and theta_U = arg Tr[rho(0) g].
* Scalar phases live in (-pi, pi]; errors use the circle metric.
"""

from __future__ import annotations

import cmath
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLevel, LevelCrossing, RankDeficient, StepTooSmall, ValidationError, ZeroTrace
from .grassmann import GrassmannElement, GrassmannMatrix, g_arg_even, gm_exp, gm_mul, gm_trace
from .linops import (
    DEGENERACY_TOL,
    anti_hermiticity_defect,
    dagger,
    degenerate_pairs,
    expm,
    hermitian_eig,
    max_norm,
    polar_unitary,
    sqrt_psd,
    unitarity_defect,
)
from .loops import ParameterLoop
from .models.base import Model
from .phases import circle_distance, wrap_phase

ESTIMATORS = ("connection_product", "polar_isometry")
SOURCES = ("analytic", "numeric")
GAP_TOL = 1e-8
TRACE_FLOOR = 1e-12
MIN_HOLONOMY_STEPS = 64
H_MIN, H_MAX = 1e-7, 1e-2
CANCELLATION_TOL = 1e3 * np.finfo(float).eps
# target absolute noise of a numeric connection entry; sets which level pairs
# a central difference of sqrt(rho) can resolve at all
RESOLUTION_TOL = 1e-6


def worker_count(jobs: int) -> int:
    """Pool size, capped by PHASE_LAB_THREADS when set."""
    cap = os.environ.get("PHASE_LAB_THREADS")
    n = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n, jobs))


# Berry phase ------------------------------------------------------------------
def wilson_loop_phase(states) -> float:
    """-arg prod <psi_k|psi_{k+1}> over a closed list of states.

    The last state must be the first one again (same vector, same phase);
    otherwise the product is not gauge invariant.
    """
    prod = 1.0 + 0j
    for a, b in zip(states[:-1], states[1:]):
        prod *= np.vdot(a, b)
        # keep the running product O(1); only its argument matters
        prod /= abs(prod) or 1.0
    return wrap_phase(-cmath.phase(prod))


def level_states(model: Model, loop: ParameterLoop, level: int = 0) -> list[np.ndarray]:
    """Eigenvectors of ``level`` at t_0..t_K with the gap checked along the way."""
    model.check_loop(loop)
    states = []
    for k, t in enumerate(loop.times()):
        v, gap = model.level_state(loop, t, level)
        if gap <= DEGENERACY_TOL and k == 0:
            raise DegenerateLevel(f"level {level} is degenerate at t=0")
        if gap <= GAP_TOL:
            raise LevelCrossing(f"gap {gap:.2e} at t={t:.6f} for level {level}")
        states.append(v)
    states.append(states[0])
    return states


def berry_phase_wilson(model: Model, loop: ParameterLoop, level: int = 0):
    """Discrete Berry phase of an energy level (0 = ground).

    Grassmann models return a ``GrassmannElement``.
    """
    if model.grassmann:
        return model.berry_phase_wilson(loop, level)
    return wilson_loop_phase(level_states(model, loop, level))


# Uhlmann connection -----------------------------------------------------------
def numeric_uhlmann_connection(model: Model, loop: ParameterLoop, t: float, h: float = 1e-4):
    """A_U(d/dt) from a central difference of sqrt(rho) in the eigenbasis of rho(t).

    <n|[dS, S]|m> = X_nm (sqrt(l_m) - sqrt(l_n)) with X = V^dag dS V, so
    A_nm = -X_nm (sqrt(l_m) - sqrt(l_n)) / (l_n + l_m). Pairs that are
    degenerate, or whose weights are too small for the difference quotient to
    resolve, get a zero coefficient.
    """
    if h < H_MIN:
        raise StepTooSmall(f"h={h:g} below {H_MIN:g}")
    if h > H_MAX:
        raise ValidationError(f"h={h:g} above {H_MAX:g}")
    if model.grassmann:
        return model.numeric_uhlmann_connection(loop, t, h)
    rho = model.density_at(loop, t)
    lam = rho.eigenvalues
    if not lam.min() > 0:
        raise RankDeficient("numeric connection needs a full-rank density matrix")
    V = rho.spectrum.eigenvectors
    pair_sum = lam[:, None] + lam[None, :]
    # entries carry noise ~ eps / (h sqrt(l_n + l_m)); pairs below the floor are dropped
    floor = (np.finfo(float).eps / (h * RESOLUTION_TOL)) ** 2
    live = ~degenerate_pairs(lam) & (pair_sum >= floor)
    if not live.any():
        return np.zeros((rho.dim, rho.dim), dtype=np.complex128)
    dS = sqrt_psd(model.density_at(loop, t + h).matrix) - sqrt_psd(model.density_at(loop, t - h).matrix)
    if max_norm(dS) < CANCELLATION_TOL:
        raise StepTooSmall(f"|delta sqrt(rho)| = {max_norm(dS):.2e}: difference lost to rounding")
    X = dagger(V) @ (dS / (2 * h)) @ V
    s = np.sqrt(lam)
    coef = np.where(live, (s[None, :] - s[:, None]) / pair_sum, 0.0)
    return -V @ (X * coef) @ dagger(V)


def connection_sampler(model: Model, source: str = "analytic", h: float = 1e-4):
    """t -> A_U(d/dt) from the chosen source."""
    if source == "analytic":
        return lambda loop, t: model.analytic_uhlmann_connection(loop, t)
    if source == "numeric":
        return lambda loop, t: numeric_uhlmann_connection(model, loop, t, h)
    raise ValidationError(f"unknown connection source {source!r}; use one of {SOURCES}")


def _anti_hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A - dagger(A)) / 2


# Uhlmann holonomy -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Holonomy:
    matrix: object
    K: int
    estimator: str
    unitarity_defect: float
    source: str | None = None
    connection_defect: float = 0.0  # max |A + A^dag| over the connection samples
    partials: tuple = field(default=(), repr=False)

    @property
    def is_grassmann(self) -> bool:
        return isinstance(self.matrix, GrassmannMatrix)


def _grassmann_unitarity(g: GrassmannMatrix) -> float:
    return (gm_mul(g.dagger(), g) - GrassmannMatrix.identity(g.dim)).max_abs()


def uhlmann_holonomy(
    model: Model,
    loop: ParameterLoop,
    K: int | None = None,
    estimator: str = "connection_product",
    source: str = "analytic",
    h: float = 1e-4,
    keep_partials: bool = False,
) -> Holonomy:
    """Discrete path-ordered Uhlmann holonomy around ``loop``.

    ``connection_product`` multiplies exp(-A_U dt) at the step midpoints.
    ``polar_isometry`` multiplies the unitary polar factors of
    sqrt(rho_{k+1}) sqrt(rho_k) and needs no connection at all.
    ``keep_partials`` stores the running products after each step.
    """
    K = loop.K if K is None else int(K)
    if K < MIN_HOLONOMY_STEPS:
        raise ValidationError(f"holonomy needs K >= {MIN_HOLONOMY_STEPS}, got {K}")
    if estimator not in ESTIMATORS:
        raise ValidationError(f"unknown estimator {estimator!r}; use one of {ESTIMATORS}")
    loop = loop.with_samples(K)
    model.check_loop(loop)
    partials = []
    if estimator == "connection_product":
        sample = connection_sampler(model, source, h)
        dt = 1.0 / K
        if model.grassmann:
            g = GrassmannMatrix.identity(model.dim)
            for t in loop.midpoints():
                g = gm_mul(gm_exp(sample(loop, t).scale(-dt)), g)
                if keep_partials:
                    partials.append(g)
            return Holonomy(g, K, estimator, _grassmann_unitarity(g), source, 0.0, tuple(partials))
        g = np.eye(model.dim, dtype=np.complex128)
        worst = 0.0
        for t in loop.midpoints():
            A = sample(loop, t)
            worst = max(worst, anti_hermiticity_defect(A))
            g = expm(-dt * _anti_hermitian_part(A)) @ g
            if keep_partials:
                partials.append(g)
        return Holonomy(g, K, estimator, unitarity_defect(g), source, worst, tuple(partials))
    if model.grassmann:
        raise ValidationError("polar_isometry needs matrix-valued density matrices")
    roots = [model.density_at(loop, t).sqrt for t in loop.times()]
    roots.append(roots[0])
    g = np.eye(model.dim, dtype=np.complex128)
    for k in range(K):
        g = polar_unitary(roots[k + 1] @ roots[k]) @ g
        if keep_partials:
            partials.append(g)
    return Holonomy(g, K, estimator, unitarity_defect(g), None, 0.0, tuple(partials))


def holonomy_phase(model: Model, loop: ParameterLoop, g):
    """arg Tr[rho(0) g], taken after the full product."""
    if model.grassmann:
        tr = gm_trace(gm_mul(model.density_at(loop, 0.0), g))
        if abs(tr.c0) < TRACE_FLOOR:
            raise ZeroTrace(f"|body of Tr[rho(0) g]| = {abs(tr.c0):.2e}; phase undefined")
        return g_arg_even(tr)
    tr = complex(np.trace(model.density_at(loop, 0.0).matrix @ g))
    if abs(tr) < TRACE_FLOOR:
        raise ZeroTrace(f"|Tr[rho(0) g]| = {abs(tr):.2e}; phase undefined")
    return wrap_phase(cmath.phase(tr))


def uhlmann_phase(
    model: Model,
    loop: ParameterLoop,
    K: int | None = None,
    estimator: str = "connection_product",
    source: str = "analytic",
):
    return holonomy_phase(model, loop, uhlmann_holonomy(model, loop, K, estimator, source).matrix)


# Reports ------------------------------------------------------------------------
@dataclass(frozen=True)
class PhaseReport:
    """One row of a sweep. Grassmann models store zetabar-zeta coefficients."""

    beta: float
    theta_u_numeric: float
    theta_u_closed: float | None
    theta_b_numeric: float | None
    theta_b_closed: float | None
    err_closed: float | None
    err_correspondence: float | None
    K: int
    n_cut: int | None
    estimator: str
    unitarity_defect: float
    model: str = ""
    excluded: bool = False
    premise_defect: float | None = None


def _scalar(x):
    """Phases as floats; Grassmann phases reduce to their soul coefficient."""
    if x is None:
        return None
    if isinstance(x, GrassmannElement):
        return float(x.czz.real)
    return float(x)


def phase_report(
    model: Model,
    loop: ParameterLoop,
    K: int | None = None,
    estimator: str = "connection_product",
    source: str = "analytic",
    level: int = 0,
) -> PhaseReport:
    K = loop.K if K is None else K
    hol = uhlmann_holonomy(model, loop, K, estimator, source)
    theta_u = _scalar(holonomy_phase(model, loop, hol.matrix))
    theta_b = _scalar(berry_phase_wilson(model, loop.with_samples(K), level))
    try:
        closed = model.closed_form_phase(loop, level)
        tu_c, tb_c = _scalar(closed.theta_u), _scalar(closed.theta_b)
    except ValidationError:
        tu_c = tb_c = None
    # souls of Grassmann phases are plain coefficients, not angles
    dist = (lambda a, b: abs(a - b)) if model.grassmann else circle_distance
    err_closed = None if tu_c is None else dist(theta_u, tu_c)
    err_corr = None if theta_b is None else dist(theta_u, theta_b)
    return PhaseReport(
        beta=float(model.beta),
        theta_u_numeric=theta_u,
        theta_u_closed=tu_c,
        theta_b_numeric=theta_b,
        theta_b_closed=tb_c,
        err_closed=err_closed,
        err_correspondence=err_corr,
        K=K,
        n_cut=getattr(model, "n_cut", None),
        estimator=estimator,
        unitarity_defect=float(hol.unitarity_defect),
        model=model.kind,
        excluded=bool(getattr(model, "excluded", False)),
    )


# Zero-temperature correspondence --------------------------------------------------
def zero_temperature_premise(model: Model, loop: ParameterLoop, samples: int = 64) -> float:
    """max_t max_nm |A_U - (A_B_hat - dD D^-1)| for a unitary family."""
    if not hasattr(model, "zero_temperature_connection"):
        raise ValidationError(f"{model.kind} model has no zero-temperature connection")
    ts = np.arange(samples) / samples
    return max(
        max_norm(model.analytic_uhlmann_connection(loop, t) - model.zero_temperature_connection(loop, t))
        for t in ts
    )


def correspondence_check(
    model: Model,
    loop: ParameterLoop,
    betas,
    K: int | None = None,
    estimator: str = "connection_product",
    source: str = "analytic",
    workers: int | None = None,
) -> list[PhaseReport]:
    """Phase reports along an ascending beta schedule, in schedule order."""
    betas = [float(b) for b in betas]
    if not betas:
        raise ValidationError("empty beta schedule")
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValidationError("beta schedule must be strictly ascending")
    n = worker_count(len(betas)) if workers is None else max(1, workers)

    def job(beta):
        return phase_report(model.with_beta(beta), loop, K, estimator, source)

    if n == 1:
        reports = [job(b) for b in betas]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            reports = list(pool.map(job, betas))
    if hasattr(model, "zero_temperature_connection"):
        last = reports[-1]
        defect = zero_temperature_premise(model.with_beta(betas[-1]), loop)
        reports[-1] = PhaseReport(**{**last.__dict__, "premise_defect": defect})
    return reports


def _aligned_eigenvectors(model: Model, loop: ParameterLoop, t: float, ref: np.ndarray | None):
    V = hermitian_eig(model.hamiltonian_at(loop, t)).eigenvectors
    if ref is None:
        return V
    ph = np.einsum("in,in->n", ref.conj(), V)
    return V * (ph.conj() / np.abs(ph))


def berry_offdiagonal_connection(model: Model, loop: ParameterLoop, t: float, h: float = 1e-5) -> np.ndarray:
    """-sum_{n != m} |n><n|d|m><m| with finite-difference eigenvectors.

    The eigenvectors at t +- h are phase-aligned to those at t before
    differencing, so no gauge jump enters the derivative.
    """
    V = _aligned_eigenvectors(model, loop, t, None)
    Vp = _aligned_eigenvectors(model, loop, t + h, V)
    Vm = _aligned_eigenvectors(model, loop, t - h, V)
    M = dagger(V) @ ((Vp - Vm) / (2 * h))
    np.fill_diagonal(M, 0.0)
    return -V @ M @ dagger(V)


def max_connection_defect(model: Model, loop: ParameterLoop, source: str = "analytic", samples: int = 64) -> float:
    """max |A + A^dag| over evenly spaced connection samples."""
    sample = connection_sampler(model, source)
    if model.grassmann:
        return max((sample(loop, t) + sample(loop, t).dagger()).max_abs() for t in np.arange(samples) / samples)
    return max(anti_hermiticity_defect(sample(loop, t)) for t in np.arange(samples) / samples)


__all__ = [
    "ESTIMATORS",
    "Holonomy",
    "PhaseReport",
    "berry_offdiagonal_connection",
    "berry_phase_wilson",
    "connection_sampler",
    "correspondence_check",
    "holonomy_phase",
    "level_states",
    "max_connection_defect",
    "numeric_uhlmann_connection",
    "phase_report",
    "uhlmann_holonomy",
    "uhlmann_phase",
    "wilson_loop_phase",
    "worker_count",
    "zero_temperature_premise",
]
