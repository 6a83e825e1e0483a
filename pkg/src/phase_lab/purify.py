"""Purified states on system x ancilla and their discrete Uhlmann transport.

A purification W = sqrt(rho) U is stored as the row-major vector of its
entries, |W> = sum_{n,a} W[n, a] |n>_s |a>_a. With this convention
<W1|W2> = Tr(W1^dag W2) holds exactly and the ancilla partial trace is W W^dag.
In the eigenbasis of rho this is the state sum_n sqrt(l_n) |n> (x) U^T |n*>,
where |n*> is the complex conjugate of |n>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm_frechet

from .errors import NotUnitary, ValidationError
from .holonomy import holonomy_phase, uhlmann_holonomy
from .linops import as_matrix, dagger, max_norm, unitarity_defect
from .loops import ParameterLoop
from .models.base import DensityMatrix, Model
from .models.boson import BosonModel, annihilation

UNITARY_TOL = 1e-10
MIN_TRANSPORT_STEPS = 256


@dataclass(frozen=True, eq=False)
class PurifiedState:
    dim_system: int
    dim_ancilla: int
    amplitudes: np.ndarray  # index n_system * dim_ancilla + n_ancilla

    @property
    def matrix(self) -> np.ndarray:
        """The amplitude W with |W> = vec(W)."""
        return self.amplitudes.reshape(self.dim_system, self.dim_ancilla)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: PurifiedState) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def reduced_system(self) -> np.ndarray:
        """Tr_ancilla |W><W| = W W^dag."""
        W = self.matrix
        return W @ dagger(W)


def purify_matrix(W: np.ndarray) -> PurifiedState:
    W = as_matrix(W)
    return PurifiedState(W.shape[0], W.shape[1], W.reshape(-1).copy())


def purified_state(rho: DensityMatrix, U) -> PurifiedState:
    """|W> for W = sqrt(rho) U."""
    U = as_matrix(U)
    if U.shape != rho.matrix.shape:
        raise ValidationError(f"U has shape {U.shape}, rho has {rho.matrix.shape}")
    if unitarity_defect(U) > UNITARY_TOL:
        raise NotUnitary(f"|U^dag U - 1| = {unitarity_defect(U):.2e}")
    return purify_matrix(rho.sqrt @ U)


@dataclass(frozen=True, eq=False)
class TransportTrace:
    """Diagnostics of a discretely transported purification.

    ``residuals[k]`` is |<W_k|W_{k+1} - W_k>| / dt. ``phase_residuals`` keeps
    only the imaginary part, the piece the weakened condition
    Im <W|dW> = 0 speaks about at finite step size.
    """

    residuals: np.ndarray
    phase_residuals: np.ndarray
    overlap_final: complex
    theta_u: float
    trace_theta_u: float
    partial_trace_defect: float
    K: int
    velocity_scale: float = field(default=0.0)

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())


def transport_purification(
    model: Model, loop: ParameterLoop, K: int | None = None, source: str = "analytic"
) -> TransportTrace:
    """Carry W_k = sqrt(rho_k) U_k around the loop with the holonomy's partial products."""
    if model.grassmann:
        raise ValidationError("purification transport needs a matrix-valued model")
    K = loop.K if K is None else int(K)
    if K < MIN_TRANSPORT_STEPS:
        raise ValidationError(f"transport needs K >= {MIN_TRANSPORT_STEPS}, got {K}")
    loop = loop.with_samples(K)
    hol = uhlmann_holonomy(model, loop, K, "connection_product", source, keep_partials=True)
    unitaries = [np.eye(model.dim, dtype=np.complex128), *hol.partials]
    dt = 1.0 / K
    rhos = [model.density_at(loop, t) for t in loop.times()]
    rhos.append(rhos[0])
    states = [purified_state(r, U) if k == 0 else purify_matrix(r.sqrt @ U)
              for k, (r, U) in enumerate(zip(rhos, unitaries))]
    res = np.empty(K)
    im_res = np.empty(K)
    speed = 0.0
    for k in range(K):
        step = states[k + 1].amplitudes - states[k].amplitudes
        inner = np.vdot(states[k].amplitudes, step)
        res[k] = abs(inner) / dt
        im_res[k] = abs(inner.imag) / dt
        speed = max(speed, float(np.linalg.norm(step)) / dt)
    defect = max(max_norm(s.reduced_system() - r.matrix) for s, r in zip(states, rhos))
    overlap = states[0].overlap(states[-1])
    return TransportTrace(
        residuals=res,
        phase_residuals=im_res,
        overlap_final=overlap,
        theta_u=float(np.angle(overlap)),
        trace_theta_u=holonomy_phase(model, loop, hol.matrix),
        partial_trace_defect=defect,
        K=K,
        velocity_scale=speed,
    )


@dataclass(frozen=True)
class CancellationReport:
    """Per-sample sum_n l_n (<n|D^dag dD/dt|n> + <n|dD/dt D^dag|n>)."""

    weighted: np.ndarray
    per_level: np.ndarray  # worst |system + ancilla| term per level on the low block

    @property
    def max_weighted(self) -> float:
        return float(np.abs(self.weighted).max())


def coherent_cancellation(model: BosonModel, loop: ParameterLoop, K: int = 256) -> CancellationReport:
    """System and ancilla terms of <W|dW/dt> for the displaced oscillator.

    dD/dt is the exact Frechet derivative of exp along the generator's velocity.
    """
    if not isinstance(model, BosonModel):
        raise ValidationError("coherent_cancellation is defined for the boson model")
    loop = loop.with_samples(K)
    model.check_loop(loop)
    a = annihilation(model.n_cut)
    ad = dagger(a)
    lam = model.weights()
    low = model.n_cut - model.n_cut // 4
    weighted = np.empty(K, dtype=np.complex128)
    worst = np.zeros(low)
    for k, t in enumerate(loop.midpoints()):
        z, zd = loop.point(t), loop.velocity(t)
        D, Dd = expm_frechet(z * ad - np.conj(z) * a, zd * ad - np.conj(zd) * a)
        terms = np.diag(dagger(D) @ Dd) + np.diag(Dd @ dagger(D))
        weighted[k] = np.dot(lam, terms)
        worst = np.maximum(worst, np.abs(terms[:low]))
    return CancellationReport(weighted=weighted, per_level=worst)
