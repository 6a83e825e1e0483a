"""Thermal states carried around by a one-parameter unitary group.

rho(t) = D(t) rho_0 D(t)^dag with D(t) = exp(t G) and exp(G) = 1, so the
energy levels |n(t)> = D(t)|n(0)> never cross and the loop closes at t = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from ..errors import DegenerateLevel, ValidationError
from ..linops import anti_hermiticity_defect, as_matrix, dagger, degenerate_pairs, expm, hermitian_eig, max_norm
from ..loops import ParameterLoop
from ..phases import wrap_phase
from .base import FramedModel, PhaseClosedForm

CYCLICITY_TOL = 1e-10


def uhlmann_coefficients(weights: np.ndarray) -> np.ndarray:
    """(sqrt(l_n) - sqrt(l_m))^2 / (l_n + l_m), zero for (near-)degenerate pairs."""
    s = np.sqrt(weights)
    total = weights[:, None] + weights[None, :]
    c = (s[:, None] - s[None, :]) ** 2 / total
    c[degenerate_pairs(weights)] = 0.0
    return c


@dataclass(frozen=True, eq=False)
class UnitaryFamily(FramedModel):
    generator: np.ndarray
    h0: np.ndarray
    beta: float = 1.0

    kind = "unitary_family"

    def __post_init__(self):
        G = as_matrix(self.generator)
        H = as_matrix(self.h0)
        if G.shape != H.shape:
            raise ValidationError("generator and h0 must have the same shape")
        if anti_hermiticity_defect(G) > 1e-10 * max(1.0, max_norm(G)):
            raise ValidationError("generator must be anti-Hermitian")
        if max_norm(expm(G) - np.eye(len(G))) > CYCLICITY_TOL:
            raise ValidationError("exp(G) != 1: the loop does not close")
        object.__setattr__(self, "generator", G)
        object.__setattr__(self, "h0", H)
        spec = hermitian_eig(H)
        if len(spec.eigenvalues) > 1 and np.min(np.diff(spec.eigenvalues)) < 1e-8:
            raise DegenerateLevel("h0 must have a non-degenerate spectrum")
        object.__setattr__(self, "_spec", spec)

    @classmethod
    def random(cls, dim=2, gap=1.0, beta=1.0, seed=0, windings=None) -> UnitaryFamily:
        """Evenly spaced levels; G = 2 pi i Q diag(k) Q^dag with integer k, not all equal."""
        rng = np.random.default_rng(seed)
        Q = unitary_group.rvs(dim, random_state=rng)
        if windings is None:
            windings = rng.integers(-1, 2, size=dim)
            windings[0] = 1
            if np.all(windings == 1):
                # equal windings make G a multiple of 1 and the loop constant
                windings[-1] = 0
        G = 2j * np.pi * (Q * np.asarray(windings, dtype=float)) @ dagger(Q)
        h0 = np.diag(gap * np.arange(dim)).astype(np.complex128)
        return cls(generator=G, h0=h0, beta=beta)

    def reference_energies(self) -> np.ndarray:
        return self._spec.eigenvalues

    def reference_vectors(self) -> np.ndarray:
        return self._spec.eigenvectors

    def frame(self, loop: ParameterLoop, t: float) -> np.ndarray:
        return expm(t * self.generator)

    def _level_generator(self) -> np.ndarray:
        """<n0| G |m0> in the reference eigenbasis."""
        V0 = self.reference_vectors()
        return dagger(V0) @ self.generator @ V0

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float) -> np.ndarray:
        """Eigenbasis form of A_U with the exact derivative d|m>/dt = G|m>."""
        V = self.frame(loop, t) @ self.reference_vectors()
        c = uhlmann_coefficients(self.weights())
        return -V @ (c * self._level_generator()) @ dagger(V)

    def zero_temperature_connection(self, loop: ParameterLoop, t: float) -> np.ndarray:
        """Berry connection matrix minus dD D^-1, the beta -> infinity limit of A_U."""
        V = self.frame(loop, t) @ self.reference_vectors()
        berry = np.diag(np.diag(self._level_generator()))
        return V @ berry @ dagger(V) - self.generator

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        """Berry phase only: -Im <n0|G|n0>; the Uhlmann phase has no closed form here."""
        return PhaseClosedForm(theta_b=wrap_phase(-self._level_generator()[level, level].imag), level=level)
