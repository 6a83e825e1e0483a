"""Thermal harmonic oscillator displaced around a loop in the complex plane."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import TruncationTooSmall, TruncationWarning, ValidationError
from ..linops import expm
from ..loops import ParameterLoop
from ..phases import wrap_phase
from .base import FramedModel, PhaseClosedForm

THERMAL_TAIL_TOL = 1e-14


@lru_cache(maxsize=32)
def annihilation(n_cut: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, n_cut, dtype=float)), k=1).astype(np.complex128)
    a.setflags(write=False)
    return a


def occupancy_margin(center: complex, radius: float) -> float:
    """Smallest admissible Fock cutoff for a loop inside the disc (center, radius)."""
    c = abs(center)
    return c**2 + 6 * radius * (c + radius) + 10


def boson_displacement(z: complex, n_cut: int) -> np.ndarray:
    """exp(z a^dag - conj(z) a) on the truncated Fock space."""
    if n_cut < occupancy_margin(z, 0.0):
        raise TruncationTooSmall(f"N_cut={n_cut} too small for |z|={abs(z):.3g}")
    a = annihilation(n_cut)
    return expm(z * a.conj().T - np.conj(z) * a)


def coupling_strength(beta_omega: float) -> float:
    """chi = 1 - sech(beta omega / 2)."""
    return 1.0 - 1.0 / math.cosh(beta_omega / 2) if beta_omega < 1400 else 1.0


@dataclass(frozen=True)
class BosonModel(FramedModel):
    omega: float = 1.0
    n_cut: int = 48
    beta: float = 1.0

    kind = "boson"

    def __post_init__(self):
        if self.omega <= 0 or self.beta < 0 or self.n_cut < 2:
            raise ValidationError("boson model needs omega > 0, beta >= 0, n_cut >= 2")

    @property
    def chi(self) -> float:
        return coupling_strength(self.beta * self.omega)

    @property
    def thermal_tail(self) -> float:
        """Boltzmann mass beyond the cutoff, exp(-beta omega N_cut)."""
        return math.exp(-self.beta * self.omega * self.n_cut)

    def reference_energies(self) -> np.ndarray:
        return self.omega * (np.arange(self.n_cut) + 0.5)

    def check_loop(self, loop: ParameterLoop) -> None:
        self._require(loop, plane=True)
        c, r = loop.extent
        need = occupancy_margin(c, r)
        if self.n_cut < need:
            raise TruncationTooSmall(f"N_cut={self.n_cut} below occupancy margin {need:.1f}")
        if self.thermal_tail > THERMAL_TAIL_TOL:
            warnings.warn(
                f"thermal tail exp(-beta omega N_cut) = {self.thermal_tail:.2e} exceeds "
                f"{THERMAL_TAIL_TOL:g}; weights are renormalised on the truncated space",
                TruncationWarning,
                stacklevel=3,
            )

    def frame(self, loop: ParameterLoop, t: float) -> np.ndarray:
        a = annihilation(self.n_cut)
        z = loop.point(t)
        return expm(z * a.conj().T - np.conj(z) * a)

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float) -> np.ndarray:
        """-chi [(a^dag - zbar) zdot - (a - z) zbardot], per unit t."""
        self._require(loop, plane=True)
        a = annihilation(self.n_cut)
        z, zd = loop.point(t), loop.velocity(t)
        one = np.eye(self.n_cut)
        gen = (a.conj().T - np.conj(z) * one) * zd - (a - z * one) * np.conj(zd)
        return -self.chi * gen

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        self._require(loop, plane=True)
        area = loop.signed_area
        # 1 - sech^2 = tanh^2 keeps precision at small beta
        factor = math.tanh(self.beta * self.omega / 2) ** 2
        return PhaseClosedForm(
            theta_u=wrap_phase(-2 * factor * area),
            theta_b=wrap_phase(-2 * area),
            level=level,
        )
