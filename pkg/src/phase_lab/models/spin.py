"""Spin-j paramagnet with the field direction moved on the unit sphere.

Basis |j m> ordered m = -j, ..., +j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import UnsupportedLoopForClosedForm, ValidationError
from ..linops import expm
from ..loops import ParameterLoop
from ..phases import wrap_phase
from .base import FramedModel, PhaseClosedForm, boltzmann_weights
from .boson import coupling_strength


def _two_j(j: float) -> int:
    tj = round(2 * j)
    if tj < 1 or abs(tj - 2 * j) > 1e-12:
        raise ValidationError(f"j must be a positive multiple of 1/2, got {j}")
    return tj


def m_values(j: float) -> np.ndarray:
    tj = _two_j(j)
    return (np.arange(tj + 1) - tj / 2).astype(float)


@lru_cache(maxsize=16)
def spin_matrices(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Jx, Jy, Jz) from the ladder elements sqrt(j(j+1) - m(m+1))."""
    m = m_values(j)
    up = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.diag(up, k=-1).astype(np.complex128)  # <m+1|J+|m>
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(np.complex128)
    for M in (jx, jy, jz):
        M.setflags(write=False)
    return jx, jy, jz


def wigner_small_d(j: float, angle: float) -> np.ndarray:
    """d^j_{m'm}(angle) = <j m'| exp(-i angle J_y) |j m> from Wigner's sum formula."""
    tj = _two_j(j)
    ms = m_values(j)
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    d = np.zeros((tj + 1, tj + 1))
    fact = math.factorial
    for a, mp in enumerate(ms):
        for b, m in enumerate(ms):
            jpm, jmm = round(j + m), round(j - m)
            jpmp, jmmp = round(j + mp), round(j - mp)
            pref = math.sqrt(fact(jpm) * fact(jmm) * fact(jpmp) * fact(jmmp))
            diff = round(mp - m)
            total = 0.0
            for k in range(max(0, -diff), min(jpm, jmmp) + 1):
                den = fact(jpm - k) * fact(k) * fact(jmmp - k) * fact(diff + k)
                total += (
                    (-1) ** (diff + k)
                    * c ** (tj - 2 * k - diff)
                    * s ** (2 * k + diff)
                    / den
                )
            d[a, b] = pref * total
    return d


@dataclass(frozen=True)
class SpinModel(FramedModel):
    j: float = 1.0
    omega0: float = 1.0
    beta: float = 1.0

    kind = "spin"

    def __post_init__(self):
        _two_j(self.j)
        if self.omega0 <= 0 or self.beta < 0:
            raise ValidationError("spin model needs omega0 > 0 and beta >= 0")

    @property
    def chi(self) -> float:
        return coupling_strength(self.beta * self.omega0)

    def level_of(self, m: float) -> int:
        """Energy-ordered level index of the state with magnetic number m."""
        return int(round(m + self.j))

    def reference_energies(self) -> np.ndarray:
        return self.omega0 * m_values(self.j)

    def check_loop(self, loop: ParameterLoop) -> None:
        self._require(loop, plane=False)

    def rotation(self, theta: float, phi: float) -> np.ndarray:
        """V = exp(-i phi Jz) exp(-i theta Jy) exp(i phi Jz)."""
        _, jy, _ = spin_matrices(self.j)
        ph = np.exp(-1j * phi * m_values(self.j))
        return (ph[:, None] * expm(-1j * theta * jy)) * ph.conj()[None, :]

    def frame(self, loop: ParameterLoop, t: float) -> np.ndarray:
        theta, phi = loop.point(t)
        return self.rotation(theta, phi)

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float) -> np.ndarray:
        self._require(loop, plane=False)
        jx, jy, jz = spin_matrices(self.j)
        theta, phi = loop.point(t)
        thd, phd = loop.velocity(t)
        chi = self.chi
        a_theta = -1j * chi * (jx * math.sin(phi) - jy * math.cos(phi))
        a_phi = -1j * chi * (
            (jx * math.cos(phi) + jy * math.sin(phi)) * math.cos(theta) - jz * math.sin(theta)
        ) * math.sin(theta)
        return a_theta * thd + a_phi * phd

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        self._require(loop, plane=False)
        m = m_values(self.j)[level]
        theta_b = wrap_phase(-m * loop.solid_angle)
        theta_u = None
        if loop.is_great_circle:
            w = boltzmann_weights(self.reference_energies(), self.beta)
            d = wigner_small_d(self.j, 2 * math.pi * loop.winding * self.chi)
            theta_u = wrap_phase(cmath.phase(complex(np.dot(w, np.diag(d)))))
        return PhaseClosedForm(theta_u=theta_u, theta_b=theta_b, level=level)

    def closed_form_uhlmann(self, loop: ParameterLoop) -> float:
        theta_u = self.closed_form_phase(loop).theta_u
        if theta_u is None:
            raise UnsupportedLoopForClosedForm("closed-form Uhlmann phase needs a great circle")
        return theta_u


def spin1_equator_argument(beta_omega0: float, winding: int = 1) -> float:
    """Real number whose argument is the spin-1 great-circle Uhlmann phase."""
    eta = 1 / math.cosh(beta_omega0 / 2)
    c = math.cos(2 * math.pi * winding * eta)
    return (math.cosh(beta_omega0) * (1 + c) + c) / (1 + 2 * math.cosh(beta_omega0))
