"""Fermionic oscillator translated along xi(t) = zeta z(t).

The two-level Fock space is ordered (|0>, |1>) with b = [[0, 1], [0, 0]]. An
odd scalar s (a multiple of zeta or zetabar) must anticommute with b and b^dag,
so on the Fock space it acts as s P with the parity P = diag(1, -1). With that
grading every operator in the calculus is a 2x2 ``GrassmannMatrix`` and
products keep the order of the Grassmann factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import IncompatibleLoop, ValidationError
from ..grassmann import GrassmannElement, GrassmannMatrix, g_arg_even, gm_exp, gm_mul
from ..loops import ParameterLoop
from ..phases import wrap_phase
from .base import Model, PhaseClosedForm, boltzmann_weights
from .boson import coupling_strength

B = np.array([[0, 1], [0, 0]], dtype=np.complex128)
BD = B.conj().T
PARITY = np.diag([1.0, -1.0]).astype(np.complex128)
EYE2 = np.eye(2, dtype=np.complex128)


def odd_scalar(z: complex) -> GrassmannMatrix:
    """xi = zeta z as an operator."""
    return GrassmannMatrix(np.zeros((2, 2)), cz=z * PARITY)


def odd_scalar_bar(z: complex) -> GrassmannMatrix:
    """xibar = zetabar zbar as an operator."""
    return GrassmannMatrix(np.zeros((2, 2)), czb=np.conj(z) * PARITY)


def fermion_displacement(z: complex) -> GrassmannMatrix:
    """D(xi) = exp(b^dag xi - xibar b) by its terminating series."""
    gen = gm_mul(GrassmannMatrix(BD), odd_scalar(z)) - gm_mul(odd_scalar_bar(z), GrassmannMatrix(B))
    return gm_exp(gen)


def shifted_number(z: complex) -> GrassmannMatrix:
    """M = (b^dag - xibar)(b - xi), the translated occupation projector."""
    left = GrassmannMatrix(BD) - odd_scalar_bar(z)
    right = GrassmannMatrix(B) - odd_scalar(z)
    return gm_mul(left, right)


@dataclass(frozen=True)
class FermionModel(Model):
    omega: float = 1.0
    beta: float = 1.0

    kind = "fermion"
    grassmann = True

    def __post_init__(self):
        if self.omega <= 0 or self.beta < 0:
            raise ValidationError("fermion model needs omega > 0 and beta >= 0")

    @property
    def dim(self) -> int:
        return 2

    @property
    def chi(self) -> float:
        return coupling_strength(self.beta * self.omega)

    def reference_energies(self) -> np.ndarray:
        return self.omega * np.array([-0.5, 0.5])

    def weights(self) -> np.ndarray:
        return boltzmann_weights(self.reference_energies(), self.beta)

    def check_loop(self, loop: ParameterLoop) -> None:
        self._require(loop, plane=True)

    def density_at(self, loop: ParameterLoop, t: float) -> GrassmannMatrix:
        """rho(xi) = 1/(1 + e^{-x}) - tanh(x/2) M with x = beta omega."""
        self.check_loop(loop)
        lam0, lam1 = self.weights()
        return GrassmannMatrix(lam0 * EYE2) - shifted_number(loop.point(t)).scale(lam0 - lam1)

    def sqrt_density_at(self, loop: ParameterLoop, t: float) -> GrassmannMatrix:
        """M is a projector, so sqrt(rho) = sqrt(l0) (1 - M) + sqrt(l1) M."""
        self.check_loop(loop)
        s0, s1 = np.sqrt(self.weights())
        return GrassmannMatrix(s0 * EYE2) + shifted_number(loop.point(t)).scale(s1 - s0)

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float) -> GrassmannMatrix:
        """-chi (b^dag xidot - xibardot b + xibardot xi - xibar xidot)."""
        self.check_loop(loop)
        z, zd = loop.point(t), loop.velocity(t)
        xi, xib = odd_scalar(z), odd_scalar_bar(z)
        xid, xibd = odd_scalar(zd), odd_scalar_bar(zd)
        b, bd = GrassmannMatrix(B), GrassmannMatrix(BD)
        gen = gm_mul(bd, xid) - gm_mul(xibd, b) + gm_mul(xibd, xi) - gm_mul(xib, xid)
        return gen.scale(-self.chi)

    def numeric_uhlmann_connection(self, loop: ParameterLoop, t: float, h: float = 1e-4) -> GrassmannMatrix:
        """-[d sqrt(rho), sqrt(rho)] with a central difference; l0 + l1 = 1 here."""
        S = self.sqrt_density_at(loop, t)
        dS = (self.sqrt_density_at(loop, t + h) - self.sqrt_density_at(loop, t - h)).scale(1 / (2 * h))
        return -(gm_mul(dS, S) - gm_mul(S, dS))

    def berry_phase_wilson(self, loop: ParameterLoop, level: int = 0, K: int | None = None) -> GrassmannElement:
        """-arg of the product of <n, xi_k | n, xi_{k+1}>, Grassmann valued."""
        self.check_loop(loop)
        if level not in (0, 1):
            raise IndexError(f"level {level} outside the two-level Fock space")
        loop = loop if K is None else loop.with_samples(K)
        z = loop.samples()
        prod = GrassmannElement(1)
        for k in range(loop.K):
            # D(xi)^dag = D(-xi)
            overlap = gm_mul(fermion_displacement(-z[k]), fermion_displacement(z[k + 1]))
            prod = prod * overlap[level, level]
        arg = g_arg_even(prod)
        return GrassmannElement(wrap_phase(-arg.c0.real), 0, 0, -arg.czz)

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        if not loop.is_plane:
            raise IncompatibleLoop("fermion model needs a plane loop")
        area = loop.signed_area
        factor = math.tanh(self.beta * self.omega / 2) ** 2
        return PhaseClosedForm(
            theta_u=GrassmannElement(czz=-2 * factor * area),
            theta_b=GrassmannElement(czz=-2 * area),
            level=level,
        )

    def closed_form_holonomy(self, loop: ParameterLoop) -> GrassmannMatrix:
        """(1 - 2i (1 - eta^2) S zetabar zeta) times the identity."""
        soul = -2j * math.tanh(self.beta * self.omega / 2) ** 2 * loop.signed_area
        return GrassmannMatrix(EYE2, czz=soul * EYE2)
