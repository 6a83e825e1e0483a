"""A single pure state seen as a one-dimensional Hilbert space.

rho(t) = |psi(t)><psi(t)| is the 1x1 matrix [1] in the ray's own basis, so
the Uhlmann connection and phase vanish identically. The ray itself can still
carry a Berry phase, which is taken from the ground level of a parent model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..loops import ParameterLoop
from .base import DensityMatrix, Model, PhaseClosedForm
from .spin import SpinModel


@dataclass(frozen=True)
class OneDimModel(Model):
    parent: Model = field(default_factory=lambda: SpinModel(j=0.5))
    level: int = 0
    beta: float = 1.0

    kind = "one_dim"
    excluded = True  # Uhlmann phase does not reduce to the Berry phase here

    @property
    def dim(self) -> int:
        return 1

    def check_loop(self, loop: ParameterLoop) -> None:
        self.parent.check_loop(loop)

    def density_at(self, loop: ParameterLoop, t: float) -> DensityMatrix:
        self.check_loop(loop)
        return DensityMatrix(np.ones((1, 1), dtype=np.complex128))

    def hamiltonian_at(self, loop: ParameterLoop, t: float) -> np.ndarray:
        return np.zeros((1, 1), dtype=np.complex128)

    def level_state(self, loop: ParameterLoop, t: float, level: int) -> tuple[np.ndarray, float]:
        """The parent's eigenvector |R(t)>; the only state this model has."""
        if level != 0:
            raise IndexError("one_dim model has a single level")
        return self.parent.level_state(loop, t, self.level)

    def pure_projector(self, loop: ParameterLoop, t: float) -> np.ndarray:
        """|R(t)><R(t)| embedded in the parent's Hilbert space."""
        v, _ = self.level_state(loop, t, 0)
        return np.outer(v, v.conj())

    def pure_commutator_element(self, loop: ParameterLoop, t: float, h: float = 1e-5) -> complex:
        """<R| [d sqrt(rho), sqrt(rho)] |R> for rho = |R><R|; sqrt(rho) = rho."""
        P = self.pure_projector(loop, t)
        dP = (self.pure_projector(loop, t + h) - self.pure_projector(loop, t - h)) / (2 * h)
        v, _ = self.level_state(loop, t, 0)
        return complex(v.conj() @ (dP @ P - P @ dP) @ v)

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float) -> np.ndarray:
        return np.zeros((1, 1), dtype=np.complex128)

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        return PhaseClosedForm(theta_u=0.0, theta_b=None, level=0)
