from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from ..errors import IncompatibleLoop, NoAnalyticForm, NotADensityMatrix
from ..linops import HERMITIAN_TOL, SpectralDecomposition, as_matrix, dagger, hermitian_eig, hermiticity_defect
from ..loops import ParameterLoop

TRACE_TOL = 1e-10
# keeps exponentially small Boltzmann weights strictly positive after underflow
WEIGHT_FLOOR = np.finfo(float).tiny


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, trace-one, full-rank matrix with its spectrum.

    When ``spectrum`` is not supplied it is computed with ``hermitian_eig``.
    Model code passes the exact spectrum it already knows.
    """

    matrix: np.ndarray
    spectrum: SpectralDecomposition | None = field(default=None, repr=False)

    def __post_init__(self):
        M = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        if hermiticity_defect(M) > HERMITIAN_TOL:
            raise NotADensityMatrix("not Hermitian")
        tr = np.trace(M)
        if abs(tr - 1) > TRACE_TOL:
            raise NotADensityMatrix(f"trace {tr.real:.12g} != 1")
        if self.spectrum is None:
            object.__setattr__(self, "spectrum", hermitian_eig(M))
        if not self.spectrum.eigenvalues.min() > 0:
            raise NotADensityMatrix("density matrix is not full rank")

    @classmethod
    def from_spectrum(cls, weights, vectors) -> DensityMatrix:
        """Build from weights and matching eigenvector columns (any order)."""
        w = np.asarray(weights, dtype=float)
        V = np.asarray(vectors, dtype=np.complex128)
        order = np.argsort(w, kind="stable")
        w, V = w[order], V[:, order]
        M = (V * w) @ dagger(V)
        return cls((M + dagger(M)) / 2, SpectralDecomposition(w, V))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @cached_property
    def sqrt(self) -> np.ndarray:
        S = self.spectrum.apply(np.sqrt)
        return (S + dagger(S)) / 2


def boltzmann_weights(energies, beta: float) -> np.ndarray:
    """exp(-beta E) / Z, shifted for overflow safety and floored for underflow."""
    E = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (E - E.min()))
    w /= w.sum()
    return np.maximum(w, WEIGHT_FLOOR)


@dataclass(frozen=True)
class PhaseClosedForm:
    theta_u: object = None
    theta_b: object = None
    level: int = 0


class Model:
    """Common surface of every model family.

    Subclasses are frozen dataclasses with a ``beta`` field so that sweeps can
    use ``with_beta``.
    """

    kind = "abstract"
    grassmann = False

    def with_beta(self, beta: float):
        return replace(self, beta=float(beta))

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def check_loop(self, loop: ParameterLoop) -> None:
        pass

    def density_at(self, loop: ParameterLoop, t: float):
        raise NotImplementedError

    def hamiltonian_at(self, loop: ParameterLoop, t: float) -> np.ndarray:
        raise NotImplementedError

    def level_state(self, loop: ParameterLoop, t: float, level: int) -> tuple[np.ndarray, float]:
        """Energy eigenvector of ``level`` (0 = ground) and its gap to the neighbours."""
        spec = hermitian_eig(self.hamiltonian_at(loop, t))
        E = spec.eigenvalues
        if not 0 <= level < len(E):
            raise IndexError(f"level {level} outside spectrum of size {len(E)}")
        gaps = [abs(E[level] - E[i]) for i in (level - 1, level + 1) if 0 <= i < len(E)]
        return spec.eigenvectors[:, level], min(gaps, default=np.inf)

    def analytic_uhlmann_connection(self, loop: ParameterLoop, t: float):
        raise NoAnalyticForm(f"{self.kind} has no analytic Uhlmann connection")

    def closed_form_phase(self, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
        raise NoAnalyticForm(f"{self.kind} has no closed-form phase")

    def _require(self, loop: ParameterLoop, plane: bool) -> None:
        if plane and not loop.is_plane:
            raise IncompatibleLoop(f"{self.kind} model needs a plane loop, got {loop.kind}")
        if not plane and not loop.is_sphere:
            raise IncompatibleLoop(f"{self.kind} model needs a sphere loop, got {loop.kind}")


class FramedModel(Model):
    """Models with rho(t) = D(t) rho_ref D(t)^dag for a unitary frame D(t).

    Subclasses provide ``reference_energies`` (ascending), ``reference_vectors``
    and ``frame``.
    """

    def reference_energies(self) -> np.ndarray:
        raise NotImplementedError

    def reference_vectors(self) -> np.ndarray:
        return np.eye(len(self.reference_energies()), dtype=np.complex128)

    def frame(self, loop: ParameterLoop, t: float) -> np.ndarray:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return len(self.reference_energies())

    def weights(self) -> np.ndarray:
        """Boltzmann weights in ascending-energy order."""
        return boltzmann_weights(self.reference_energies(), self.beta)

    def reference_density(self) -> DensityMatrix:
        return DensityMatrix.from_spectrum(self.weights(), self.reference_vectors())

    def density_at(self, loop: ParameterLoop, t: float) -> DensityMatrix:
        self.check_loop(loop)
        V = self.frame(loop, t) @ self.reference_vectors()
        return DensityMatrix.from_spectrum(self.weights(), V)

    def hamiltonian_at(self, loop: ParameterLoop, t: float) -> np.ndarray:
        self.check_loop(loop)
        V = self.frame(loop, t) @ self.reference_vectors()
        H = (V * self.reference_energies()) @ dagger(V)
        return (H + dagger(H)) / 2
