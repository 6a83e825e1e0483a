"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype complex128. Every routine here is a
pure function; nothing is cached at module level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonFinite, NonHermitian, NotPSD

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-12
DEGENERACY_TOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """Coerce to a square, finite complex128 array."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite("matrix has non-finite entries")
    return M


def dagger(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def max_norm(A: np.ndarray) -> float:
    return float(np.max(np.abs(A))) if A.size else 0.0


def hermiticity_defect(A: np.ndarray) -> float:
    return max_norm(A - dagger(A))


def anti_hermiticity_defect(A: np.ndarray) -> float:
    return max_norm(A + dagger(A))


def unitarity_defect(U: np.ndarray) -> float:
    return max_norm(dagger(U) @ U - np.eye(U.shape[0]))


def degenerate_pairs(weights) -> np.ndarray:
    """Boolean mask of pairs with |l_n - l_m| <= DEGENERACY_TOL (l_n + l_m).

    Relative, because the connection coefficients depend on l_n / l_m only.
    """
    w = np.asarray(weights, dtype=float)
    return np.abs(w[:, None] - w[None, :]) <= DEGENERACY_TOL * (w[:, None] + w[None, :])


def _check_hermitian(H: np.ndarray) -> None:
    scale = max(1.0, max_norm(H))
    if hermiticity_defect(H) > HERMITIAN_TOL * scale:
        raise NonHermitian(f"max|H - H^dag| = {hermiticity_defect(H):.3e}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues ascending; column k of ``eigenvectors`` pairs with eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ dagger(V)

    def apply(self, f) -> np.ndarray:
        """Matrix function f(H) through the spectrum."""
        V = self.eigenvectors
        return (V * f(self.eigenvalues)) @ dagger(V)


def fix_gauge(V: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real and positive.

    ``np.argmax`` returns the lowest index among exact ties.
    """
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    return V * (np.abs(pivots) / pivots)


def hermitian_eig(H) -> SpectralDecomposition:
    H = as_matrix(H)
    _check_hermitian(H)
    w, V = np.linalg.eigh((H + dagger(H)) / 2)
    return SpectralDecomposition(w, fix_gauge(V))


def sqrt_psd(H) -> np.ndarray:
    """Principal square root of a Hermitian positive semi-definite matrix."""
    spec = hermitian_eig(H)
    w = spec.eigenvalues
    if w.size and w.min() < -PSD_TOL:
        raise NotPSD(f"smallest eigenvalue {w.min():.3e}")
    S = spec.apply(lambda x: np.sqrt(np.clip(x, 0.0, None)))
    return (S + dagger(S)) / 2


def expm(A) -> np.ndarray:
    """Matrix exponential.

    (Anti-)Hermitian input goes through ``eigh``, which keeps exp of an
    anti-Hermitian generator unitary to rounding. Anything else falls back to
    scaling-and-squaring with a Pade approximant.
    """
    A = as_matrix(A)
    scale = max(1.0, max_norm(A))
    if anti_hermiticity_defect(A) <= 1e-14 * scale:
        # A = -i K with K Hermitian
        K = 0.5j * (A - dagger(A))
        w, V = np.linalg.eigh(K)
        return (V * np.exp(-1j * w)) @ dagger(V)
    if hermiticity_defect(A) <= 1e-14 * scale:
        w, V = np.linalg.eigh((A + dagger(A)) / 2)
        return (V * np.exp(w)) @ dagger(V)
    return scipy.linalg.expm(A)


def hs_inner(W1, W2) -> complex:
    """Hilbert-Schmidt product Tr(W1^dag W2)."""
    W1 = np.asarray(W1, dtype=np.complex128)
    W2 = np.asarray(W2, dtype=np.complex128)
    if W1.shape != W2.shape:
        raise DimensionMismatch(f"{W1.shape} vs {W2.shape}")
    return complex(np.vdot(W1, W2))


def polar_unitary(X: np.ndarray) -> np.ndarray:
    """Unitary factor Q of the polar decomposition X = Q P."""
    u, _, vh = np.linalg.svd(X)
    return u @ vh
