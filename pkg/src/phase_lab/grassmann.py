"""Two-generator Grassmann algebra with complex coefficients.

Elements are expanded in the fixed basis {1, zeta, zetabar, zetabar*zeta}. The
products zeta*zeta and zetabar*zetabar vanish and zeta*zetabar = -zetabar*zeta,
so every product of three generators is zero. "Body" is the coefficient of 1,
"soul" is everything else.

``GrassmannMatrix`` stores a matrix over this ring as four complex matrices,
one per basis element, which keeps matrix products vectorised.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OddElement, SeriesNotConverged, ZeroBody

BODY_FLOOR = 1e-300


@dataclass(frozen=True)
class GrassmannElement:
    c0: complex = 0j
    cz: complex = 0j
    czb: complex = 0j
    czz: complex = 0j

    def __post_init__(self):
        for name in ("c0", "cz", "czb", "czz"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def build(cls, c0=0, cz=0, czb=0, czz=0, czzb=0) -> GrassmannElement:
        """Accepts a zeta*zetabar coefficient and folds it into zetabar*zeta."""
        return cls(c0, cz, czb, complex(czz) - complex(czzb))

    @property
    def is_even(self) -> bool:
        return self.cz == 0 and self.czb == 0

    @property
    def body(self) -> complex:
        return self.c0

    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.c0, self.cz, self.czb, self.czz)

    def conj(self) -> GrassmannElement:
        """Involution zeta <-> zetabar, complex conjugation, order reversal."""
        return GrassmannElement(
            self.c0.conjugate(), self.czb.conjugate(), self.cz.conjugate(), self.czz.conjugate()
        )

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return GrassmannElement(
            self.c0 + other.c0, self.cz + other.cz, self.czb + other.czb, self.czz + other.czz
        )

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(-self.c0, -self.cz, -self.czb, -self.czz)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return g_mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            s = complex(other)
            return GrassmannElement(s * self.c0, s * self.cz, s * self.czb, s * self.czz)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * (1 / complex(other))
        return NotImplemented

    def isclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        return all(abs(a - b) <= atol for a, b in zip(self.coefficients(), other.coefficients()))

    def __repr__(self):
        return f"G({self.c0:.6g} + {self.cz:.6g}z + {self.czb:.6g}zb + {self.czz:.6g}zbz)"


def _coerce(x):
    if isinstance(x, GrassmannElement):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return GrassmannElement(complex(x))
    return NotImplemented


ONE = GrassmannElement(1)
ZETA = GrassmannElement(cz=1)
ZETABAR = GrassmannElement(czb=1)
ZETABAR_ZETA = GrassmannElement(czz=1)


def g_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return GrassmannElement(
        a.c0 * b.c0,
        a.c0 * b.cz + a.cz * b.c0,
        a.c0 * b.czb + a.czb * b.c0,
        a.c0 * b.czz + a.czz * b.c0 + a.czb * b.cz - a.cz * b.czb,
    )


def g_exp_even(g: GrassmannElement) -> GrassmannElement:
    """exp(c0 + c zetabar zeta) = e^c0 (1 + c zetabar zeta)."""
    if not g.is_even:
        raise OddElement("g_exp_even needs an even element")
    e = cmath.exp(g.c0)
    return GrassmannElement(e, 0, 0, e * g.czz)


def g_arg_even(g: GrassmannElement) -> GrassmannElement:
    """Imaginary part of the formal logarithm log c0 + (czz / c0) zetabar zeta.

    The body lies in (-pi, pi].
    """
    if not g.is_even:
        raise OddElement("g_arg_even needs an even element")
    if abs(g.c0) < BODY_FLOOR:
        raise ZeroBody("body below threshold; argument undefined")
    body = cmath.phase(g.c0)
    if body <= -math.pi:
        body = math.pi
    return GrassmannElement(body, 0, 0, (g.czz / g.c0).imag)


class GrassmannMatrix:
    """Square matrix with Grassmann entries, stored per basis component."""

    __slots__ = ("parts",)

    def __init__(self, c0, cz=None, czb=None, czz=None):
        c0 = np.asarray(c0, dtype=np.complex128)
        if c0.ndim != 2 or c0.shape[0] != c0.shape[1]:
            raise DimensionMismatch(f"expected square body, got {c0.shape}")
        zero = np.zeros_like(c0)
        parts = [c0]
        for p in (cz, czb, czz):
            p = zero.copy() if p is None else np.asarray(p, dtype=np.complex128)
            if p.shape != c0.shape:
                raise DimensionMismatch(f"component shape {p.shape} != {c0.shape}")
            parts.append(p)
        self.parts = tuple(parts)

    @classmethod
    def identity(cls, dim: int) -> GrassmannMatrix:
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> GrassmannMatrix:
        return cls(np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.parts[0].shape[0]

    @property
    def body(self) -> np.ndarray:
        return self.parts[0]

    def __getitem__(self, idx) -> GrassmannElement:
        i, j = idx
        return GrassmannElement(*(p[i, j] for p in self.parts))

    def __add__(self, other: GrassmannMatrix) -> GrassmannMatrix:
        return GrassmannMatrix(*(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: GrassmannMatrix) -> GrassmannMatrix:
        return GrassmannMatrix(*(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self) -> GrassmannMatrix:
        return GrassmannMatrix(*(-a for a in self.parts))

    def __matmul__(self, other: GrassmannMatrix) -> GrassmannMatrix:
        return gm_mul(self, other)

    def scale(self, s) -> GrassmannMatrix:
        """Left-multiply every entry by a number or a Grassmann element."""
        if isinstance(s, GrassmannElement):
            a0, a1, a2, a3 = s.coefficients()
            b0, b1, b2, b3 = self.parts
            return GrassmannMatrix(
                a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a2 * b0, a0 * b3 + a3 * b0 + a2 * b1 - a1 * b2
            )
        return GrassmannMatrix(*(complex(s) * p for p in self.parts))

    def dagger(self) -> GrassmannMatrix:
        c0, cz, czb, czz = self.parts
        return GrassmannMatrix(c0.conj().T, czb.conj().T, cz.conj().T, czz.conj().T)

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(p))) for p in self.parts)

    def __repr__(self):
        return f"GrassmannMatrix(dim={self.dim})"


def gm_mul(A: GrassmannMatrix, B: GrassmannMatrix) -> GrassmannMatrix:
    if A.dim != B.dim:
        raise DimensionMismatch(f"{A.dim} vs {B.dim}")
    a0, a1, a2, a3 = A.parts
    b0, b1, b2, b3 = B.parts
    return GrassmannMatrix(
        a0 @ b0,
        a0 @ b1 + a1 @ b0,
        a0 @ b2 + a2 @ b0,
        a0 @ b3 + a3 @ b0 + a2 @ b1 - a1 @ b2,
    )


def gm_trace(A: GrassmannMatrix) -> GrassmannElement:
    return GrassmannElement(*(np.trace(p) for p in A.parts))


def gm_exp(A: GrassmannMatrix, max_terms: int = 12, tol: float = 1e-14) -> GrassmannMatrix:
    """Power series exp(A), capped at ``max_terms`` terms.

    For a pure-soul A the series stops after the quadratic term. Raises
    ``SeriesNotConverged`` if the last term kept is still above ``tol``.
    """
    result = GrassmannMatrix.identity(A.dim)
    term = GrassmannMatrix.identity(A.dim)
    for k in range(1, max_terms + 1):
        term = gm_mul(term, A).scale(1.0 / k)
        size = term.max_abs()
        if size == 0.0:
            return result
        result = result + term
        if size < tol:
            return result
    raise SeriesNotConverged(f"exp series tail {size:.3e} after {max_terms} terms")
