"""Shared hypothesis strategies."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


@st.composite
def complex_matrices(draw, n_min=1, n_max=5):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@st.composite
def hermitian_matrices(draw, n_min=1, n_max=5):
    M = draw(complex_matrices(n_min, n_max))
    return (M + M.conj().T) / 2


@st.composite
def density_matrices(draw, n_min=2, n_max=5):
    M = draw(complex_matrices(n_min, n_max))
    R = M @ M.conj().T + 0.1 * np.eye(len(M))
    return R / np.trace(R).real
