"""Linear-algebra building blocks shared by the harmonic solvers.

The state vector x has length 2n: entry k carries A_k f_k cos(theta_k)
and entry n+k carries -A_k f_k sin(theta_k), so that for the design
matrix H (cosine columns then sine columns) the product H @ x equals
sum_k A_k f_k cos(w_k t + theta_k) exactly. The sign on the sine block
follows from the expansion cos(wt + theta) = cos(theta)cos(wt) -
sin(theta)sin(wt); amplitudes are unaffected by the choice.
"""

from __future__ import annotations

import numpy as np

from .constituents import TWO_PI, ConstituentCatalog
from .series import HarmonicSolution

OVERDETERMINED = "overdetermined"
UNDERDETERMINED = "underdetermined"


def classify_regime(sample_count: int, n_constituents: int) -> str:
    """Underdetermined when there are fewer samples than the 2n unknowns."""
    return UNDERDETERMINED if sample_count < 2 * n_constituents else OVERDETERMINED


def build_design_matrix(times, catalog: ConstituentCatalog) -> np.ndarray:
    """m x 2n matrix [cos(w_k t_i) | sin(w_k t_i)] at the given sample times."""
    t = np.asarray(times, dtype=float)
    if t.size == 0:
        raise ValueError("design matrix requires at least one sample time")
    arg = np.outer(t, catalog.speeds)
    return np.hstack([np.cos(arg), np.sin(arg)])


def build_k(n: int) -> np.ndarray:
    """Explicit n x 2n pairing matrix: row k has ones at columns k and n+k.

    Only used by tests and diagnostics; amplitude_squares applies the same
    pairing without materializing the matrix.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    k = np.zeros((n, 2 * n))
    idx = np.arange(n)
    k[idx, idx] = 1.0
    k[idx, n + idx] = 1.0
    return k


def amplitude_squares(x: np.ndarray) -> np.ndarray:
    """Per-constituent squared magnitude A_k^2 f_k^2 of the state pairs."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size % 2 != 0:
        raise ValueError(f"state vector must be one-dimensional of even length, got shape {x.shape}")
    n = x.size // 2
    return x[:n] ** 2 + x[n:] ** 2


def pack_solution(solution: HarmonicSolution) -> np.ndarray:
    """State vector for a solution: (A f cos(theta), -A f sin(theta))."""
    f = solution.catalog.nodal_factors
    af = solution.amplitudes * f
    return np.concatenate([af * np.cos(solution.phases), -af * np.sin(solution.phases)])


def unpack_state(x: np.ndarray, catalog: ConstituentCatalog) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes and phases from a state vector.

    A_k = sqrt(x_k^2 + x_{n+k}^2) / f_k; theta_k recovers the packed
    angle, with zero-amplitude pairs mapped to phase 0 for determinism.
    """
    x = np.asarray(x, dtype=float)
    n = catalog.n
    if x.shape != (2 * n,):
        raise ValueError(f"state vector must have length {2 * n}, got {x.size}")
    c, s = x[:n], x[n:]
    magnitude = np.hypot(c, s)
    amplitudes = magnitude / catalog.nodal_factors
    phases = np.where(magnitude > 0, np.arctan2(-s, c) % TWO_PI, 0.0)
    return amplitudes, phases
