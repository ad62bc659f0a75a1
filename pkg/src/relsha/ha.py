"""Classical least-squares harmonic analysis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constituents import ConstituentCatalog
from .design import build_design_matrix, classify_regime, unpack_state
from .series import HarmonicSolution, WaterLevelSeries, detrend

# Singular values below RANK_RCOND * (largest singular value) are treated
# as zero; near-resonant sampling (~12 h, ~24 h intervals) genuinely
# collapses the rank and must yield the minimum-norm solution, not a crash.
RANK_RCOND = 1e-10


@dataclass(frozen=True, eq=False)
class HaResult:
    solution: HarmonicSolution
    regime: str
    sample_count: int
    rank: int


def ha_fit(series: WaterLevelSeries, catalog: ConstituentCatalog) -> HaResult:
    """Fit mean, trend, and the 2n harmonic coefficients by least squares.

    The series is detrended first; the harmonic coefficients then solve
    min ||H x - residual||_2 via SVD. With fewer samples than 2n unknowns
    (or a rank-deficient H) the minimum-norm solution is returned and the
    regime flag reports the underdetermined case.
    """
    if len(series) < 2:
        raise ValueError("harmonic analysis requires at least 2 samples")
    residual, mean, trend = detrend(series)
    h_matrix = build_design_matrix(residual.times, catalog)
    x, _, rank, _ = np.linalg.lstsq(h_matrix, residual.heights, rcond=RANK_RCOND)
    amplitudes, phases = unpack_state(x, catalog)
    solution = HarmonicSolution(
        mean=mean,
        trend=trend,
        amplitudes=amplitudes,
        phases=phases,
        catalog=catalog,
        time_reference=float(series.times.mean()),
    )
    return HaResult(
        solution=solution,
        regime=classify_regime(len(series), catalog.n),
        sample_count=len(series),
        rank=int(rank),
    )
