"""Tidal constituent amplitude estimation from (under)sampled water levels.

Three estimators share one data model: classical least-squares harmonic
analysis (ha_fit), constrained harmonic analysis interpolating between
two reference gauges (cha_fit), and regularized least-squares harmonic
analysis (relsha_fit), which penalizes squared-amplitude deviation from a
reference site so the tidal amplitudes survive sampling intervals far
beyond the Nyquist limit of the constituents.
"""

from .cha import ChaResult, GaugeHarmonics, cha_fit
from .constituents import (
    Constituent,
    ConstituentCatalog,
    default_catalog_path,
    load_catalog,
    load_default_catalog,
    make_catalog,
    write_catalog,
)
from .design import (
    OVERDETERMINED,
    UNDERDETERMINED,
    amplitude_squares,
    build_design_matrix,
    build_k,
    classify_regime,
    pack_solution,
    unpack_state,
)
from .evaluation import (
    ErrorGrid,
    GridCell,
    default_intervals,
    default_lengths,
    interval_slice,
    rrmse,
    run_grid,
)
from .ha import HaResult, ha_fit
from .ingest import (
    AltimetrySeries,
    load_altimetry,
    load_harmonics,
    load_water_levels,
    to_series,
    write_solution,
    write_water_levels,
)
from .regularized import (
    RelshaConfig,
    RelshaDiagnostics,
    RelshaResult,
    relsha_fit,
    relsha_gradient,
    relsha_objective,
)
from .series import (
    HarmonicSolution,
    SamplingPlan,
    WaterLevelSeries,
    apply_noise,
    detrend,
    resample,
    synthesize,
    synthesize_series,
)

__version__ = "0.1.0"

__all__ = [
    "AltimetrySeries",
    "ChaResult",
    "Constituent",
    "ConstituentCatalog",
    "ErrorGrid",
    "GaugeHarmonics",
    "GridCell",
    "HaResult",
    "HarmonicSolution",
    "OVERDETERMINED",
    "RelshaConfig",
    "RelshaDiagnostics",
    "RelshaResult",
    "SamplingPlan",
    "UNDERDETERMINED",
    "WaterLevelSeries",
    "amplitude_squares",
    "apply_noise",
    "build_design_matrix",
    "build_k",
    "cha_fit",
    "classify_regime",
    "default_catalog_path",
    "default_intervals",
    "default_lengths",
    "detrend",
    "ha_fit",
    "interval_slice",
    "load_altimetry",
    "load_catalog",
    "load_default_catalog",
    "load_harmonics",
    "load_water_levels",
    "make_catalog",
    "pack_solution",
    "relsha_fit",
    "relsha_gradient",
    "relsha_objective",
    "resample",
    "rrmse",
    "run_grid",
    "synthesize",
    "synthesize_series",
    "to_series",
    "unpack_state",
    "write_catalog",
    "write_solution",
    "write_water_levels",
]
