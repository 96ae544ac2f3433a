"""Amplitude coupling networks of time-series pairs."""

from ._couplemap import (
    MEASURE_NAMES,
    AlignedPair,
    CouplemapError,
    CouplingNetwork,
    SeriesKind,
    SummaryRow,
    SystemSummary,
    TimeAxis,
    TimeSeries,
    align_pair,
    confidence_interval,
    deformation_ratio,
    detect_communities,
    discretize,
    estimate_hurst,
    fgn_autocovariance,
    generate_fgn,
    log_returns,
    map_lagged,
    map_pair,
    measure_all,
    radar_normalize,
    run_fgn_ensemble,
    run_surrogate_pair,
    spectrum,
    standardize,
    surrogate,
    z_score,
)

__all__ = [name for name in dir() if not name.startswith("_")]
