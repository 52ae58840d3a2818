"""Scale-dependent regression between time series via detrended fluctuations.

The estimator replaces the ordinary variance and covariance in the
least-squares slope with their detrended, window-averaged counterparts at a
chosen scale, giving a slope, standard error, confidence band and R2 per
scale. A long-memory series generator and a Monte Carlo harness are included
for validating the estimator's bias and RMSE behavior.
"""

__version__ = "0.1.0"

from .arfima import (
    ArfimaSpec,
    RegressionSimSpec,
    arfima_weights,
    fluctuation_log_slope,
    generate_arfima,
    simulate_regression_pair,
)
from .fluctuation import (
    DetrendConfig,
    FluctuationTable,
    Profile,
    ScaleGrid,
    as_series,
    box_cross_fluctuation,
    build_profile,
    fit_box_trend,
    fluctuation_table,
)
from .montecarlo import (
    ExcessiveExclusionError,
    MonteCarloConfig,
    MonteCarloReport,
    SweepPointReport,
    run_design,
    summarize,
)
from .regression import (
    DegenerateRegressorError,
    DegenerateResponseError,
    ResidualSeries,
    ScaleRegressionCurve,
    coefficient_of_determination,
    estimate_beta,
    regression_curve,
    residual_series,
    estimate_variance,
)

__all__ = [
    "__version__",
    "ArfimaSpec",
    "RegressionSimSpec",
    "arfima_weights",
    "fluctuation_log_slope",
    "generate_arfima",
    "simulate_regression_pair",
    "DetrendConfig",
    "FluctuationTable",
    "Profile",
    "ScaleGrid",
    "as_series",
    "box_cross_fluctuation",
    "build_profile",
    "fit_box_trend",
    "fluctuation_table",
    "ExcessiveExclusionError",
    "MonteCarloConfig",
    "MonteCarloReport",
    "SweepPointReport",
    "run_design",
    "summarize",
    "DegenerateRegressorError",
    "DegenerateResponseError",
    "ResidualSeries",
    "ScaleRegressionCurve",
    "coefficient_of_determination",
    "estimate_beta",
    "regression_curve",
    "residual_series",
    "estimate_variance",
]
