"""Scale-dependent linear regression from detrended fluctuations.

The slope at scale ``s`` is the ratio of the detrended covariance to the
detrended variance of the regressor, ``beta(s) = F2_XY(s) / F2_X(s)``. Its
sampling variance reuses the classical least-squares form with the ordinary
(co)variances replaced by their scale-``s`` counterparts, and ``R2(s)``
likewise. An intercept is never estimated: demeaning the per-scale residuals
absorbs it (a derived point estimate ``mean(y) - beta(s) * mean(x)`` is
reported for interpretability only).
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .fluctuation import (
    DetrendConfig,
    FluctuationTable,
    ScaleGrid,
    as_series,
    fluctuation_table,
)

__all__ = [
    "DegenerateRegressorError",
    "DegenerateResponseError",
    "ResidualSeries",
    "ScaleRegressionCurve",
    "STATUS_OK",
    "STATUS_DEGENERATE_X",
    "STATUS_DEGENERATE_Y",
    "estimate_beta",
    "residual_series",
    "estimate_variance",
    "coefficient_of_determination",
    "regression_curve",
]

STATUS_OK = "ok"
STATUS_DEGENERATE_X = "degenerate_x"
STATUS_DEGENERATE_Y = "degenerate_y"


class DegenerateRegressorError(ValueError):
    """The regressor's detrended variance vanished at the requested scale."""


class DegenerateResponseError(ValueError):
    """The response's detrended variance vanished at the requested scale."""


@dataclass(frozen=True, eq=False)
class ResidualSeries:
    """Demeaned regression residuals induced by one scale's slope estimate."""

    values: np.ndarray
    source_scale: int | None = None


@dataclass(frozen=True, eq=False)
class ScaleRegressionCurve:
    """Per-scale slope estimates with uncertainty and fit quality.

    Scales where the regressor (or response) degenerates carry NaN entries
    and a status code instead of failing the whole curve. ``r2`` is reported
    raw, without clamping, so slightly negative values are possible at
    near-degenerate scales. ``df`` is the plain-regression ``T - 2`` used in
    the variance formula at every scale.
    """

    scales: np.ndarray
    beta: np.ndarray
    se: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    r2: np.ndarray
    intercept: np.ndarray
    n_windows: np.ndarray
    status: tuple[str, ...]
    confidence_level: float
    df: int

    def __len__(self) -> int:
        return self.scales.size


def _self_f2(values: np.ndarray, scale: int, cfg: DetrendConfig) -> tuple[float, float]:
    """Detrended variance of one series at one scale, with its degeneracy floor."""
    table = fluctuation_table(values, values, ScaleGrid((scale,)), cfg)
    return float(table.fxx[0]), table.fxx_floor


def estimate_beta(table: FluctuationTable, scale: int) -> float:
    """Slope at one scale: detrended covariance over detrended regressor variance."""
    i = table.index_of(scale)
    if table.fxx[i] <= table.fxx_floor:
        raise DegenerateRegressorError(
            f"regressor fluctuation at scale {scale} is zero up to rounding; "
            f"its profile is an exact degree-{table.poly_order} trend"
        )
    return float(table.fxy[i] / table.fxx[i])


def residual_series(x, y, beta: float, source_scale: int | None = None) -> ResidualSeries:
    """Demeaned residuals ``y - beta * x``; the mean is removed exactly.

    Demeaning stands in for the intercept, so a constant offset between the
    series leaves the residuals at zero when the slope is exact.
    """
    xs = as_series(x, "x", min_length=1)
    ys = as_series(y, "y", min_length=1)
    if xs.size != ys.size:
        raise ValueError(f"x and y differ in length ({xs.size} vs {ys.size})")
    raw = ys - beta * xs
    return ResidualSeries(values=raw - raw.mean(), source_scale=source_scale)


def estimate_variance(x, residuals: ResidualSeries, scale: int,
                      cfg: DetrendConfig = DetrendConfig()) -> float:
    """Sampling variance of the scale-``scale`` slope estimate.

    The residual series is pushed through the same profile-and-detrend
    pipeline as the data, and the classical slope-variance form is applied
    with the scale-specific fluctuations: ``F2_u(s) / F2_X(s) / (T - 2)``.
    """
    xs = as_series(x, "x")
    if residuals.values.size != xs.size:
        raise ValueError(
            f"residuals differ in length from x ({residuals.values.size} vs {xs.size})"
        )
    f2_x, floor_x = _self_f2(xs, scale, cfg)
    if f2_x <= floor_x:
        raise DegenerateRegressorError(
            f"regressor fluctuation at scale {scale} is zero up to rounding"
        )
    f2_u, _ = _self_f2(residuals.values, scale, cfg)
    return f2_u / f2_x / (xs.size - 2)


def coefficient_of_determination(residuals: ResidualSeries, y, scale: int,
                                 cfg: DetrendConfig = DetrendConfig()) -> float:
    """Fraction of the response's scale-``scale`` fluctuation explained: 1 - F2_u/F2_Y."""
    ys = as_series(y, "y")
    if residuals.values.size != ys.size:
        raise ValueError(
            f"residuals differ in length from y ({residuals.values.size} vs {ys.size})"
        )
    f2_y, floor_y = _self_f2(ys, scale, cfg)
    if f2_y <= floor_y:
        raise DegenerateResponseError(
            f"response fluctuation at scale {scale} is zero up to rounding"
        )
    f2_u, _ = _self_f2(residuals.values, scale, cfg)
    return 1.0 - f2_u / f2_y


def regression_curve(x, y, grid, cfg: DetrendConfig = DetrendConfig(),
                     confidence_level: float = 0.95) -> ScaleRegressionCurve:
    """Slope, standard error, confidence band and R2 at every grid scale.

    Residuals are recomputed per scale from that scale's own slope; they are
    never pooled. The confidence band is the normal-quantile band
    ``beta +- z * se``. Degenerate scales are marked rather than fatal.
    """
    if not 0.0 < confidence_level < 1.0:
        raise ValueError(f"confidence_level must be in (0, 1), got {confidence_level}")
    xs = as_series(x, "x")
    ys = as_series(y, "y")
    if xs.size != ys.size:
        raise ValueError(f"x and y differ in length ({xs.size} vs {ys.size})")
    grid = ScaleGrid.from_any(grid)
    grid.validate_for(xs.size, cfg.poly_order)

    table = fluctuation_table(xs, ys, grid, cfg)
    z = NormalDist().inv_cdf(0.5 + confidence_level / 2.0)
    n = xs.size
    x_mean = xs.mean()
    y_mean = ys.mean()

    m = len(grid)
    beta = np.full(m, np.nan)
    se = np.full(m, np.nan)
    ci_low = np.full(m, np.nan)
    ci_high = np.full(m, np.nan)
    r2 = np.full(m, np.nan)
    intercept = np.full(m, np.nan)
    status: list[str] = []

    for i, s in enumerate(grid):
        if table.fxx[i] <= table.fxx_floor:
            status.append(STATUS_DEGENERATE_X)
            continue
        b = float(table.fxy[i] / table.fxx[i])
        raw = ys - b * xs
        resid = raw - raw.mean()
        f2_u, _ = _self_f2(resid, s, cfg)
        var = f2_u / table.fxx[i] / (n - 2)
        beta[i] = b
        se[i] = np.sqrt(var)
        ci_low[i] = b - z * se[i]
        ci_high[i] = b + z * se[i]
        intercept[i] = y_mean - b * x_mean
        if table.fyy[i] <= table.fyy_floor:
            status.append(STATUS_DEGENERATE_Y)
            continue
        r2[i] = 1.0 - f2_u / table.fyy[i]
        status.append(STATUS_OK)

    return ScaleRegressionCurve(
        scales=table.scales,
        beta=beta,
        se=se,
        ci_low=ci_low,
        ci_high=ci_high,
        r2=r2,
        intercept=intercept,
        n_windows=table.n_windows,
        status=tuple(status),
        confidence_level=float(confidence_level),
        df=n - 2,
    )
