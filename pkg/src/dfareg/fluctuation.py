"""Detrended variances and covariances of time series across window scales.

The working object is the profile: the cumulative sum of the mean-centered
series. Within every window of length ``s`` a polynomial time trend is
removed, and the residual (co)variance is averaged over windows to give the
scale-dependent fluctuations ``F2_X(s)``, ``F2_Y(s)``, ``F2_XY(s)``. Scaling
exponents are deliberately not estimated here; downstream code consumes the
per-scale (co)variances directly.

Two window layouts are supported. ``sliding`` uses every start position
``j = 0..T-s`` and divides the summed per-window fluctuations by ``T - s``
(note: one less than the number of windows; this nonstandard divisor is kept
deliberately). ``disjoint`` averages over the ``T // s`` non-overlapping
boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = [
    "WINDOW_MODES",
    "as_series",
    "Profile",
    "build_profile",
    "DetrendConfig",
    "ScaleGrid",
    "FluctuationTable",
    "fit_box_trend",
    "box_cross_fluctuation",
    "fluctuation_table",
]

WINDOW_MODES = ("sliding", "disjoint")

_EPS = float(np.finfo(np.float64).eps)


def as_series(values, name: str = "series", min_length: int = 4) -> np.ndarray:
    """Coerce input to a 1-D float64 array and validate it.

    Non-finite entries are rejected with the index of the first offender;
    imputation is never attempted. The default minimum length of 4 is the
    shortest series for which linear detrending in a window makes sense.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"{name} needs at least {min_length} observations, got {arr.size}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueError(f"{name} has a non-finite value at index {int(bad[0])}")
    return arr


@dataclass(frozen=True, eq=False)
class Profile:
    """Cumulative sum of a mean-centered series.

    The last entry telescopes to zero up to accumulated rounding. The
    subtracted mean is kept so callers can reconstruct level information.
    """

    values: np.ndarray
    source_mean: float

    def __len__(self) -> int:
        return self.values.size


def build_profile(series, name: str = "series") -> Profile:
    """Build the cumulative-sum profile of the mean-centered series."""
    arr = as_series(series, name)
    mean = arr.mean()
    return Profile(values=np.cumsum(arr - mean), source_mean=float(mean))


@dataclass(frozen=True)
class DetrendConfig:
    """Trend removal settings shared by all fluctuation computations.

    poly_order is the degree of the within-window time trend (1 = linear).
    Any scale used with this config must satisfy ``s >= poly_order + 2``.
    """

    poly_order: int = 1
    window_mode: str = "sliding"

    def __post_init__(self) -> None:
        if self.poly_order < 0:
            raise ValueError(f"poly_order must be >= 0, got {self.poly_order}")
        if self.window_mode not in WINDOW_MODES:
            raise ValueError(
                f"window_mode must be one of {WINDOW_MODES}, got {self.window_mode!r}"
            )


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly increasing window lengths at which fluctuations are evaluated."""

    scales: tuple[int, ...]

    def __post_init__(self) -> None:
        raw = list(self.scales)
        if not raw:
            raise ValueError("scale grid is empty")
        if any(int(s) != s or s < 2 for s in raw):
            raise ValueError(f"scales must be integers >= 2, got {tuple(raw)}")
        normalized = tuple(int(s) for s in raw)
        if any(b <= a for a, b in zip(normalized, normalized[1:])):
            raise ValueError(f"scales must be strictly increasing, got {normalized}")
        object.__setattr__(self, "scales", normalized)

    @classmethod
    def from_any(cls, grid) -> "ScaleGrid":
        if isinstance(grid, ScaleGrid):
            return grid
        return cls(tuple(int(s) for s in grid))

    @classmethod
    def linear(cls, start: int, stop: int, step: int = 1) -> "ScaleGrid":
        if step < 1:
            raise ValueError(f"step must be >= 1, got {step}")
        return cls(tuple(range(start, stop + 1, step)))

    @classmethod
    def logarithmic(cls, start: int, stop: int, count: int) -> "ScaleGrid":
        """Roughly geometric grid; rounded to integers with duplicates dropped."""
        if count < 2:
            raise ValueError(f"count must be >= 2, got {count}")
        raw = np.unique(np.round(np.geomspace(start, stop, count)).astype(int))
        return cls(tuple(int(s) for s in raw))

    def validate_for(self, n_obs: int, poly_order: int) -> None:
        """Check the grid against a series length and detrending order."""
        smallest = poly_order + 2
        if self.scales[0] < smallest:
            raise ValueError(
                f"smallest scale {self.scales[0]} is below poly_order + 2 = {smallest}"
            )
        if self.scales[-1] > n_obs - 1:
            raise ValueError(
                f"largest scale {self.scales[-1]} exceeds series length - 1 = {n_obs - 1}"
            )

    def __iter__(self):
        return iter(self.scales)

    def __len__(self) -> int:
        return len(self.scales)


@dataclass(frozen=True, eq=False)
class FluctuationTable:
    """Per-scale detrended variances and covariance of a pair of series.

    ``fxx`` and ``fyy`` are nonnegative; ``fxy`` is signed and bounded by
    ``sqrt(fxx * fyy)``. ``fxx_floor``/``fyy_floor`` are rounding-level
    thresholds below which the corresponding variance is considered
    degenerate (the profile was indistinguishable from an exact polynomial
    trend of the detrending order).
    """

    scales: np.ndarray
    fxx: np.ndarray
    fyy: np.ndarray
    fxy: np.ndarray
    n_windows: np.ndarray
    window_mode: str
    poly_order: int
    fxx_floor: float
    fyy_floor: float

    def index_of(self, scale: int) -> int:
        hits = np.flatnonzero(self.scales == scale)
        if not hits.size:
            raise KeyError(f"scale {scale} not in table (scales {self.scales.tolist()})")
        return int(hits[0])

    def at(self, scale: int) -> tuple[float, float, float]:
        i = self.index_of(scale)
        return float(self.fxx[i]), float(self.fyy[i]), float(self.fxy[i])


@lru_cache(maxsize=256)
def _poly_basis(scale: int, order: int) -> np.ndarray:
    """Orthonormal basis (thin Q) of the degree-``order`` polynomials on a window.

    Centered abscissae keep the Vandermonde matrix well conditioned; fitted
    values are invariant to the abscissae origin.
    """
    t = np.arange(scale, dtype=np.float64) - (scale - 1) / 2.0
    vander = np.vander(t, order + 1, increasing=True)
    q, r = np.linalg.qr(vander)
    # Distinct abscissae with scale >= order + 2 guarantee full rank.
    assert np.all(np.abs(np.diag(r)) > 0.0), "degenerate polynomial basis"
    q.flags.writeable = False
    return q


def _profile_values(profile) -> np.ndarray:
    return profile.values if isinstance(profile, Profile) else np.asarray(profile, dtype=np.float64)


def _check_box(n: int, start: int, scale: int, order: int) -> None:
    if scale < order + 2:
        raise ValueError(f"scale {scale} too small for poly_order {order} (need >= {order + 2})")
    if not 0 <= start <= n - scale:
        raise ValueError(f"window start {start} out of range for length {n} and scale {scale}")


def fit_box_trend(profile, start: int, scale: int, order: int = 1) -> np.ndarray:
    """Least-squares polynomial trend fitted inside one window of the profile.

    ``start`` is the 0-based window start. Returns the fitted values at each
    of the ``scale`` in-window positions; residuals against the returned
    trend are orthogonal to the polynomial basis.
    """
    values = _profile_values(profile)
    _check_box(values.size, start, scale, order)
    q = _poly_basis(scale, order)
    window = values[start:start + scale]
    return q @ (q.T @ window)


def box_cross_fluctuation(profile_x, profile_y, start: int, scale: int,
                          cfg: DetrendConfig = DetrendConfig()) -> float:
    """Detrended covariance of one window: sum of residual products over s - 1.

    With ``profile_x is profile_y`` this is the window's detrended variance
    and is nonnegative.
    """
    px = _profile_values(profile_x)
    py = _profile_values(profile_y)
    if px.size != py.size:
        raise ValueError(f"profiles differ in length ({px.size} vs {py.size})")
    _check_box(px.size, start, scale, cfg.poly_order)
    q = _poly_basis(scale, cfg.poly_order)
    wx = px[start:start + scale]
    wy = py[start:start + scale]
    rx = wx - q @ (q.T @ wx)
    ry = wy - q @ (q.T @ wy)
    return float(rx @ ry / (scale - 1))


def _detrended_residuals(values: np.ndarray, scale: int, order: int, mode: str) -> np.ndarray:
    """Residual matrix (one row per window) after in-window polynomial detrending."""
    windows = sliding_window_view(values, scale)
    if mode == "disjoint":
        windows = windows[::scale]
    q = _poly_basis(scale, order)
    return windows - (windows @ q) @ q.T


def _degeneracy_floor(profile_values: np.ndarray) -> float:
    # Rounding scale of squared residuals for a profile of this magnitude.
    peak = float(np.max(np.abs(profile_values), initial=0.0))
    return (profile_values.size * _EPS * max(peak, 1e-300)) ** 2


def fluctuation_table(x, y, grid, cfg: DetrendConfig = DetrendConfig()) -> FluctuationTable:
    """Window-averaged detrended variances and covariance on a scale grid.

    In sliding mode the per-window fluctuations from every start position are
    summed and divided by ``T - s``; in disjoint mode the ``T // s``
    non-overlapping boxes are averaged. The same windows are used for
    ``fxx``, ``fyy`` and ``fxy``, which keeps the Cauchy-Schwarz bound
    ``fxy^2 <= fxx * fyy`` intact at every scale.
    """
    xs = as_series(x, "x")
    ys = as_series(y, "y")
    if xs.size != ys.size:
        raise ValueError(f"x and y differ in length ({xs.size} vs {ys.size})")
    grid = ScaleGrid.from_any(grid)
    grid.validate_for(xs.size, cfg.poly_order)

    n = xs.size
    px = build_profile(xs, "x").values
    py = build_profile(ys, "y").values

    m = len(grid)
    fxx = np.empty(m)
    fyy = np.empty(m)
    fxy = np.empty(m)
    n_windows = np.empty(m, dtype=np.int64)
    for i, s in enumerate(grid):
        rx = _detrended_residuals(px, s, cfg.poly_order, cfg.window_mode)
        ry = _detrended_residuals(py, s, cfg.poly_order, cfg.window_mode)
        k = rx.shape[0]
        divisor = (n - s) if cfg.window_mode == "sliding" else k
        denom = (s - 1) * divisor
        fxx[i] = np.einsum("ij,ij->", rx, rx) / denom
        fyy[i] = np.einsum("ij,ij->", ry, ry) / denom
        fxy[i] = np.einsum("ij,ij->", rx, ry) / denom
        n_windows[i] = k

    return FluctuationTable(
        scales=np.asarray(grid.scales, dtype=np.int64),
        fxx=fxx,
        fyy=fyy,
        fxy=fxy,
        n_windows=n_windows,
        window_mode=cfg.window_mode,
        poly_order=cfg.poly_order,
        fxx_floor=_degeneracy_floor(px),
        fyy_floor=_degeneracy_floor(py),
    )
