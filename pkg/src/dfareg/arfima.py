"""Fractionally integrated (long-memory) series and simulated regression pairs.

Series are generated from the autoregressive representation of fractional
integration: each observation is a weighted sum of the full available history
plus a fresh Gaussian innovation. The memory parameter ``d`` runs from 0
(white noise) through the nonstationary range up to 1 (random walk, handled
as an exact cumulative sum). Generation is O(T^2) by construction; no
spectral shortcut is used.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fluctuation import DetrendConfig, ScaleGrid, fluctuation_table

__all__ = [
    "ArfimaSpec",
    "RegressionSimSpec",
    "ERROR_KINDS",
    "arfima_weights",
    "generate_arfima",
    "simulate_regression_pair",
    "fluctuation_log_slope",
]

ERROR_KINDS = ("gaussian", "arfima")


@dataclass(frozen=True, eq=False)
class ArfimaSpec:
    """Configuration of one fractionally integrated series.

    ``seed`` may be an integer or a ``numpy.random.SeedSequence`` (the latter
    is how callers hand over derived, stream-independent seeds). ``burn_in``
    extra observations are generated first and dropped; the default of 0
    reproduces the plain finite-history recursion from a cold start.
    """

    d: float
    length: int
    innovation_sd: float = 1.0
    seed: "int | np.random.SeedSequence" = 0
    burn_in: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.d <= 1.0:
            raise ValueError(f"d must be in [0, 1], got {self.d}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        if not self.innovation_sd > 0.0:
            raise ValueError(f"innovation_sd must be > 0, got {self.innovation_sd}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")


@dataclass(frozen=True, eq=False)
class RegressionSimSpec:
    """Linear model ``y = alpha + beta * x + u`` with long-memory ingredients.

    ``x`` follows ``x_spec``; the error ``u`` is either standard Gaussian
    noise or a fractionally integrated series with parameter ``error_d``.
    The x and u streams are derived independently from ``seed``; the seed
    carried by ``x_spec`` is ignored here.
    """

    alpha: float
    beta: float
    x_spec: ArfimaSpec
    error_kind: str = "gaussian"
    error_d: float = 0.0
    seed: "int | np.random.SeedSequence" = 0

    def __post_init__(self) -> None:
        if self.error_kind not in ERROR_KINDS:
            raise ValueError(f"error_kind must be one of {ERROR_KINDS}, got {self.error_kind!r}")
        if self.error_kind == "arfima" and not 0.0 <= self.error_d <= 1.0:
            raise ValueError(f"error_d must be in [0, 1], got {self.error_d}")


def arfima_weights(d: float, n: int, gamma_ratio_sign: bool = False) -> np.ndarray:
    """First ``n`` autoregressive weights of fractional integration order ``d``.

    Computed by the overflow-safe recursion ``w_1 = d``,
    ``w_{i+1} = w_i * (i - d) / (i + 1)``, which reproduces the magnitude of
    the Gamma-function ratio ``Gamma(i - d) / (Gamma(-d) * Gamma(1 + i))``
    term by term. The sign convention makes positive ``d`` persistent
    (weights positive and decreasing); pass ``gamma_ratio_sign=True`` to get
    the raw ratio instead, whose leading weight is ``-d``.
    """
    if not 0.0 <= d < 1.0:
        raise ValueError(f"d must be in [0, 1) for weights, got {d}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    w = np.empty(n)
    w[0] = d
    for i in range(1, n):
        w[i] = w[i - 1] * (i - d) / (i + 1)
    return -w if gamma_ratio_sign else w


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def generate_arfima(spec: ArfimaSpec) -> np.ndarray:
    """Generate one fractionally integrated series from its spec.

    For ``d < 1`` each value is the innovation plus the weighted sum over all
    previous values (full-history truncation of the infinite-order
    autoregression). ``d = 1`` is the exact random-walk limit and is computed
    as a cumulative sum, sidestepping the weight recursion's pole there.
    Identical specs (including seed) yield bit-identical output.
    """
    rng = np.random.default_rng(_seed_sequence(spec.seed))
    m = spec.length + spec.burn_in
    eps = rng.standard_normal(m) * spec.innovation_sd
    if spec.d == 1.0:
        return np.cumsum(eps)[spec.burn_in:]
    if spec.d == 0.0:
        return eps[spec.burn_in:]
    w = arfima_weights(spec.d, m - 1) if m > 1 else np.empty(0)
    x = np.empty(m)
    x[0] = eps[0]
    for t in range(1, m):
        x[t] = eps[t] + w[:t] @ x[t - 1::-1]
    return x[spec.burn_in:]


def simulate_regression_pair(spec: RegressionSimSpec) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``(x, y)`` with ``y = alpha + beta * x + u``.

    Two child streams are spawned from ``spec.seed``: one drives ``x``, the
    other the error term, so the pair is reproducible and the components are
    independent.
    """
    seed_x, seed_u = _seed_sequence(spec.seed).spawn(2)
    x = generate_arfima(replace(spec.x_spec, seed=seed_x))
    n = spec.x_spec.length
    if spec.error_kind == "gaussian":
        u = np.random.default_rng(seed_u).standard_normal(n)
    else:
        u = generate_arfima(ArfimaSpec(d=spec.error_d, length=n, seed=seed_u,
                                       burn_in=spec.x_spec.burn_in))
    y = spec.alpha + spec.beta * x + u
    return x, y


def fluctuation_log_slope(series, scales, cfg: DetrendConfig = DetrendConfig()) -> float:
    """Log-log slope of the root fluctuation function over the given scales.

    Generator sanity utility only: for a fractionally integrated series the
    slope should sit near ``d + 1/2``. Not part of the regression surface.
    """
    grid = ScaleGrid.from_any(scales)
    table = fluctuation_table(series, series, grid, cfg)
    log_s = np.log(table.scales.astype(np.float64))
    log_f = 0.5 * np.log(table.fxx)
    return float(np.polyfit(log_s, log_f, 1)[0])
