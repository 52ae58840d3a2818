"""CSV ingestion, run configuration, and result serialization.

Input files are plain UTF-8 CSV with an optional single header row; values
use a decimal point and no thousands separators. All numeric output goes
through one formatting function (shortest round-tripping representation), so
CSV and JSON renderings of the same run encode identical values and JSON
re-parses to the exact in-memory numbers.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .fluctuation import ScaleGrid
from .montecarlo import MonteCarloConfig, MonteCarloReport
from .regression import ScaleRegressionCurve

__all__ = [
    "RunConfig",
    "load_csv",
    "resolve_scale_grid",
    "CURVE_CSV_HEADER",
    "PLOT_CSV_HEADER",
    "MC_CSV_HEADER",
    "MC_SCALES_CSV_HEADER",
    "fmt",
    "curve_csv",
    "curve_plot_csv",
    "curve_json_obj",
    "curve_from_json",
    "mc_csv",
    "mc_scales_csv",
    "mc_json_obj",
    "mc_config_from_dict",
    "load_mc_config",
]

CURVE_CSV_HEADER = "scale,beta,se,ci_low,ci_high,r2,n_windows,status"
PLOT_CSV_HEADER = "scale,beta,ci_low,ci_high"
MC_CSV_HEADER = "d,mean_beta,rmse,n_excluded"
MC_SCALES_CSV_HEADER = "d,scale,mean_beta,rmse"


@dataclass(frozen=True)
class RunConfig:
    """Everything the regression front end needs for one run.

    Columns may be given as 0-based indices or header names. ``scales`` is a
    grid specification string (see resolve_scale_grid); None selects the
    default linear grid from 10 to a quarter of the series length. ``output``
    of None writes to standard output, in which case the plot companion is
    only produced when ``plot_data`` names a path explicitly.
    """

    input_path: str
    x_column: int | str = 0
    y_column: int | str = 1
    scales: str | None = None
    poly_order: int = 1
    window_mode: str = "sliding"
    confidence_level: float = 0.95
    log_x: bool = False
    log_y: bool = False
    output_format: str = "csv"
    output: str | None = None
    plot_data: str | None = None


# ---------------------------------------------------------------------------
# CSV input
# ---------------------------------------------------------------------------

def _is_float(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _column_index(spec: int | str, header: list[str] | None, width: int, which: str) -> int:
    if isinstance(spec, str) and not spec.lstrip("+-").isdigit():
        if header is None:
            raise ValueError(f"{which} column {spec!r} needs a header row, but none was found")
        names = [h.strip() for h in header]
        if spec not in names:
            raise ValueError(f"unknown {which} column {spec!r}; header has {names}")
        return names.index(spec)
    idx = int(spec)
    if not 0 <= idx < width:
        raise ValueError(f"{which} column index {idx} out of range; file has {width} columns")
    return idx


def load_csv(path, x_column: int | str = 0, y_column: int | str = 1,
             log_x: bool = False, log_y: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Read two equally long series from a CSV file.

    A header row is assumed when a column is requested by name, or when the
    first row contains any cell that does not parse as a number. Cells must
    be finite numbers; failures are reported with their 1-based file row.
    A natural log is applied per column on request, rejecting non-positive
    values.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    with open(p, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        rows = [(reader.line_num, row) for row in reader if any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"{path} contains no data")

    by_name = any(isinstance(c, str) and not str(c).lstrip("+-").isdigit()
                  for c in (x_column, y_column))
    first = rows[0][1]
    has_header = by_name or not all(_is_float(cell) for cell in first)
    header = [c.strip() for c in first] if has_header else None
    data = rows[1:] if has_header else rows
    if not data:
        raise ValueError(f"{path} has a header but no data rows")

    width = len(data[0][1])
    xi = _column_index(x_column, header, width, "x")
    yi = _column_index(y_column, header, width, "y")

    out: dict[str, list[float]] = {"x": [], "y": []}
    for line_num, row in data:
        for which, idx, log_it in (("x", xi, log_x), ("y", yi, log_y)):
            if idx >= len(row):
                raise ValueError(
                    f"row {line_num} has {len(row)} columns, need at least {idx + 1}"
                )
            cell = row[idx].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(f"cannot parse {which} value {cell!r} at row {line_num}") from None
            if not math.isfinite(value):
                raise ValueError(f"non-finite {which} value {cell!r} at row {line_num}")
            if log_it:
                if value <= 0:
                    raise ValueError(
                        f"log transform needs positive values; {which} is {value} at row {line_num}"
                    )
                value = math.log(value)
            out[which].append(value)

    if len(out["x"]) < 4:
        raise ValueError(f"{path} has {len(out['x'])} data rows; need at least 4")
    return np.asarray(out["x"]), np.asarray(out["y"])


# ---------------------------------------------------------------------------
# Scale grid specifications
# ---------------------------------------------------------------------------

def resolve_scale_grid(spec: str | None, n_obs: int, poly_order: int) -> ScaleGrid:
    """Turn a grid specification string into a validated ScaleGrid.

    Forms: ``linear:MIN:MAX:STEP`` (STEP may be ``auto``), ``log:MIN:MAX:COUNT``,
    a bare ``MIN:MAX:STEP`` (treated as linear), or an explicit comma list.
    None selects the default: linear from 10 to ``n_obs // 4`` with the step
    chosen so the grid has at most 120 points.
    """
    if spec is None:
        lo, hi = 10, n_obs // 4
        if hi < lo:
            raise ValueError(
                f"series of length {n_obs} is too short for the default grid "
                f"(needs >= 40 observations); pass an explicit scale specification"
            )
        grid = ScaleGrid.linear(lo, hi, _auto_step(lo, hi))
    else:
        text = spec.strip()
        if text.startswith("linear:") or (":" in text and not text.startswith("log:")):
            body = text.removeprefix("linear:")
            lo, hi, step = _split_spec(body, 3, spec)
            step_n = _auto_step(int(lo), int(hi)) if step == "auto" else int(step)
            grid = ScaleGrid.linear(int(lo), int(hi), step_n)
        elif text.startswith("log:"):
            lo, hi, count = _split_spec(text.removeprefix("log:"), 3, spec)
            grid = ScaleGrid.logarithmic(int(lo), int(hi), int(count))
        else:
            try:
                grid = ScaleGrid(tuple(int(part) for part in text.split(",") if part.strip()))
            except ValueError as exc:
                raise ValueError(f"bad scale specification {spec!r}: {exc}") from None
    grid.validate_for(n_obs, poly_order)
    return grid


def _split_spec(body: str, n: int, original: str) -> list[str]:
    parts = [part.strip() for part in body.split(":")]
    if len(parts) != n:
        raise ValueError(f"bad scale specification {original!r}; expected {n} colon-separated fields")
    return parts


def _auto_step(lo: int, hi: int) -> int:
    return max(1, math.ceil((hi - lo) / 119))


# ---------------------------------------------------------------------------
# Output formatting
# ---------------------------------------------------------------------------

def fmt(value) -> str:
    """One shared numeric rendering: shortest text that parses back exactly."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return ""
    return repr(v)


def _json_real(value) -> float | None:
    v = float(value)
    return None if math.isnan(v) else v


def curve_csv(curve: ScaleRegressionCurve) -> str:
    lines = [CURVE_CSV_HEADER]
    for i in range(len(curve)):
        lines.append(",".join([
            fmt(curve.scales[i]),
            fmt(curve.beta[i]),
            fmt(curve.se[i]),
            fmt(curve.ci_low[i]),
            fmt(curve.ci_high[i]),
            fmt(curve.r2[i]),
            fmt(curve.n_windows[i]),
            curve.status[i],
        ]))
    return "\n".join(lines) + "\n"


def curve_plot_csv(curve: ScaleRegressionCurve) -> str:
    """Slim companion table for plotting the estimate with its band."""
    lines = [PLOT_CSV_HEADER]
    for i in range(len(curve)):
        lines.append(",".join([
            fmt(curve.scales[i]),
            fmt(curve.beta[i]),
            fmt(curve.ci_low[i]),
            fmt(curve.ci_high[i]),
        ]))
    return "\n".join(lines) + "\n"


def curve_json_obj(curve: ScaleRegressionCurve, meta: dict) -> dict:
    records = []
    for i in range(len(curve)):
        r2 = _json_real(curve.r2[i])
        records.append({
            "scale": int(curve.scales[i]),
            "beta": _json_real(curve.beta[i]),
            "se": _json_real(curve.se[i]),
            "ci_low": _json_real(curve.ci_low[i]),
            "ci_high": _json_real(curve.ci_high[i]),
            "r2": r2,
            "intercept": _json_real(curve.intercept[i]),
            "n_windows": int(curve.n_windows[i]),
            "status": curve.status[i],
            "negative_r2": bool(r2 is not None and r2 < 0),
        })
    full_meta = {"version": __version__, **meta,
                 "confidence_level": curve.confidence_level, "df": curve.df}
    return {"meta": full_meta, "curve": records}


def curve_from_json(obj: dict) -> ScaleRegressionCurve:
    """Rebuild a curve from its JSON object; exact inverse of curve_json_obj."""
    records = obj["curve"]

    def column(key):
        return np.array([np.nan if r[key] is None else float(r[key]) for r in records])

    return ScaleRegressionCurve(
        scales=np.array([int(r["scale"]) for r in records], dtype=np.int64),
        beta=column("beta"),
        se=column("se"),
        ci_low=column("ci_low"),
        ci_high=column("ci_high"),
        r2=column("r2"),
        intercept=column("intercept"),
        n_windows=np.array([int(r["n_windows"]) for r in records], dtype=np.int64),
        status=tuple(r["status"] for r in records),
        confidence_level=float(obj["meta"]["confidence_level"]),
        df=int(obj["meta"]["df"]),
    )


def mc_csv(report: MonteCarloReport) -> str:
    lines = [MC_CSV_HEADER]
    for pt in report.points:
        lines.append(",".join([
            fmt(pt.d), fmt(pt.mean_beta), fmt(pt.rmse), fmt(pt.n_excluded),
        ]))
    return "\n".join(lines) + "\n"


def mc_scales_csv(report: MonteCarloReport) -> str:
    lines = [MC_SCALES_CSV_HEADER]
    for pt in report.points:
        for scale, mean, rmse in zip(report.config.scales, pt.scale_mean, pt.scale_rmse):
            lines.append(",".join([fmt(pt.d), fmt(scale), fmt(mean), fmt(rmse)]))
    return "\n".join(lines) + "\n"


def mc_json_obj(report: MonteCarloReport) -> dict:
    cfg = report.config
    config_echo = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    config_echo["d_sweep"] = list(cfg.d_sweep)
    config_echo["scales"] = list(cfg.scales)
    points = [{
        "d": pt.d,
        "mean_beta": pt.mean_beta,
        "rmse": pt.rmse,
        "n_excluded": pt.n_excluded,
        "scale_mean": list(pt.scale_mean),
        "scale_rmse": list(pt.scale_rmse),
    } for pt in report.points]
    return {"meta": {"version": __version__, "command": "mc", "seed": cfg.master_seed,
                     "config": config_echo},
            "report": points}


_MC_KEY_ALIASES = {"T": "length", "R": "replications"}


def mc_config_from_dict(obj: dict) -> MonteCarloConfig:
    """Build a MonteCarloConfig from parsed JSON, rejecting unknown keys."""
    known = {f.name for f in fields(MonteCarloConfig)}
    kwargs = {}
    for key, value in obj.items():
        name = _MC_KEY_ALIASES.get(key, key)
        if name not in known:
            raise ValueError(f"unknown Monte Carlo config key {key!r}; known keys: {sorted(known)}")
        if name in kwargs:
            raise ValueError(f"duplicate Monte Carlo config key {key!r}")
        kwargs[name] = value
    if "design" not in kwargs:
        raise ValueError("Monte Carlo config needs a 'design' (sim_I or sim_II)")
    if "d_sweep" in kwargs:
        kwargs["d_sweep"] = tuple(float(d) for d in kwargs["d_sweep"])
    if "scales" in kwargs:
        spec = kwargs["scales"]
        if isinstance(spec, str):
            length = int(kwargs.get("length", 1000))
            order = int(kwargs.get("poly_order", 1))
            kwargs["scales"] = resolve_scale_grid(spec, length, order).scales
        else:
            kwargs["scales"] = tuple(int(s) for s in spec)
    return MonteCarloConfig(**kwargs)


def load_mc_config(path) -> MonteCarloConfig:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    with open(p, encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return mc_config_from_dict(obj)
