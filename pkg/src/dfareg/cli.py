"""Command-line front end: regress, simulate, and mc verbs."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .arfima import ArfimaSpec, RegressionSimSpec, generate_arfima, simulate_regression_pair
from .fluctuation import WINDOW_MODES, DetrendConfig
from .io import (
    RunConfig,
    curve_csv,
    curve_json_obj,
    curve_plot_csv,
    fmt,
    load_csv,
    load_mc_config,
    mc_csv,
    mc_json_obj,
    mc_scales_csv,
    resolve_scale_grid,
)
from .montecarlo import run_design
from .regression import regression_curve

__all__ = ["main", "run_regression_command", "run_montecarlo_command"]


def _fail(exc: BaseException) -> int:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    print(json.dumps(payload), file=sys.stderr)
    return 1


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def run_regression_command(config: RunConfig) -> int:
    """Load a CSV pair, fit the per-scale regression, write the outputs.

    Per-scale degeneracies are reported in the status column and do not fail
    the run; only load/validation problems produce a nonzero exit. All
    rendering happens before any file is written, so failures leave no
    partial outputs behind.
    """
    try:
        x, y = load_csv(config.input_path, config.x_column, config.y_column,
                        config.log_x, config.log_y)
        grid = resolve_scale_grid(config.scales, x.size, config.poly_order)
        cfg = DetrendConfig(config.poly_order, config.window_mode)
        curve = regression_curve(x, y, grid, cfg, config.confidence_level)

        meta = {
            "command": "regress",
            "input": str(config.input_path),
            "x_column": config.x_column,
            "y_column": config.y_column,
            "log_x": config.log_x,
            "log_y": config.log_y,
            "scales": [int(s) for s in grid],
            "poly_order": config.poly_order,
            "window_mode": config.window_mode,
            "n_obs": int(x.size),
        }
        if config.output_format == "json":
            body = json.dumps(curve_json_obj(curve, meta), indent=2) + "\n"
        else:
            body = curve_csv(curve)
        plot_body = curve_plot_csv(curve)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(exc)

    if config.output is None:
        sys.stdout.write(body)
        if config.plot_data is not None:
            _write_text(config.plot_data, plot_body)
    else:
        _write_text(config.output, body)
        plot_path = config.plot_data or str(Path(config.output).with_suffix(".plot.csv"))
        _write_text(plot_path, plot_body)
    return 0


def run_montecarlo_command(config_path, output_dir=".", workers: int = 1,
                           seed: int | None = None) -> int:
    """Run a simulation study from a JSON config and write its report files."""
    try:
        config = load_mc_config(config_path)
        if seed is not None:
            config = replace(config, master_seed=int(seed))
        report = run_design(config, workers=workers)
        summary = mc_csv(report)
        per_scale = mc_scales_csv(report)
        body = json.dumps(mc_json_obj(report), indent=2) + "\n"
    except (OSError, ValueError, RuntimeError) as exc:
        return _fail(exc)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_text(str(out / "report.csv"), summary)
    _write_text(str(out / "report_scales.csv"), per_scale)
    _write_text(str(out / "report.json"), body)
    for pt in report.points:
        print(f"d={fmt(pt.d)} mean_beta={fmt(pt.mean_beta)} rmse={fmt(pt.rmse)} "
              f"excluded={pt.n_excluded}")
    print(f"wrote {out / 'report.csv'}, {out / 'report_scales.csv'}, {out / 'report.json'}")
    return 0


def _run_simulate_command(args) -> int:
    try:
        if args.kind == "arfima":
            if args.d is None:
                raise ValueError("simulate --kind arfima needs --d")
            spec = ArfimaSpec(d=args.d, length=args.length, innovation_sd=args.sd,
                              seed=args.seed, burn_in=args.burn_in)
            series = generate_arfima(spec)
            lines = ["x"] + [fmt(v) for v in series]
        else:
            if args.d_x is None:
                raise ValueError("simulate --kind pair needs --d-x")
            spec = RegressionSimSpec(
                alpha=args.alpha,
                beta=args.beta,
                x_spec=ArfimaSpec(d=args.d_x, length=args.length, innovation_sd=args.sd,
                                  burn_in=args.burn_in),
                error_kind=args.error,
                error_d=args.d_u,
                seed=args.seed,
            )
            x, y = simulate_regression_pair(spec)
            lines = ["x,y"] + [f"{fmt(a)},{fmt(b)}" for a, b in zip(x, y)]
        body = "\n".join(lines) + "\n"
    except ValueError as exc:
        return _fail(exc)

    if args.output is None:
        sys.stdout.write(body)
    else:
        _write_text(args.output, body)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfareg",
        description="Scale-dependent regression between two time series "
                    "via detrended fluctuation analysis.",
    )
    parser.add_argument("--version", action="version", version=f"dfareg {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    reg = sub.add_parser("regress", help="per-scale regression of a CSV pair")
    reg.add_argument("input", help="CSV file with the two series")
    reg.add_argument("--x-col", default="0", help="regressor column name or 0-based index")
    reg.add_argument("--y-col", default="1", help="response column name or 0-based index")
    reg.add_argument("--scales", default=None,
                     help="linear:MIN:MAX:STEP (STEP may be 'auto'), log:MIN:MAX:COUNT, "
                          "or comma list; default linear:10:T/4:auto")
    reg.add_argument("--order", type=int, default=1, help="detrending polynomial order")
    reg.add_argument("--mode", choices=WINDOW_MODES, default="sliding")
    reg.add_argument("--level", type=float, default=0.95, help="confidence level in (0,1)")
    reg.add_argument("--log-x", action="store_true", help="natural log of the x column")
    reg.add_argument("--log-y", action="store_true", help="natural log of the y column")
    reg.add_argument("--format", choices=("csv", "json"), default="csv")
    reg.add_argument("--output", default=None, help="output path (default: stdout)")
    reg.add_argument("--plot-data", default=None,
                     help="path for the scale/beta/band companion table")
    reg.set_defaults(func=_dispatch_regress)

    sim = sub.add_parser("simulate", help="generate long-memory series or pairs")
    sim.add_argument("--kind", choices=("arfima", "pair"), required=True)
    sim.add_argument("--length", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--sd", type=float, default=1.0, help="innovation standard deviation")
    sim.add_argument("--burn-in", type=int, default=0)
    sim.add_argument("--d", type=float, default=None, help="memory parameter (kind=arfima)")
    sim.add_argument("--d-x", type=float, default=None, help="regressor memory (kind=pair)")
    sim.add_argument("--alpha", type=float, default=1.0)
    sim.add_argument("--beta", type=float, default=1.0)
    sim.add_argument("--error", choices=("gaussian", "arfima"), default="gaussian")
    sim.add_argument("--d-u", type=float, default=0.0, help="error memory when --error arfima")
    sim.add_argument("--output", default=None, help="output path (default: stdout)")
    sim.set_defaults(func=_run_simulate_command)

    mc = sub.add_parser("mc", help="run a Monte Carlo study from a JSON config")
    mc.add_argument("config", help="JSON configuration file")
    mc.add_argument("--output-dir", default=".", help="directory for the report files")
    mc.add_argument("--workers", type=int, default=1)
    mc.add_argument("--seed", type=int, default=None, help="override the config's master seed")
    mc.set_defaults(func=_dispatch_mc)

    return parser


def _dispatch_regress(args) -> int:
    config = RunConfig(
        input_path=args.input,
        x_column=args.x_col,
        y_column=args.y_col,
        scales=args.scales,
        poly_order=args.order,
        window_mode=args.mode,
        confidence_level=args.level,
        log_x=args.log_x,
        log_y=args.log_y,
        output_format=args.format,
        output=args.output,
        plot_data=args.plot_data,
    )
    return run_regression_command(config)


def _dispatch_mc(args) -> int:
    return run_montecarlo_command(args.config, args.output_dir, args.workers, args.seed)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
