"""Command-line front end.

Subcommands:
  run    single run or (lambda, epsilon) sweep from a config file
  fit    re-fit existing trajectory files with new windows
  check  fast self-verification against the dense oracle at M=16

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io
from .config import RunConfig, apply_overrides
from .engine import evolve
from .errors import ParseError, PtkrError, ValidationError
from .fitting import analyze
from .phases import classify_phase

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _load_config(args) -> RunConfig:
    text = ""
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
    cfg = apply_overrides(text, args.set or [])
    if args.out:
        cfg.out_dir = args.out
    if args.workers:
        cfg.workers = args.workers
    return cfg


def _simulate_point(job):
    gain_loss, coupling, cfg = job
    params = cfg.params.with_values(gain_loss=gain_loss, coupling=coupling)
    try:
        traj = evolve(params, cfg.schedule)
        return (gain_loss, coupling, traj, None)
    except PtkrError as exc:
        return (gain_loss, coupling, None, f"{type(exc).__name__}: {exc}")


def cmd_run(args) -> int:
    cfg = _load_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    jobs = [(g, e, cfg) for g, e in cfg.grid]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_simulate_point, jobs))
    else:
        results = [_simulate_point(j) for j in jobs]

    fit_entries = []
    points = []
    failed = False
    for gain_loss, coupling, traj, error in results:
        entry = {"lambda": gain_loss, "epsilon": coupling}
        if error is not None:
            failed = True
            entry["error"] = error
            fit_entries.append(entry)
            print(f"error at lambda={gain_loss} epsilon={coupling}: {error}",
                  file=sys.stderr)
            continue
        io.write_trajectory(traj, cfg.out_dir, cfg.output_format)
        for kick in sorted(traj.marginals):
            io.write_marginal(traj, kick, cfg.out_dir, cfg.output_format)
        window = cfg.fit_window(traj.params.n_kicks)
        fits = analyze(traj, window)
        point = classify_phase(traj, fits, cfg.classifier)
        entry["fit"] = fits.to_dict()
        entry["phase"] = point.phase.value
        entry["norm_time_avg"] = point.norm_time_avg
        entry["entropy_time_avg"] = point.entropy_time_avg
        entry["truncation_leak"] = traj.truncation_leak
        fit_entries.append(entry)
        points.append(point)

    provenance = {
        "fit_window": list(cfg.fit_window(cfg.params.n_kicks)),
        "pt_delta": cfg.classifier.norm_delta,
        "diffusion_slope_floor": cfg.classifier.diffusion_slope_floor,
        "width_ratio": cfg.classifier.width_ratio,
        "leak_threshold": cfg.schedule.leak_threshold,
    }
    io.write_fits(fit_entries, cfg.out_dir, provenance)
    if cfg.is_sweep:
        io.write_phase_diagram(points, cfg.out_dir, cfg.output_format)
    if failed and not cfg.is_sweep:
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_fit(args) -> int:
    cfg = _load_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    entries = []
    for path in args.trajectory:
        traj = io.read_trajectory(path)
        window = cfg.fit_window(traj.params.n_kicks)
        fits = analyze(traj, window)
        point = classify_phase(traj, fits, cfg.classifier)
        entries.append({"source": path,
                        "lambda": traj.params.gain_loss,
                        "epsilon": traj.params.coupling,
                        "fit": fits.to_dict(),
                        "phase": point.phase.value,
                        "norm_time_avg": point.norm_time_avg,
                        "entropy_time_avg": point.entropy_time_avg})
    provenance = {"fit_start": cfg.fit_start, "fit_end": cfg.fit_end,
                  "pt_delta": cfg.classifier.norm_delta}
    io.write_fits(entries, cfg.out_dir, provenance)
    return EXIT_OK


def cmd_check(args) -> int:
    from .selfcheck import run_selfcheck
    ok = run_selfcheck(verbose=True)
    return EXIT_OK if ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptkr",
        description="Coupled kicked rotors with a PT-symmetric kicking "
                    "potential: evolution, fits and phase diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to key=value config file")
    common.add_argument("--out", help="output directory (overrides config)")
    common.add_argument("--workers", type=int,
                        help="worker processes (overrides config)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a single config key")

    p_run = sub.add_parser("run", parents=[common],
                           help="run a single simulation or a sweep")
    p_run.set_defaults(func=cmd_run)

    p_fit = sub.add_parser("fit", parents=[common],
                           help="re-fit stored trajectory files")
    p_fit.add_argument("trajectory", nargs="+",
                       help="trajectory files written by `ptkr run`")
    p_fit.set_defaults(func=cmd_fit)

    p_check = sub.add_parser("check",
                             help="verify the engine against the dense "
                                  "oracle at M=16")
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PtkrError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
