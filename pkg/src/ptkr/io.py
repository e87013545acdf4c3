"""Serialization of trajectories, fits and phase diagrams.

All numerics are written with 17 significant digits so files round-trip to
the double they came from.  Trajectory files start with a `#` header line
carrying the run parameters, which lets `ptkr fit` rebuild the record.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .engine import TrajectoryRecord
from .errors import ParseError
from .params import SimParams
from .phases import PhasePoint

FMT = "%.17g"

TRAJECTORY_COLUMNS = ["t", "p1_mean", "p1_sq_mean", "variance",
                      "norm_total", "linear_entropy", "leak_flag"]


def _tag(value: float) -> str:
    return f"{value:.6f}"


def trajectory_filename(gain_loss: float, coupling: float, fmt: str) -> str:
    return f"trajectory_{_tag(gain_loss)}_{_tag(coupling)}.{fmt}"


def marginal_filename(gain_loss: float, coupling: float, kick: int,
                      fmt: str) -> str:
    return f"marginal_{_tag(gain_loss)}_{_tag(coupling)}_t{kick}.{fmt}"


def _params_header(params: SimParams) -> str:
    return ("# kick_strength=%s lambda=%s epsilon=%s hbar_eff=%s "
            "lattice_size=%d n_kicks=%d"
            % (FMT % params.kick_strength, FMT % params.gain_loss,
               FMT % params.coupling, FMT % params.hbar_eff,
               params.lattice_size, params.n_kicks))


def _trajectory_rows(traj: TrajectoryRecord):
    for i in range(len(traj.t)):
        yield [int(traj.t[i]), FMT % traj.p1_mean[i],
               FMT % traj.p1_sq_mean[i], FMT % traj.variance[i],
               FMT % traj.norm_total[i],
               "" if np.isnan(traj.linear_entropy[i])
               else FMT % traj.linear_entropy[i],
               int(traj.leak_flag[i])]


def write_trajectory(traj: TrajectoryRecord, directory: str,
                     fmt: str = "csv") -> str:
    p = traj.params
    path = os.path.join(directory,
                        trajectory_filename(p.gain_loss, p.coupling, fmt))
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(_params_header(p) + "\n")
            writer = csv.writer(fh)
            writer.writerow(TRAJECTORY_COLUMNS)
            writer.writerows(_trajectory_rows(traj))
    else:
        payload = {
            "params": {"kick_strength": p.kick_strength,
                       "lambda": p.gain_loss, "epsilon": p.coupling,
                       "hbar_eff": p.hbar_eff, "lattice_size": p.lattice_size,
                       "n_kicks": p.n_kicks},
            "columns": TRAJECTORY_COLUMNS,
            "rows": [[float(x) if x != "" else None for x in row]
                     for row in _trajectory_rows(traj)],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
    return path


def read_trajectory(path: str) -> TrajectoryRecord:
    """Rebuild a TrajectoryRecord from a file written by write_trajectory."""
    if path.endswith(".json"):
        with open(path) as fh:
            payload = json.load(fh)
        meta = payload["params"]
        rows = payload["rows"]
    else:
        with open(path) as fh:
            header = fh.readline()
            if not header.startswith("#"):
                raise ParseError(f"{path}: missing parameter header")
            meta = {}
            for item in header[1:].split():
                key, _, raw = item.partition("=")
                meta[key] = float(raw)
            reader = csv.reader(fh)
            names = next(reader)
            if names != TRAJECTORY_COLUMNS:
                raise ParseError(f"{path}: unexpected columns {names}")
            rows = [[float(x) if x != "" else None for x in row]
                    for row in reader]
    params = SimParams(kick_strength=float(meta["kick_strength"]),
                       gain_loss=float(meta["lambda"]),
                       coupling=float(meta["epsilon"]),
                       hbar_eff=float(meta["hbar_eff"]),
                       lattice_size=int(meta["lattice_size"]),
                       n_kicks=int(meta["n_kicks"]))
    data = np.array([[np.nan if x is None else x for x in row]
                     for row in rows], dtype=float)
    with np.errstate(divide="ignore"):
        log_norm = np.log(data[:, 4])
    return TrajectoryRecord(
        params, data[:, 0].astype(int), data[:, 1], data[:, 2], data[:, 3],
        log_norm, data[:, 5], data[:, 6].astype(bool))


def write_marginal(traj: TrajectoryRecord, kick: int, directory: str,
                   fmt: str = "csv") -> str:
    p = traj.params
    path = os.path.join(directory,
                        marginal_filename(p.gain_loss, p.coupling, kick, fmt))
    m = p.lattice_size
    modes = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    order = np.argsort(modes)
    prob = traj.marginals[kick]
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["m", "p", "prob"])
            for i in order:
                writer.writerow([int(modes[i]), FMT % (modes[i] * p.hbar_eff),
                                 FMT % prob[i]])
    else:
        payload = {"columns": ["m", "p", "prob"],
                   "rows": [[int(modes[i]), modes[i] * p.hbar_eff,
                             float(prob[i])] for i in order]}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
    return path


def write_fits(entries: list[dict], directory: str, provenance: dict) -> str:
    path = os.path.join(directory, "fits.json")
    with open(path, "w") as fh:
        json.dump({"provenance": provenance, "fits": entries}, fh, indent=1)
    return path


def write_phase_diagram(points: list[PhasePoint], directory: str,
                        fmt: str = "csv") -> str:
    path = os.path.join(directory, f"phase_diagram.{fmt}")
    rows = [[FMT % pt.gain_loss, FMT % pt.coupling, pt.phase.value,
             FMT % pt.norm_time_avg, FMT % pt.entropy_time_avg,
             pt.error or ""] for pt in points]
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["lambda", "epsilon", "phase", "norm_time_avg",
                             "entropy_time_avg", "error"])
            writer.writerows(rows)
    else:
        payload = {"columns": ["lambda", "epsilon", "phase", "norm_time_avg",
                               "entropy_time_avg", "error"],
                   "rows": rows}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
    return path
