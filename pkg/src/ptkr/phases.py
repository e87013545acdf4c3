"""Transport-phase classification and parameter-space sweeps.

Phases (by norm growth and momentum-space spreading):
  I   localized: bounded <p1^2>, unit norm
  II  chaotic diffusion: <p1^2> grows linearly, unit norm
  III ballistic soliton: directed current with near-constant width, norm grows
  IV  directed current with power-law width growth, norm grows
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import ObservableSchedule, TrajectoryRecord, evolve
from .errors import InconsistentFits, PtkrError
from .fitting import FitResults, analyze, time_averages
from .params import SimParams


class Phase(str, enum.Enum):
    LOCALIZED = "I"
    CHAOTIC_DIFFUSION = "II"
    BALLISTIC_SOLITON = "III"
    CURRENT_WITH_SPREADING = "IV"
    ERROR = "error"


@dataclass(frozen=True)
class ClassifierOptions:
    # Finite-time unbroken runs show O(5%) transient norm bumps, so the
    # broken/unbroken cut sits well above that but far below any real
    # exponential growth over hundreds of kicks.
    norm_delta: float = 0.1         # PT-broken iff avg norm > 1 + norm_delta
    # DL plateaus drift at ~0.1 p^2/kick while chaotic diffusion runs at
    # ~K^2/2 per kick, so an absolute slope floor separates them.
    diffusion_slope_floor: float = 1.0
    width_ratio: float = 1.2        # phase III: variance(t_f)/variance(t_f/2)


@dataclass
class PhasePoint:
    """One (gain_loss, coupling) grid cell of the phase diagram."""

    gain_loss: float
    coupling: float
    phase: Phase
    norm_time_avg: float = float("nan")
    entropy_time_avg: float = float("nan")
    plateau_level: float = float("nan")   # mean <p1^2> on the window (phase I)
    fit: FitResults = field(default_factory=FitResults)
    error: str | None = None


def classify_phase(traj: TrajectoryRecord,
                   fit: FitResults | None = None,
                   options: ClassifierOptions | None = None) -> PhasePoint:
    """Assign a transport phase from a finished trajectory and its fits."""
    if options is None:
        options = ClassifierOptions()
    if fit is None:
        fit = analyze(traj)
    norm_avg, entropy_avg = time_averages(traj)
    p = traj.params
    point = PhasePoint(p.gain_loss, p.coupling, Phase.ERROR,
                       norm_time_avg=norm_avg, entropy_time_avg=entropy_avg,
                       fit=fit)

    start, end = fit.fit_window
    mask = (traj.t >= start) & (traj.t <= end)
    mean_p1sq = float(np.mean(traj.p1_sq_mean[mask]))

    if norm_avg <= 1.0 + options.norm_delta:
        # PT-unbroken: localized vs chaotic diffusion by the late-time slope
        # of <p1^2>.
        if not np.isfinite(fit.diffusion_rate):
            raise InconsistentFits("diffusion fit missing for unbroken point")
        if abs(fit.diffusion_rate) < options.diffusion_slope_floor:
            point.phase = Phase.LOCALIZED
            point.plateau_level = mean_p1sq
        else:
            point.phase = Phase.CHAOTIC_DIFFUSION
    else:
        # PT-broken: soliton (constant width) vs power-law spreading.
        t_f = int(traj.t[-1])
        w_end = float(traj.variance[traj.t == t_f][0])
        w_half = float(traj.variance[traj.t == t_f // 2][0])
        if w_half <= 0:
            raise InconsistentFits("nonpositive width in broken phase")
        if w_end / w_half < options.width_ratio:
            point.phase = Phase.BALLISTIC_SOLITON
        else:
            point.phase = Phase.CURRENT_WITH_SPREADING
    return point


def _run_point(args) -> PhasePoint:
    gain_loss, coupling, base, schedule, options = args
    params = base.with_values(gain_loss=gain_loss, coupling=coupling)
    try:
        traj = evolve(params, schedule)
        return classify_phase(traj, options=options)
    except PtkrError as exc:
        return PhasePoint(gain_loss, coupling, Phase.ERROR,
                          error=f"{type(exc).__name__}: {exc}")


def sweep_phase_diagram(grid, base_params: SimParams,
                        schedule: ObservableSchedule | None = None,
                        options: ClassifierOptions | None = None,
                        workers: int = 1) -> list[PhasePoint]:
    """Classify every (gain_loss, coupling) pair in the grid.

    Points run independently (optionally in a process pool); the output is
    always ordered by (gain_loss, coupling) regardless of worker count.
    """
    grid = sorted((float(g), float(e)) for g, e in grid)
    if not grid:
        raise ValueError("empty sweep grid")
    if schedule is None:
        schedule = ObservableSchedule()
    if options is None:
        options = ClassifierOptions()
    jobs = [(g, e, base_params, schedule, options) for g, e in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_point, jobs))
    return [_run_point(j) for j in jobs]
