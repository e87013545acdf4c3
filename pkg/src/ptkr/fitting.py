"""Least-squares extraction of transport laws from trajectory records.

All fitters are plain linear regressions in the appropriate coordinates
(linear, log-log, semi-log); the moment-based Gaussian fit is exact on its
own model family by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import TrajectoryRecord
from .errors import NonpositiveWidth, WindowTooShort

MIN_WINDOW_SAMPLES = 10


def default_window(traj: TrajectoryRecord) -> tuple[int, int]:
    """Last half of the trajectory; excludes the initial transient."""
    n = int(traj.t[-1])
    return n // 2, n


def _window_slice(traj: TrajectoryRecord, window: tuple[int, int] | None):
    if window is None:
        window = default_window(traj)
    start, end = int(window[0]), int(window[1])
    mask = (traj.t >= start) & (traj.t <= end)
    if mask.sum() < MIN_WINDOW_SAMPLES:
        raise WindowTooShort(
            f"window [{start}, {end}] has {int(mask.sum())} samples, "
            f"need {MIN_WINDOW_SAMPLES}")
    return mask, (start, end)


def linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Ordinary least squares y = a*x + b; returns (a, b, r_squared)."""
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return float(a), float(b), r2


def fit_current_rate(traj: TrajectoryRecord,
                     window: tuple[int, int] | None = None):
    """Directed-current rate from <p1> vs t.

    Returns (rate, r_squared, endpoint_rate) where endpoint_rate is the
    cross-check estimator <p1(t_f)> / t_f.
    """
    mask, (start, end) = _window_slice(traj, window)
    t = traj.t[mask].astype(float)
    rate, _, r2 = linear_fit(t, traj.p1_mean[mask])
    endpoint = float(traj.p1_mean[traj.t == end][0]) / end if end > 0 else 0.0
    return rate, r2, endpoint


def fit_power_law_width(traj: TrajectoryRecord,
                        window: tuple[int, int] | None = None):
    """Power law variance(t) = prefactor * t^exponent, fitted in log-log.

    Returns (prefactor, exponent, r_squared, endpoint_prefactor) with
    endpoint_prefactor = variance(t_f) / t_f^exponent.
    """
    mask, (start, end) = _window_slice(traj, window)
    mask = mask & (traj.t > 0)
    width = traj.variance[mask]
    if np.any(width <= 0):
        raise NonpositiveWidth("variance must be positive on the fit window")
    t = traj.t[mask].astype(float)
    exponent, log_pref, r2 = linear_fit(np.log(t), np.log(width))
    end_width = float(traj.variance[traj.t == end][0])
    endpoint_pref = end_width / end ** exponent
    return float(np.exp(log_pref)), exponent, r2, endpoint_pref


def fit_norm_growth(traj: TrajectoryRecord,
                    window: tuple[int, int] | None = None):
    """Exponential norm growth rate from ln N(t) vs t; returns (rate, r2)."""
    mask, _ = _window_slice(traj, window)
    t = traj.t[mask].astype(float)
    rate, _, r2 = linear_fit(t, traj.log_norm[mask])
    return rate, r2


def fit_gaussian(marginal: np.ndarray, momenta: np.ndarray):
    """Moment-based Gaussian fit of a momentum distribution.

    Model: P(p) proportional to exp(-(p - center)^2 / width), so the
    distribution variance equals width / 2.  Returns (center, width,
    goodness) where goodness is the L2 distance between the input and the
    implied discrete Gaussian; large values flag non-Gaussian states.
    """
    marginal = np.asarray(marginal, dtype=float)
    total = marginal.sum()
    prob = marginal / total
    center = float(np.sum(momenta * prob))
    width = 2.0 * float(np.sum((momenta - center) ** 2 * prob))
    model = np.exp(-(momenta - center) ** 2 / width) if width > 0 \
        else (momenta == center).astype(float)
    model /= model.sum()
    goodness = float(np.sqrt(np.sum((prob - model) ** 2)))
    return center, width, goodness


def time_averages(traj: TrajectoryRecord) -> tuple[float, float]:
    """Time-averaged norm and linear entropy over kicks 1..t_M.

    The entropy average uses only the scheduled samples; NaN when none were
    recorded.
    """
    if len(traj.t) < 2:
        raise WindowTooShort("trajectory has no kicks past t=0")
    with np.errstate(over="ignore"):
        norm_avg = float(np.mean(np.exp(traj.log_norm[1:])))
    s = traj.linear_entropy[1:]
    s = s[~np.isnan(s)]
    entropy_avg = float(np.mean(s)) if s.size else float("nan")
    return norm_avg, entropy_avg


@dataclass
class FitResults:
    """All scalar laws extracted from one trajectory."""

    current_rate: float = float("nan")        # D
    current_r2: float = float("nan")
    current_endpoint: float = float("nan")    # <p1(t_f)>/t_f
    width_prefactor: float = float("nan")     # eta
    width_exponent: float = float("nan")      # alpha
    width_r2: float = float("nan")
    width_endpoint: float = float("nan")      # variance(t_f)/t_f^alpha
    norm_growth_rate: float = float("nan")    # per-kick rate of ln N
    norm_r2: float = float("nan")
    diffusion_rate: float = float("nan")      # slope of <p1^2> vs t (phase II)
    diffusion_r2: float = float("nan")
    gaussian_center: float = float("nan")
    gaussian_width: float = float("nan")
    gaussian_goodness: float = float("nan")
    fit_window: tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["fit_window"] = list(self.fit_window)
        return d


def analyze(traj: TrajectoryRecord,
            window: tuple[int, int] | None = None) -> FitResults:
    """Run every applicable fitter on a trajectory."""
    if window is None:
        window = default_window(traj)
    res = FitResults(fit_window=tuple(window))
    res.current_rate, res.current_r2, res.current_endpoint = \
        fit_current_rate(traj, window)
    res.norm_growth_rate, res.norm_r2 = fit_norm_growth(traj, window)
    mask, _ = _window_slice(traj, window)
    t = traj.t[mask].astype(float)
    res.diffusion_rate, _, res.diffusion_r2 = \
        linear_fit(t, traj.p1_sq_mean[mask])
    try:
        (res.width_prefactor, res.width_exponent,
         res.width_r2, res.width_endpoint) = fit_power_law_width(traj, window)
    except NonpositiveWidth:
        pass
    if traj.marginals:
        latest = max(traj.marginals)
        momenta = np.fft.fftfreq(traj.params.lattice_size,
                                 d=1.0 / traj.params.lattice_size) \
            * traj.params.hbar_eff
        (res.gaussian_center, res.gaussian_width,
         res.gaussian_goodness) = fit_gaussian(traj.marginals[latest], momenta)
    return res
