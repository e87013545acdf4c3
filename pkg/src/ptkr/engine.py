"""One-period Floquet evolution via the split-operator spectral method.

Each period applies the kick factor (diagonal in the angle representation,
reached by one inverse 2D FFT) followed by the free kinetic factor (diagonal
in momentum), then renormalizes.  Both the single-rotor potentials and the
coupling depend only on angles, so a single transform pair per kick is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .observables import linear_entropy, momentum_marginal, momentum_moment
from .params import SimParams
from .state import WaveFunction, edge_probability, ground_product_state, normalize


@dataclass(frozen=True)
class KickPhaseTable:
    """Precomputed per-period factors on the M x M lattice."""

    kick_factor: np.ndarray   # angle grid, exp{-(i/hbar)[V(th1)+V(th2)+coupling]}
    free_factor: np.ndarray   # momentum grid, exp{-i hbar (m^2+n^2)/2}
    params: SimParams


def build_tables(params: SimParams) -> KickPhaseTable:
    theta = params.angles
    k, lam = params.kick_strength, params.gain_loss
    v = k * (np.cos(theta) + 1j * lam * np.sin(theta))
    phase = v[:, None] + v[None, :] \
        + params.coupling * np.cos(theta[:, None] - theta[None, :])
    kick = np.exp(-1j * phase / params.hbar_eff)

    modes = params.mode_numbers.astype(np.float64)
    kinetic = modes[:, None] ** 2 + modes[None, :] ** 2
    free = np.exp(-0.5j * params.hbar_eff * kinetic)
    return KickPhaseTable(kick, free, params)


def _check_dims(state: WaveFunction, tables: KickPhaseTable):
    if state.amplitudes.shape != tables.kick_factor.shape:
        raise DimensionMismatch(
            f"state {state.amplitudes.shape} vs tables "
            f"{tables.kick_factor.shape}")


def apply_kick(state: WaveFunction, tables: KickPhaseTable) -> WaveFunction:
    """Multiply by the kick factor in the angle representation, in place."""
    _check_dims(state, tables)
    angle_amps = np.fft.ifft2(state.amplitudes)
    angle_amps *= tables.kick_factor
    state.amplitudes = np.fft.fft2(angle_amps)
    return state


def apply_free(state: WaveFunction, tables: KickPhaseTable) -> WaveFunction:
    """Multiply by the kinetic phase in the momentum representation, in place."""
    _check_dims(state, tables)
    state.amplitudes *= tables.free_factor
    return state


def step(state: WaveFunction, tables: KickPhaseTable) -> float:
    """Advance one period (kick, then free flight), renormalizing.

    Returns the one-period norm factor; exp(state.log_norm) reconstructs the
    physical norm accumulated since t=0.
    """
    apply_kick(state, tables)
    apply_free(state, tables)
    factor = normalize(state)
    state.kick_index += 1
    return factor


@dataclass(frozen=True)
class ObservableSchedule:
    """Which observables to record at which kicks.

    Momentum moments and the norm are recorded every kick (cheap); the
    entanglement entropy only every entropy_every kicks (cubic cost), and
    full momentum marginals only at the listed kick indices.
    """

    entropy_every: int = 5
    marginal_times: tuple = ()
    leak_threshold: float = 1e-8


@dataclass
class TrajectoryRecord:
    """Per-kick time series of a single evolution run.

    The accumulated norm is stored as its logarithm; in the PT-broken
    regime exp(log_norm) overflows a double within tens of kicks at large
    gain/loss, while the log stays perfectly representable.
    """

    params: SimParams
    t: np.ndarray                 # kick indices 0..n_kicks
    p1_mean: np.ndarray
    p1_sq_mean: np.ndarray
    variance: np.ndarray          # <p1^2> - <p1>^2
    log_norm: np.ndarray          # ln of accumulated norm N(t)
    linear_entropy: np.ndarray    # NaN where not scheduled
    leak_flag: np.ndarray         # bool, truncation guard tripped by then
    marginals: dict = field(default_factory=dict)  # kick -> P(p), FFT order

    @property
    def norm_total(self) -> np.ndarray:
        """N(t) = exp(log_norm); saturates to inf instead of raising."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_norm)

    @property
    def truncation_leak(self) -> bool:
        return bool(self.leak_flag[-1])


def evolve(params: SimParams, schedule: ObservableSchedule | None = None,
           state_hook=None) -> TrajectoryRecord:
    """Run n_kicks periods from the ground product state, recording as scheduled.

    state_hook(state) is called after each recorded kick (tests use it to
    inspect raw amplitudes); it must not mutate the state.
    """
    if schedule is None:
        schedule = ObservableSchedule()
    tables = build_tables(params)
    state = ground_product_state(params)
    n = params.n_kicks
    hbar = params.hbar_eff

    t = np.arange(n + 1)
    p1 = np.empty(n + 1)
    p1sq = np.empty(n + 1)
    log_norm = np.empty(n + 1)
    entropy = np.full(n + 1, np.nan)
    leak = np.zeros(n + 1, dtype=bool)
    marginals = {}

    leaked = False

    def record(i):
        nonlocal leaked
        p1[i] = momentum_moment(state, 1, 1, hbar)
        p1sq[i] = momentum_moment(state, 1, 2, hbar)
        log_norm[i] = state.log_norm
        if schedule.entropy_every and i % schedule.entropy_every == 0:
            entropy[i] = linear_entropy(state)
        if i in schedule.marginal_times:
            marginals[i] = momentum_marginal(state, 1)
        if not leaked and edge_probability(state) > schedule.leak_threshold:
            leaked = True
        leak[i] = leaked
        if state_hook is not None:
            state_hook(state)

    record(0)
    for i in range(1, n + 1):
        step(state, tables)
        record(i)

    return TrajectoryRecord(params, t, p1, p1sq, p1sq - p1 ** 2,
                            log_norm, entropy, leak, marginals)


# Single-rotor path: used by the factorization property (at zero coupling the
# two-rotor dynamics is the tensor square of this evolution).

def single_rotor_tables(params: SimParams):
    theta = params.angles
    v = params.kick_strength * (np.cos(theta)
                                + 1j * params.gain_loss * np.sin(theta))
    kick = np.exp(-1j * v / params.hbar_eff)
    modes = params.mode_numbers.astype(np.float64)
    free = np.exp(-0.5j * params.hbar_eff * modes ** 2)
    return kick, free


def single_rotor_step(amps: np.ndarray, kick: np.ndarray,
                      free: np.ndarray) -> tuple[np.ndarray, float]:
    """One period for a lone rotor; returns (normalized amplitudes, factor)."""
    amps = np.fft.fft(np.fft.ifft(amps) * kick) * free
    factor = float(np.sum(np.abs(amps) ** 2))
    return amps / math.sqrt(factor), factor
