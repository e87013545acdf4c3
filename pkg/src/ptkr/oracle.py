"""Dense-matrix ground truth for the spectral engine on small lattices.

The one-period operator is assembled as an explicit (M^2 x M^2) matrix using
an independently constructed angle <-> momentum transform (plain complex
exponentials, no FFT), so a bug shared with the fast path cannot cancel out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import ObservableSchedule, TrajectoryRecord
from .errors import LatticeTooLarge, ZeroNorm
from .observables import linear_entropy, momentum_marginal, momentum_moment
from .params import SimParams
from .state import WaveFunction, edge_probability

MAX_DENSE_LATTICE = 32


@dataclass(frozen=True)
class DenseFloquet:
    matrix: np.ndarray    # (M^2, M^2), flattened row-major over (m, n)
    params: SimParams


def _mode_transform(params: SimParams) -> np.ndarray:
    """Unitary single-rotor matrix T[k, m] = exp(i m theta_k) / sqrt(M)."""
    theta = params.angles
    modes = params.mode_numbers.astype(np.float64)
    return np.exp(1j * np.outer(theta, modes)) / math.sqrt(params.lattice_size)


def build_dense(params: SimParams) -> DenseFloquet:
    m = params.lattice_size
    if m > MAX_DENSE_LATTICE:
        raise LatticeTooLarge(f"dense operator limited to M <= "
                              f"{MAX_DENSE_LATTICE}, got {m}")
    theta = params.angles
    k, lam = params.kick_strength, params.gain_loss
    v = k * (np.cos(theta) + 1j * lam * np.sin(theta))
    potential = v[:, None] + v[None, :] \
        + params.coupling * np.cos(theta[:, None] - theta[None, :])
    kick_diag = np.exp(-1j * potential / params.hbar_eff).reshape(-1)

    t1 = _mode_transform(params)
    two_rotor = np.kron(t1, t1)                      # momentum -> angles
    kick_op = two_rotor.conj().T @ (kick_diag[:, None] * two_rotor)

    modes = params.mode_numbers.astype(np.float64)
    kinetic = (modes[:, None] ** 2 + modes[None, :] ** 2).reshape(-1)
    free_diag = np.exp(-0.5j * params.hbar_eff * kinetic)
    return DenseFloquet(free_diag[:, None] * kick_op, params)


def dense_step(dense: DenseFloquet, state: WaveFunction) -> float:
    """Apply the dense operator with the engine's renormalization protocol."""
    m = dense.params.lattice_size
    vec = dense.matrix @ state.amplitudes.reshape(-1)
    n = float(np.sum(np.abs(vec) ** 2))
    if n <= 0.0 or not math.isfinite(n):
        raise ZeroNorm(f"dense state norm {n} at kick {state.kick_index}")
    state.amplitudes = (vec / math.sqrt(n)).reshape(m, m)
    state.log_norm += math.log(n)
    state.kick_index += 1
    return n


def dense_evolve(dense: DenseFloquet, kicks: int,
                 schedule: ObservableSchedule | None = None,
                 state_hook=None) -> TrajectoryRecord:
    """Evolve the ground product state by repeated dense matrix application."""
    from .state import ground_product_state

    if schedule is None:
        schedule = ObservableSchedule()
    params = dense.params
    state = ground_product_state(params)
    hbar = params.hbar_eff

    t = np.arange(kicks + 1)
    p1 = np.empty(kicks + 1)
    p1sq = np.empty(kicks + 1)
    log_norm = np.empty(kicks + 1)
    entropy = np.full(kicks + 1, np.nan)
    leak = np.zeros(kicks + 1, dtype=bool)
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
    for i in range(1, kicks + 1):
        dense_step(dense, state)
        record(i)

    return TrajectoryRecord(params, t, p1, p1sq, p1sq - p1 ** 2,
                            log_norm, entropy, leak, marginals)


def dense_partial_trace(state: WaveFunction, particle: int = 1) -> np.ndarray:
    """Reduced density matrix by explicit summation; test support only."""
    a = state.amplitudes
    if particle == 1:
        return a @ a.conj().T
    return a.T @ a.conj()
