"""Two-rotor wavefunction container and norm bookkeeping.

The amplitude matrix psi[m, n] (axis 0 = rotor 1, axis 1 = rotor 2) is kept
normalized at all times; the total probability accumulated since t=0 is
carried separately as log_norm so that exponential norm growth in the
PT-broken regime never overflows the amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroNorm
from .params import SimParams


@dataclass
class WaveFunction:
    amplitudes: np.ndarray          # complex (M, M), FFT mode ordering
    log_norm: float = 0.0           # ln of total probability divided out
    kick_index: int = 0

    @property
    def lattice_size(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def total_norm(self) -> float:
        """Physical norm N(t) = exp(log_norm) * current (unit) norm."""
        return math.exp(self.log_norm) * norm(self)

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.amplitudes.copy(), self.log_norm,
                            self.kick_index)


def ground_product_state(params: SimParams) -> WaveFunction:
    """Product of the two single-rotor zero-momentum modes."""
    m = params.lattice_size
    amp = np.zeros((m, m), dtype=np.complex128)
    amp[0, 0] = 1.0
    return WaveFunction(amp)


def norm(state: WaveFunction) -> float:
    """Sum of |psi|^2 over the whole lattice."""
    return float(np.sum(np.abs(state.amplitudes) ** 2))


def normalize(state: WaveFunction) -> float:
    """Rescale to unit norm in place; returns the consumed norm factor.

    The factor is accumulated into log_norm, so exp(log_norm) reconstructs
    the physical norm at any kick.
    """
    n = norm(state)
    if n <= 0.0 or not math.isfinite(n):
        raise ZeroNorm(f"state norm {n} at kick {state.kick_index}")
    state.amplitudes /= math.sqrt(n)
    state.log_norm += math.log(n)
    return n


def edge_probability(state: WaveFunction) -> float:
    """Probability on the outermost momentum ring of either rotor.

    Used as a truncation guard: leakage here means the lattice is too small
    for the spreading wavepacket.
    """
    m = state.lattice_size
    modes = np.abs(np.fft.fftfreq(m, d=1.0 / m).astype(np.int64))
    edge = modes >= m // 2 - 1
    prob = np.abs(state.amplitudes) ** 2
    inner = prob[~edge][:, ~edge]
    return float(prob.sum() - inner.sum())
