"""Physical and lattice parameters of the coupled-rotor simulation.

Momentum convention: each rotor lives on a momentum lattice p_m = m * hbar_eff
with signed integer m in [-M/2, M/2).  Arrays are stored in FFT index order
(0, 1, ..., M/2-1, -M/2, ..., -1) so the angle <-> momentum transform is a
plain 2D FFT.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class SimParams:
    """All knobs of a single evolution run.

    kick_strength : K, amplitude of the real part of the kicking potential
    gain_loss     : amplitude of the imaginary (gain/loss) part; >= 0 in
                    user-facing config, negative values only through the
                    internal parity test hook
    coupling      : strength of the cos(theta1 - theta2) inter-rotor kick
    hbar_eff      : effective Planck constant; sets the momentum spacing
    lattice_size  : M, momentum modes per rotor (even, >= 8)
    n_kicks       : number of kick periods to evolve
    """

    kick_strength: float = 5.0
    gain_loss: float = 0.01
    coupling: float = 0.0
    hbar_eff: float = 1.0
    lattice_size: int = 512
    n_kicks: int = 1000

    def __post_init__(self):
        if self.lattice_size < 8 or self.lattice_size % 2 != 0:
            raise ValidationError("lattice_size must be even and >= 8",
                                  key="lattice_size")
        if self.hbar_eff <= 0:
            raise ValidationError("hbar_eff must be positive", key="hbar_eff")
        if self.n_kicks < 1:
            raise ValidationError("n_kicks must be >= 1", key="n_kicks")

    def with_values(self, **kwargs) -> "SimParams":
        return replace(self, **kwargs)

    @property
    def mode_numbers(self) -> np.ndarray:
        """Signed integer mode numbers in FFT order."""
        m = self.lattice_size
        return np.fft.fftfreq(m, d=1.0 / m).astype(np.int64)

    @property
    def momenta(self) -> np.ndarray:
        """Momentum values p_m = m * hbar_eff in FFT order."""
        return self.mode_numbers * self.hbar_eff

    @property
    def angles(self) -> np.ndarray:
        """Uniform angle grid theta_k = 2 pi k / M, k = 0..M-1."""
        m = self.lattice_size
        return 2.0 * np.pi * np.arange(m) / m
