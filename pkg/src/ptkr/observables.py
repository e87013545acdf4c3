"""Single-rotor observables computed from a normalized two-rotor state.

Momentum moments only need the marginal distribution because momentum is
diagonal in the storage basis; the reduced density matrix is materialized
(implicitly, as a Gram matrix) only for the entanglement measure.
"""

from __future__ import annotations

import numpy as np

from .state import WaveFunction


def momentum_marginal(state: WaveFunction, particle: int = 1) -> np.ndarray:
    """Probability distribution of one rotor's momentum, FFT mode order.

    P(m) = sum_n |psi[m, n]|^2 for particle 1, sum over axis 0 for particle 2.
    """
    if particle not in (1, 2):
        raise ValueError("particle must be 1 or 2")
    prob = np.abs(state.amplitudes) ** 2
    return prob.sum(axis=1 if particle == 1 else 0)


def momentum_moment(state: WaveFunction, particle: int = 1, order: int = 1,
                    hbar_eff: float = 1.0) -> float:
    """<p^order> for one rotor, with p_m = m * hbar_eff."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    m = state.lattice_size
    marginal = momentum_marginal(state, particle)
    momenta = np.fft.fftfreq(m, d=1.0 / m) * hbar_eff
    return float(np.sum(momenta ** order * marginal))


def linear_entropy(state: WaveFunction) -> float:
    """1 - Tr(rho_1^2) for the reduced state of rotor 1.

    With psi viewed as a matrix A, Tr(rho_1^2) = Tr[(A A^dagger)^2], which is
    the squared Frobenius norm of the (Hermitian) Gram matrix A A^dagger.
    """
    a = state.amplitudes
    gram = a @ a.conj().T
    purity = float(np.sum(np.abs(gram) ** 2))
    return 1.0 - purity
