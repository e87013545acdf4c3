import numpy as np
import pytest

from ptkr.errors import ZeroNorm
from ptkr.params import SimParams
from ptkr.state import (WaveFunction, edge_probability, ground_product_state,
                        norm, normalize)
from ptkr.observables import linear_entropy, momentum_moment


def random_state(m, seed=0):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return WaveFunction(amp)


def test_ground_state_is_single_mode():
    st = ground_product_state(SimParams(lattice_size=8, n_kicks=1))
    assert st.amplitudes[0, 0] == 1.0 + 0.0j
    assert np.count_nonzero(st.amplitudes) == 1
    assert norm(st) == 1.0
    assert st.log_norm == 0.0
    assert st.kick_index == 0


def test_ground_state_zero_momentum_and_entropy():
    st = ground_product_state(SimParams(lattice_size=16, n_kicks=1))
    assert momentum_moment(st, 1, 1) == 0.0
    assert momentum_moment(st, 2, 1) == 0.0
    assert linear_entropy(st) == pytest.approx(0.0, abs=1e-14)


def test_norm_quadratic_scaling():
    st = ground_product_state(SimParams(lattice_size=8, n_kicks=1))
    st.amplitudes *= 2.0
    assert norm(st) == pytest.approx(4.0, abs=1e-14)


def test_normalize_returns_factor_and_accumulates_log():
    st = ground_product_state(SimParams(lattice_size=8, n_kicks=1))
    st.amplitudes *= 2.0
    factor = normalize(st)
    assert factor == pytest.approx(4.0, abs=1e-12)
    assert st.log_norm == pytest.approx(np.log(4.0), abs=1e-12)
    assert norm(st) == pytest.approx(1.0, abs=1e-12)


def test_normalize_identity_on_unit_state():
    st = ground_product_state(SimParams(lattice_size=8, n_kicks=1))
    factor = normalize(st)
    assert factor == pytest.approx(1.0, abs=1e-14)
    assert st.log_norm == pytest.approx(0.0, abs=1e-14)


def test_normalize_idempotent_on_random_states():
    for seed in range(5):
        st = random_state(16, seed)
        normalize(st)
        assert norm(st) == pytest.approx(1.0, abs=1e-12)
        second = normalize(st)
        assert second == pytest.approx(1.0, abs=1e-12)


def test_normalize_zero_state_raises():
    st = ground_product_state(SimParams(lattice_size=8, n_kicks=1))
    st.amplitudes[:] = 0.0
    with pytest.raises(ZeroNorm):
        normalize(st)


def test_marginals_sum_to_one_after_normalize():
    from ptkr.observables import momentum_marginal
    st = random_state(32, seed=3)
    normalize(st)
    assert momentum_marginal(st, 1).sum() == pytest.approx(1.0, abs=1e-12)
    assert momentum_marginal(st, 2).sum() == pytest.approx(1.0, abs=1e-12)


def test_edge_probability_detects_boundary_ring():
    m = 16
    st = ground_product_state(SimParams(lattice_size=m, n_kicks=1))
    assert edge_probability(st) < 1e-15
    # put weight on the outermost ring of rotor 1
    st.amplitudes[:] = 0.0
    st.amplitudes[m // 2, 0] = 1.0    # mode m = -M/2
    assert edge_probability(st) == pytest.approx(1.0, abs=1e-14)
    st.amplitudes[:] = 0.0
    st.amplitudes[0, m // 2 - 1] = 1.0  # rotor 2, mode M/2 - 1
    assert edge_probability(st) == pytest.approx(1.0, abs=1e-14)


def test_simparams_validation():
    from ptkr.errors import ValidationError
    with pytest.raises(ValidationError):
        SimParams(lattice_size=7, n_kicks=1)
    with pytest.raises(ValidationError):
        SimParams(lattice_size=6, n_kicks=1)
    with pytest.raises(ValidationError):
        SimParams(hbar_eff=0.0, n_kicks=1)
    with pytest.raises(ValidationError):
        SimParams(n_kicks=0)
