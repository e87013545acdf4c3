"""Acceptance suite.

One test per criterion; each prints a single PASS/FAIL line (run with -s to
stream them).  Criteria 1-6 are fast properties at small lattices; 7-15 are
quantitative reproduction runs and take minutes.  Long trajectories are
cached per-module so several criteria can share one evolution.
"""

from __future__ import annotations

import functools

import numpy as np

from ptkr import ObservableSchedule, SimParams, evolve, linear_entropy
from ptkr.engine import (TrajectoryRecord, build_tables, single_rotor_step,
                         single_rotor_tables, step)
from ptkr.fitting import (analyze, fit_current_rate, fit_gaussian,
                          fit_norm_growth, fit_power_law_width, linear_fit,
                          time_averages)
from ptkr.selfcheck import run_selfcheck
from ptkr.state import ground_product_state


def report(num, name, ok, detail=""):
    line = f"[criterion {num:2d}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


@functools.lru_cache(maxsize=None)
def cached_run(gain_loss, coupling, lattice_size, n_kicks,
               entropy_every=0, marginal_times=()):
    params = SimParams(gain_loss=gain_loss, coupling=coupling,
                       lattice_size=lattice_size, n_kicks=n_kicks)
    schedule = ObservableSchedule(entropy_every=entropy_every,
                                  marginal_times=marginal_times)
    return evolve(params, schedule)


# --- property suite ---------------------------------------------------------

def test_criterion_01_oracle_equivalence():
    ok = run_selfcheck(kicks=20, lattice_size=16, tol=1e-9)
    report(1, "oracle equivalence (M=16, 20 kicks, 6-point battery)", ok)


def test_criterion_02_unitarity():
    traj = cached_run(0.0, 5.0, 128, 1000)
    gap = float(np.max(np.abs(traj.norm_total - 1.0)))
    report(2, "unitarity at lambda=0", gap < 1e-8, f"max |N-1| = {gap:.2e}")


def test_criterion_03_factorization():
    params = SimParams(gain_loss=0.01, coupling=0.0, lattice_size=64,
                       n_kicks=500)
    entropies = []
    gaps = []
    kick, free = single_rotor_tables(params)
    single = np.zeros(params.lattice_size, dtype=complex)
    single[0] = 1.0

    def hook(state):
        entropies.append(linear_entropy(state))
        gaps.append(float(np.max(np.abs(
            state.amplitudes - np.outer(single, single)))))

    # advance the two-rotor engine and the lone-rotor path in lockstep
    tables = build_tables(params)
    state = ground_product_state(params)
    hook(state)
    for _ in range(params.n_kicks):
        step(state, tables)
        single, _ = single_rotor_step(single, kick, free)
        hook(state)
    s_max = max(entropies)
    gap_max = max(gaps)
    report(3, "factorization at zero coupling",
           s_max < 1e-10 and gap_max < 1e-10,
           f"max S = {s_max:.2e}, max tensor gap = {gap_max:.2e}")


def test_criterion_04_swap_symmetry():
    params = SimParams(gain_loss=0.01, coupling=1.0, lattice_size=64,
                       n_kicks=200)
    worst = 0.0

    def hook(state):
        nonlocal worst
        worst = max(worst, float(np.max(np.abs(
            state.amplitudes - state.amplitudes.T))))

    evolve(params, ObservableSchedule(entropy_every=0, leak_threshold=1.0),
           state_hook=hook)
    report(4, "swap symmetry of the two rotors", worst < 1e-12,
           f"max |psi - psi^T| = {worst:.2e}")


def test_criterion_05_gain_loss_parity():
    # Negative gain_loss is constructible directly (the config layer rejects
    # it); a large lattice keeps the unpaired edge mode unpopulated.
    pos = cached_run(0.01, 1.0, 1024, 200)
    neg = cached_run(-0.01, 1.0, 1024, 200)
    odd = float(np.max(np.abs(pos.p1_mean + neg.p1_mean)))
    even = float(np.max(np.abs(pos.p1_sq_mean - neg.p1_sq_mean)))
    report(5, "parity under gain/loss sign flip",
           odd < 1e-10 and even < 1e-10,
           f"<p1> asym = {odd:.2e}, <p1^2> gap = {even:.2e}")


def test_criterion_06_fitter_exactness():
    t = np.arange(0, 301)
    d_true, eta_true, alpha_true, gamma_true = 0.37, 2.1, 1.3, 0.0042
    params = SimParams(n_kicks=300, lattice_size=64)
    rec = TrajectoryRecord(
        params=params, t=t,
        p1_mean=d_true * t,
        p1_sq_mean=eta_true * t.astype(float) ** alpha_true,
        variance=eta_true * t.astype(float) ** alpha_true,
        log_norm=gamma_true * t,
        linear_entropy=np.full(t.size, np.nan),
        leak_flag=np.zeros(t.size, dtype=bool))
    d, r2d, _ = fit_current_rate(rec)
    eta, alpha, r2w, _ = fit_power_law_width(rec)
    gamma, r2n = fit_norm_growth(rec)
    momenta = np.linspace(-40, 40, 401)
    gauss = np.exp(-(momenta - 3.0) ** 2 / 25.0)
    center, width, goodness = fit_gaussian(gauss, momenta)
    errs = [abs(d - d_true), abs(eta - eta_true), abs(alpha - alpha_true),
            abs(gamma - gamma_true), abs(center - 3.0), abs(width - 25.0)]
    r2s = [r2d, r2w, r2n]
    ok = max(errs) < 1e-10 and min(r2s) > 1.0 - 1e-12 and goodness < 1e-10
    report(6, "fitters exact on synthetic data", ok,
           f"max param err = {max(errs):.2e}, min r^2 = {min(r2s):.12f}")


# --- quantitative reproduction suite ---------------------------------------

def test_criterion_07_dynamical_localization():
    traj = cached_run(0.01, 0.0, 512, 1000, entropy_every=5)
    mask = traj.t >= 500
    slope, _, _ = linear_fit(traj.t[mask].astype(float),
                             traj.p1_sq_mean[mask])
    plateau = abs(slope) / float(np.mean(traj.p1_sq_mean[mask]))
    norm_avg, _ = time_averages(traj)
    gamma, _ = fit_norm_growth(traj)
    ok = plateau < 0.01 and 0.9 <= norm_avg <= 1.1 and abs(gamma) < 1e-4
    report(7, "dynamical localization (phase I)", ok,
           f"slope/mean = {plateau:.2e}, norm avg = {norm_avg:.3f}, "
           f"gamma = {gamma:.2e}")


def test_criterion_08_norm_growth_rates():
    targets = {1.0: 0.0035, 5.0: 0.0051}
    details = []
    ok = True
    for coupling, target in targets.items():
        traj = cached_run(0.01, coupling, 1024, 1000, entropy_every=5)
        gamma, _ = fit_norm_growth(traj)
        window = (traj.params.n_kicks // 2, traj.params.n_kicks)
        ok = ok and abs(gamma - target) <= 0.3 * target
        details.append(f"eps={coupling:g}: gamma={gamma:.5f} "
                       f"(target {target}, window {window})")
    report(8, "PT-broken norm growth rates", ok, "; ".join(details))


def test_criterion_09_directed_current_linearity():
    traj = cached_run(0.01, 1.0, 1024, 1000, entropy_every=5)
    rate, r2, endpoint = fit_current_rate(traj)
    report(9, "directed current linear in time", r2 > 0.99,
           f"D = {rate:.4f}, r^2 = {r2:.5f}, endpoint = {endpoint:.4f}")


def test_criterion_10_width_exponent():
    traj = cached_run(0.01, 1.0, 1024, 1000, entropy_every=5)
    _, alpha, r2, _ = fit_power_law_width(traj)
    report(10, "modified ballistic diffusion exponent", abs(alpha - 1.0) <= 0.15,
           f"alpha = {alpha:.3f}, r^2 = {r2:.4f}")


def test_criterion_11_current_scales_with_gain_loss():
    lams = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2]
    rates = [analyze(cached_run(lam, 5.0, 1024, 500)).current_rate
             for lam in lams]
    slope, _, r2 = linear_fit(np.log(lams), np.log(rates))
    report(11, "current rate proportional to gain/loss",
           abs(slope - 1.0) <= 0.15,
           f"log-log slope = {slope:.3f}, r^2 = {r2:.4f}")


def test_criterion_12_width_prefactor_scales_with_coupling():
    # The prefactor is the endpoint estimator variance(t_f) / t_f^alpha with
    # t_f a few hundred kicks.  The weakest-coupling point is barely past the
    # breaking threshold and its width growth converges slowly, so the
    # horizon is part of the protocol.
    couplings = [1.0, 2.0, 3.0, 4.0, 5.0]
    prefs = []
    for eps in couplings:
        traj = cached_run(1e-3, eps, 512, 300)
        _, _, _, endpoint = fit_power_law_width(traj, (150, 300))
        prefs.append(endpoint)
    beta, _, r2 = linear_fit(np.asarray(couplings), np.log(prefs))
    report(12, "width prefactor grows as exp(0.1 * coupling)",
           abs(beta - 0.1) <= 0.05, f"beta = {beta:.4f}, r^2 = {r2:.4f}")


def test_criterion_13_gaussian_vs_nongaussian_wavepacket():
    # Same lattice size for both: the L2 goodness scale depends on the grid.
    momenta = np.fft.fftfreq(2048, d=1 / 2048.0)
    weak = cached_run(0.01, 5.0, 2048, 500, marginal_times=(500,))
    strong = cached_run(5.0, 5.0, 2048, 500, marginal_times=(500,))
    _, _, good_weak = fit_gaussian(weak.marginals[500], momenta)
    _, _, good_strong = fit_gaussian(strong.marginals[500], momenta)
    ratio = good_strong / good_weak
    report(13, "wavepacket Gaussian at weak gain/loss only", ratio >= 5.0,
           f"goodness {good_weak:.2e} vs {good_strong:.2e}, "
           f"ratio = {ratio:.1f}")


def test_criterion_14_entropy_saturation_and_suppression():
    weak = cached_run(0.01, 5.0, 1024, 1000, entropy_every=5)
    s = weak.linear_entropy[~np.isnan(weak.linear_entropy)]
    tail = s[len(s) // 2:]
    saturated = float(np.max(s)) > 0.9 and float(np.min(tail)) > 0.9
    strong = cached_run(10.0, 5.0, 2048, 300, entropy_every=5)
    _, s_avg_strong = time_averages(strong)
    ok = saturated and s_avg_strong < 0.1
    report(14, "entropy saturates when weak, stays near zero when strong",
           ok, f"S max = {np.max(s):.3f}, S tail min = {np.min(tail):.3f}, "
           f"strong avg = {s_avg_strong:.4f}")


def test_criterion_15_boundary_monotonicity():
    # Onset of PT breaking (time-averaged norm > 1.1) on a coarse gain/loss
    # grid; short runs at modest lattice suffice for the flag on its own.
    grid = [0.003, 0.01, 0.03, 0.1, 0.3]
    onsets = []
    for coupling in [0.0, 0.2, 1.0, 5.0]:
        onset = np.inf
        for lam in grid:
            norm_avg, _ = time_averages(cached_run(lam, coupling, 256, 300))
            if norm_avg > 1.1:
                onset = lam
                break
        onsets.append(onset)
    monotone = all(b <= a for a, b in zip(onsets, onsets[1:]))
    strict = onsets[-1] < onsets[0]
    report(15, "breaking threshold decreases with coupling",
           monotone and strict, f"onsets = {onsets}")
