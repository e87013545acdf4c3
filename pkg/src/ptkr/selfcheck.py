"""Fast self-verification battery: spectral engine vs dense oracle at M=16,
plus the basic symmetry properties.  Backs the `ptkr check` subcommand."""

from __future__ import annotations

import numpy as np

from .engine import ObservableSchedule, evolve
from .oracle import build_dense, dense_evolve
from .params import SimParams

BATTERY = [(0.0, 0.0), (0.0, 1.0), (0.01, 0.0), (0.01, 1.0),
           (0.01, 5.0), (1.0, 5.0)]


def _max_observable_gap(a, b) -> float:
    return max(
        float(np.max(np.abs(a.p1_mean - b.p1_mean))),
        float(np.max(np.abs(a.p1_sq_mean - b.p1_sq_mean))),
        float(np.max(np.abs(a.norm_total - b.norm_total)
                     / np.maximum(b.norm_total, 1.0))),
        float(np.nanmax(np.abs(a.linear_entropy - b.linear_entropy))),
    )


def run_selfcheck(verbose: bool = False, kicks: int = 20,
                  lattice_size: int = 16, tol: float = 1e-9) -> bool:
    """Engine/oracle agreement on every observable for the parameter battery."""
    ok = True
    schedule = ObservableSchedule(entropy_every=1, leak_threshold=1.0)
    for gain_loss, coupling in BATTERY:
        params = SimParams(gain_loss=gain_loss, coupling=coupling,
                           lattice_size=lattice_size, n_kicks=kicks)
        fast = evolve(params, schedule)
        slow = dense_evolve(build_dense(params), kicks, schedule)
        gap = _max_observable_gap(fast, slow)
        passed = gap < tol
        ok = ok and passed
        if verbose:
            print(f"oracle lambda={gain_loss:<5} epsilon={coupling:<3} "
                  f"max gap {gap:.3e}  "
                  f"{'PASS' if passed else 'FAIL'}")
    if verbose:
        print("selfcheck:", "PASS" if ok else "FAIL")
    return ok
