"""Split-operator simulator for two coupled kicked rotors with a
PT-symmetric (complex) kicking potential."""

from .params import SimParams
from .state import WaveFunction, ground_product_state, norm, normalize
from .engine import (KickPhaseTable, ObservableSchedule, TrajectoryRecord,
                     apply_free, apply_kick, build_tables, evolve, step)
from .observables import linear_entropy, momentum_marginal, momentum_moment

__all__ = [
    "SimParams", "WaveFunction", "ground_product_state", "norm", "normalize",
    "KickPhaseTable", "ObservableSchedule", "TrajectoryRecord",
    "apply_free", "apply_kick", "build_tables", "evolve", "step",
    "linear_entropy", "momentum_marginal", "momentum_moment",
]
