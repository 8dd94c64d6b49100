"""Decohering continuous-time quantum walk on the n-dimensional hypercube."""

from .analysis import (
    HittingTime,
    MixingTime,
    Table,
    hellinger_product,
    hellinger_single,
    hitting_times,
    mixing_threshold_scan,
    mixing_times,
    tv_bounds,
    tv_exact,
    zeno_scan,
)
from .dynamics import (
    DampingConstants,
    Regime,
    RegimeError,
    WalkParams,
    damping_constants,
    gamma,
    gamma_overdamped_terms,
    prob0,
    prob1,
    probabilities,
    spectrum,
)
from .states import CubeDistribution, DensityState

__version__ = "0.1.0"
