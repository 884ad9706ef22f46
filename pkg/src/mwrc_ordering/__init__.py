"""Transmission orderings for pairwise functional-decode-forward multiway relay channels."""

from .core import (
    ClientGraph,
    Ordering,
    SnrProfile,
    build_client_graph,
    canonicalize,
    is_feasible,
    is_tree,
)
from .errors import (
    EnumerationCapError,
    InfeasibleOrderingError,
    InvalidOrderingError,
    InvalidProfileError,
    MwrcError,
)
from .optimal import (
    GapBounds,
    chain_ordering,
    gap_bounds,
    max_common_rate_closed_form,
    max_sum_rate_closed_form,
    star_ordering,
    v_transform,
)
from .oracle import Objective, brute_force_best, enumerate_trees, prufer_decode, prufer_encode, sample_uniform_tree
from .rates import BoundKind, RateReport, d_value, ds_product, evaluate, pair_rate_bound, user_rate, weak_bound_equivalent
from .sim import ChannelConfig, GapStats, run_gap_experiment, sample_snr_profile

__version__ = "0.1.0"
