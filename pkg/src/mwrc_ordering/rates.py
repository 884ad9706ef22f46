"""Achievable-rate bounds for pairwise FDF relaying.

Rates are in bits per MWRC phase. A user paired with partner ``j`` over a
schedule of ``m`` phases is limited by

    R_i <= 1/(2m) * log2(x_i / (x_i + x_j) + x_i)

clamped at zero for the exact bound and left unclamped for the weak one.
A user that appears in several pairs takes the minimum over its partners,
which is always the partner with the largest SNR.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .core import ClientGraph, SnrProfile, is_feasible
from .errors import InfeasibleOrderingError, InvalidOrderingError, InvalidProfileError


class BoundKind(enum.Enum):
    EXACT = "exact"
    WEAK = "weak"


@dataclass(frozen=True)
class RateReport:
    """Per-user rates in canonical user order, plus the derived aggregates."""

    per_user: tuple[float, ...]
    common_rate: float
    sum_rate: float
    bound_kind: BoundKind
    m: int

    def to_json(self, profile: SnrProfile) -> str:
        by_label = [0.0] * len(self.per_user)
        for i, label in enumerate(profile.original_label):
            by_label[label - 1] = self.per_user[i]
        return json.dumps(
            {
                "per_user": by_label,
                "common_rate": self.common_rate,
                "sum_rate": self.sum_rate,
                "bound_kind": self.bound_kind.value,
            }
        )


def pair_rate_bound(x_i: float, x_j: float, m: int, kind: BoundKind) -> float:
    if not (x_i > 0 and x_j > 0):
        raise InvalidProfileError(f"SNRs must be positive, got {x_i}, {x_j}")
    if m < 1:
        raise ValueError(f"phase count must be >= 1, got {m}")
    rate = math.log2(x_i / (x_i + x_j) + x_i) / (2 * m)
    if kind is BoundKind.EXACT:
        return max(0.0, rate)
    return rate


def binding_neighbor(graph: ClientGraph, i: int, profile: SnrProfile) -> int:
    """Neighbor of ``i`` with the largest SNR (ties -> larger canonical index)."""
    nbrs = graph.neighbors(i)
    if not nbrs:
        raise InfeasibleOrderingError(f"user {i} is isolated")
    return max(nbrs, key=lambda j: (profile.x(j), j))


def user_rate(
    graph: ClientGraph, i: int, profile: SnrProfile, kind: BoundKind, m: int | None = None
) -> float:
    nbrs = graph.neighbors(i)
    if not nbrs:
        raise InfeasibleOrderingError(f"user {i} is isolated")
    m = graph.n - 1 if m is None else m
    x_i = profile.x(i)
    return min(pair_rate_bound(x_i, profile.x(j), m, kind) for j in nbrs)


def evaluate(
    graph: ClientGraph, profile: SnrProfile, kind: BoundKind, m: int | None = None
) -> RateReport:
    """Rates of every user under ``graph``.

    ``m`` defaults to the edge count, which is N - 1 for tree orderings.
    """
    if graph.n != profile.n:
        raise InvalidOrderingError(f"graph has {graph.n} users, profile has {profile.n}")
    if not is_feasible(graph):
        raise InfeasibleOrderingError("client graph is not connected")
    m = len(graph.edges) if m is None else m
    per_user = tuple(user_rate(graph, i, profile, kind, m) for i in range(1, graph.n + 1))
    return RateReport(per_user, min(per_user), math.fsum(per_user), kind, m)


def d_value(rate: float, n: int) -> float:
    return 2.0 ** (2 * (n - 1) * rate)


def ds_product(graph: ClientGraph, profile: SnrProfile) -> float:
    """Product of exponentiated weak-bound user rates, 2^(2(N-1) S_R)."""
    report = evaluate(graph, profile, BoundKind.WEAK, m=graph.n - 1)
    return math.prod(d_value(r, graph.n) for r in report.per_user)


def weak_bound_equivalent(profile: SnrProfile) -> bool:
    """True when the clamp at zero can never bind for any tree."""
    x1, xn = profile.values[0], profile.values[-1]
    return x1 + x1 / (x1 + xn) >= 1


# Vectorized path: many trees (or trials) at once.


def max_neighbor_snr(x: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Largest neighbor SNR per user.

    ``x`` has shape (T, N); ``edges`` has shape (T, E, 2) or (E, 2) and holds
    0-based column positions into ``x``.
    """
    x = np.asarray(x, dtype=float)
    t, n = x.shape
    edges = np.broadcast_to(edges, (t,) + np.shape(edges)[-2:])
    rows = np.broadcast_to(np.arange(t)[:, None], edges.shape[:2])
    a, b = edges[..., 0], edges[..., 1]
    out = np.zeros_like(x)
    np.maximum.at(out, (rows, a), x[rows, b])
    np.maximum.at(out, (rows, b), x[rows, a])
    return out


def batch_user_rates(x: np.ndarray, edges: np.ndarray, kind: BoundKind, m: int | None = None) -> np.ndarray:
    """Per-user rates for a batch; same formula as :func:`pair_rate_bound`."""
    x = np.asarray(x, dtype=float)
    n = x.shape[1]
    m = n - 1 if m is None else m
    partner = max_neighbor_snr(x, edges)
    if np.any(partner == 0):
        raise InfeasibleOrderingError("isolated user in batch")
    rates = np.log2(x / (x + partner) + x) / (2 * m)
    if kind is BoundKind.EXACT:
        rates = np.maximum(rates, 0.0)
    return rates
