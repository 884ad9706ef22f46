"""Optimal orderings, their closed-form rates, and the high-SNR gap bounds.

All orderings here are over canonical indices (user 1 has the lowest SNR).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ClientGraph, Ordering, SnrProfile, build_client_graph
from .errors import InvalidOrderingError, InvalidProfileError
from .rates import BoundKind, evaluate, weak_bound_equivalent

__all__ = [
    "GapBounds",
    "SumRateResult",
    "chain_ordering",
    "gap_bounds",
    "max_common_rate_closed_form",
    "max_sum_rate_closed_form",
    "star_ordering",
    "sum_rate_result",
    "v_transform",
    "weak_bound_equivalent",
]


def _check_n(n: int) -> None:
    if n < 2:
        raise InvalidProfileError(f"need at least 2 users, got {n}")


def chain_ordering(n: int) -> Ordering:
    """Path over users sorted by SNR; maximizes the common rate."""
    _check_n(n)
    return Ordering(tuple((i, i + 1) for i in range(1, n)))


def star_ordering(n: int) -> Ordering:
    """Every user paired with the weakest user 1; maximizes the sum rate."""
    _check_n(n)
    return Ordering(tuple((i, 1) for i in range(2, n + 1)))


def max_common_rate_closed_form(profile: SnrProfile) -> float:
    # The chain's top user is never binding, so the min runs over chain edges only.
    x, n = profile.values, profile.n
    return min(math.log2(x[i] + x[i] / (x[i] + x[i + 1])) / (2 * (n - 1)) for i in range(n - 1))


def _star_terms(profile: SnrProfile) -> list[float]:
    x, n = profile.values, profile.n
    x1 = x[0]
    return [x1 + x1 / (x1 + x[-1])] + [x[i] / (x[i] + x1) + x[i] for i in range(1, n)]


def max_sum_rate_closed_form(profile: SnrProfile) -> float:
    """Maximum sum rate, with each user's term floored at zero rate.

    Accumulated as a sum of per-user logarithms so that, without active
    floors, it reproduces the star evaluation bit for bit.
    """
    n = profile.n
    return math.fsum(math.log2(max(1.0, t)) / (2 * (n - 1)) for t in _star_terms(profile))


@dataclass(frozen=True)
class SumRateResult:
    closed_form: float
    star_weak: float
    clamped_users: tuple[int, ...]

    @property
    def low_snr(self) -> bool:
        return bool(self.clamped_users)


def sum_rate_result(profile: SnrProfile) -> SumRateResult:
    """Closed-form maximum next to the unclamped star evaluation."""
    star = build_client_graph(star_ordering(profile.n), profile.n)
    clamped = tuple(i for i, t in enumerate(_star_terms(profile), start=1) if t < 1.0)
    return SumRateResult(
        max_sum_rate_closed_form(profile),
        evaluate(star, profile, BoundKind.WEAK).sum_rate,
        clamped,
    )


def v_transform(graph: ClientGraph, i: int, j: int, k: int) -> ClientGraph:
    """Replace edge i-k by j-k; needs edges i-j and i-k, and j != k."""
    if j == k:
        raise InvalidOrderingError("v_transform needs two distinct neighbors j != k")
    if not (graph.has_edge(i, j) and graph.has_edge(i, k)):
        raise InvalidOrderingError(f"edges {i}-{j} and {i}-{k} must both be present")
    edges = set(graph.edges)
    edges.discard((min(i, k), max(i, k)))
    edges.add((min(j, k), max(j, k)))
    return ClientGraph.from_edges(graph.n, edges)


@dataclass(frozen=True)
class GapBounds:
    common_gap_bound: float
    sum_gap_bound: float


def gap_bounds(profile: SnrProfile) -> GapBounds:
    """Upper bounds on optimal-minus-random rate for any tree ordering."""
    x1, xn, n = profile.values[0], profile.values[-1], profile.n
    common = math.log2((1 + 2 * xn) / (2 * x1)) / (2 * (n - 1))
    total = 0.5 * math.log2(xn * (1 + 2 * x1) / (x1 * (1 + 2 * xn)))
    return GapBounds(common, total)
