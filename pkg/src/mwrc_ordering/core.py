"""Users, SNR profiles, orderings and client graphs.

Users are indexed 1..N in canonical (SNR-sorted, nondecreasing) order, so
user 1 always has the smallest SNR and user N the largest. External user
ids are kept in ``SnrProfile.original_label``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidOrderingError, InvalidProfileError

Pair = tuple[int, int]


class DuplicatePairWarning(UserWarning):
    pass


def _edge(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SnrProfile:
    """Per-user SNRs in canonical order.

    ``values[i - 1]`` is the SNR of canonical user ``i`` and
    ``original_label[i - 1]`` is the 1-based position of that user in the
    caller's input.
    """

    values: tuple[float, ...]
    original_label: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        labels = tuple(int(k) for k in self.original_label)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "original_label", labels)
        n = len(values)
        if n < 2:
            raise InvalidProfileError(f"need at least 2 users, got {n}")
        if len(labels) != n:
            raise InvalidProfileError("original_label length differs from values")
        if not all(v > 0 and np.isfinite(v) for v in values):
            raise InvalidProfileError(f"SNRs must be finite and positive: {values}")
        if any(values[k] > values[k + 1] for k in range(n - 1)):
            raise InvalidProfileError("SNR values must be nondecreasing")
        if sorted(labels) != list(range(1, n + 1)):
            raise InvalidProfileError("original_label must be a permutation of 1..N")

    @property
    def n(self) -> int:
        return len(self.values)

    def x(self, i: int) -> float:
        """SNR of canonical user ``i`` (1-based)."""
        return self.values[i - 1]

    def canonical_index(self) -> dict[int, int]:
        """Map input position (1-based) -> canonical index."""
        return {label: i for i, label in enumerate(self.original_label, start=1)}

    def to_original(self, ordering: "Ordering") -> "Ordering":
        lab = self.original_label
        return Ordering(tuple((lab[a - 1], lab[b - 1]) for a, b in ordering.pairs))

    def to_canonical(self, ordering: "Ordering") -> "Ordering":
        idx = self.canonical_index()
        try:
            return Ordering(tuple((idx[a], idx[b]) for a, b in ordering.pairs))
        except KeyError as exc:
            raise InvalidOrderingError(f"user {exc.args[0]} not in profile") from None


def canonicalize(raw_snrs: Sequence[float]) -> SnrProfile:
    """Sort SNRs nondecreasingly; ties keep input order."""
    raw = [float(v) for v in raw_snrs]
    if len(raw) < 2:
        raise InvalidProfileError(f"need at least 2 users, got {len(raw)}")
    bad = [v for v in raw if not (v > 0 and np.isfinite(v))]
    if bad:
        raise InvalidProfileError(f"SNRs must be finite and positive, got {bad}")
    order = sorted(range(len(raw)), key=raw.__getitem__)
    return SnrProfile(tuple(raw[k] for k in order), tuple(k + 1 for k in order))


@dataclass(frozen=True)
class Ordering:
    """Uplink schedule: a sequence of unordered user pairs (1-based)."""

    pairs: tuple[Pair, ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise InvalidOrderingError("an ordering needs at least one pair")
        for a, b in pairs:
            if a == b:
                raise InvalidOrderingError(f"pair ({a}, {b}) pairs a user with itself")

    @property
    def m(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class ClientGraph:
    """Undirected simple graph with one vertex per user."""

    n: int
    edges: frozenset[Pair]
    adjacency: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidOrderingError(f"need at least 2 users, got {self.n}")
        edges = frozenset(_edge(a, b) for a, b in self.edges)
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in edges:
            if a == b or not (1 <= a <= self.n and 1 <= b <= self.n):
                raise InvalidOrderingError(f"edge ({a}, {b}) out of range for n={self.n}")
            adj[a - 1].add(b)
            adj[b - 1].add(a)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(frozenset(s) for s in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Pair]) -> ClientGraph:
        return cls(n, frozenset(edges))

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[i - 1]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i - 1])

    def has_edge(self, a: int, b: int) -> bool:
        return _edge(a, b) in self.edges

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=np.int8)
        for a, b in self.edges:
            mat[a - 1, b - 1] = mat[b - 1, a - 1] = 1
        return mat

    def to_ordering(self) -> Ordering:
        return Ordering(tuple(sorted(self.edges)))


def build_client_graph(ordering: Ordering, n: int) -> ClientGraph:
    """Client graph of ``ordering``; repeated pairs collapse to one edge."""
    if n < 2:
        raise InvalidOrderingError(f"need at least 2 users, got {n}")
    for a, b in ordering.pairs:
        if not (1 <= a <= n and 1 <= b <= n):
            raise InvalidOrderingError(f"pair ({a}, {b}) out of range 1..{n}")
    dups = duplicate_pairs(ordering)
    if dups:
        warnings.warn(
            f"duplicate pairs collapsed to single edges: {dups}",
            DuplicatePairWarning,
            stacklevel=2,
        )
    return ClientGraph(n, frozenset(_edge(a, b) for a, b in ordering.pairs))


def duplicate_pairs(ordering: Ordering) -> list[Pair]:
    seen: set[Pair] = set()
    dups = []
    for a, b in ordering.pairs:
        e = _edge(a, b)
        if e in seen:
            dups.append(e)
        seen.add(e)
    return dups


def _component_size(graph: ClientGraph, start: int = 1) -> int:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen)


def is_feasible(graph: ClientGraph) -> bool:
    """True iff every user can solve for all messages, i.e. the graph is connected.

    Edges on a cycle are redundant (each cycle equation is the sum of the
    others), so connectivity is the exact condition for any edge count.
    """
    return _component_size(graph) == graph.n


def is_tree(graph: ClientGraph) -> bool:
    return len(graph.edges) == graph.n - 1 and is_feasible(graph)


def ordering_to_json(ordering: Ordering, n: int, labels: Sequence[str] | None = None) -> str:
    doc: dict = {"n": n, "pairs": [[a, b] for a, b in ordering.pairs]}
    if labels is not None:
        doc["labels"] = list(labels)
    return json.dumps(doc)


def ordering_from_json(text: str) -> tuple[Ordering, int, list[str] | None]:
    """Parse the ordering interchange document -> (ordering, n, labels)."""
    try:
        doc = json.loads(text)
        n = doc["n"]
        raw_pairs = doc["pairs"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidOrderingError(f"malformed ordering document: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidOrderingError("'n' must be an integer")
    if not isinstance(raw_pairs, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) for v in p)
        for p in raw_pairs
    ):
        raise InvalidOrderingError("'pairs' must be a list of 2-element integer lists")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise InvalidOrderingError("'labels' must be a list of n strings")
        labels = [str(s) for s in labels]
    ordering = Ordering(tuple((a, b) for a, b in raw_pairs))
    for a, b in ordering.pairs:
        if not (1 <= a <= n and 1 <= b <= n):
            raise InvalidOrderingError(f"pair ({a}, {b}) out of range 1..{n}")
    return ordering, n, labels
