"""Labeled-tree enumeration and sampling through Prufer codes.

A Prufer code of length N - 2 over {1..N} is in bijection with the labeled
trees on N vertices, which gives both exhaustive enumeration (N^(N-2)
trees) and exactly uniform sampling.
"""

from __future__ import annotations

import enum
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .core import ClientGraph, SnrProfile, is_tree
from .errors import EnumerationCapError, InvalidOrderingError
from .rates import BoundKind, batch_user_rates

DEFAULT_CAP = 9
REL_TOL = 1e-12

PruferCode = tuple[int, ...]


class Objective(enum.Enum):
    COMMON = "common"
    SUM = "sum"


def _check_code(code: Sequence[int], n: int) -> None:
    if n < 2:
        raise InvalidOrderingError(f"need at least 2 users, got {n}")
    if len(code) != n - 2:
        raise InvalidOrderingError(f"code length {len(code)} != n - 2 = {n - 2}")
    if any(not (1 <= c <= n) for c in code):
        raise InvalidOrderingError(f"code labels must lie in 1..{n}: {tuple(code)}")


def prufer_decode(code: Sequence[int], n: int) -> ClientGraph:
    _check_code(code, n)
    degree = [1] * (n + 1)
    for c in code:
        degree[c] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for c in code:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, c))
        degree[c] -= 1
        if degree[c] == 1:
            heapq.heappush(leaves, c)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return ClientGraph.from_edges(n, edges)


def prufer_encode(graph: ClientGraph) -> PruferCode:
    if not is_tree(graph):
        raise InvalidOrderingError("Prufer encoding needs a tree")
    n = graph.n
    nbrs = [set(graph.neighbors(v)) if v else set() for v in range(n + 1)]
    leaves = [v for v in range(1, n + 1) if len(nbrs[v]) == 1]
    heapq.heapify(leaves)
    code = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (parent,) = nbrs[leaf]
        code.append(parent)
        nbrs[parent].discard(leaf)
        if len(nbrs[parent]) == 1:
            heapq.heappush(leaves, parent)
    return tuple(code)


def _check_cap(n: int, cap: int) -> None:
    if n < 2:
        raise InvalidOrderingError(f"need at least 2 users, got {n}")
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds enumeration cap {cap}")


def enumerate_trees(n: int, cap: int = DEFAULT_CAP) -> Iterator[ClientGraph]:
    """All n^(n-2) labeled trees, in lexicographic code order."""
    _check_cap(n, cap)
    for code in product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(code, n)


def sample_uniform_tree(n: int, rng: np.random.Generator) -> ClientGraph:
    if n < 2:
        raise InvalidOrderingError(f"need at least 2 users, got {n}")
    code = rng.integers(1, n + 1, size=n - 2)
    return prufer_decode(code.tolist(), n)


# Batched decoding used by the brute-force search and the simulator.


def codes_from_ranks(ranks: np.ndarray, n: int) -> np.ndarray:
    """Codes (1-based labels) of the given lexicographic ranks, shape (T, n-2)."""
    ranks = np.asarray(ranks, dtype=np.int64)
    digits = np.empty((ranks.size, n - 2), dtype=np.int64)
    rem = ranks.copy()
    for k in range(n - 3, -1, -1):
        digits[:, k] = rem % n
        rem //= n
    return digits + 1


def decode_batch(codes: np.ndarray, n: int) -> np.ndarray:
    """Decode a (T, n-2) array of codes -> edges of shape (T, n-1, 2), 0-based.

    Same smallest-leaf rule as :func:`prufer_decode`, vectorized over rows.
    """
    codes = np.asarray(codes, dtype=np.int64) - 1
    t = codes.shape[0]
    rows = np.arange(t)
    degree = np.ones((t, n), dtype=np.int64)
    for k in range(n - 2):
        np.add.at(degree, (rows, codes[:, k]), 1)
    edges = np.empty((t, n - 1, 2), dtype=np.int64)
    for k in range(n - 2):
        leaf = np.argmax(degree == 1, axis=1)
        edges[:, k, 0] = leaf
        edges[:, k, 1] = codes[:, k]
        degree[rows, leaf] -= 1
        degree[rows, codes[:, k]] -= 1
    first = np.argmax(degree == 1, axis=1)
    degree[rows, first] = 0
    edges[:, n - 2, 0] = first
    edges[:, n - 2, 1] = np.argmax(degree == 1, axis=1)
    return edges


def objective_values(x: np.ndarray, edges: np.ndarray, objective: Objective, kind: BoundKind) -> np.ndarray:
    rates = batch_user_rates(x, edges, kind)
    return rates.min(axis=1) if objective is Objective.COMMON else rates.sum(axis=1)


@dataclass(frozen=True)
class BruteForceResult:
    best_value: float
    co_optimal: tuple[PruferCode, ...]
    tree_count: int

    def contains(self, code: Sequence[int]) -> bool:
        return tuple(code) in self.co_optimal


def within_tol(value: float, best: float, rel_tol: float = REL_TOL) -> bool:
    return value >= best - rel_tol * abs(best)


def _search_chunk(x: np.ndarray, n: int, start: int, stop: int, objective: Objective, kind: BoundKind):
    ranks = np.arange(start, stop, dtype=np.int64)
    edges = decode_batch(codes_from_ranks(ranks, n), n)
    vals = objective_values(np.broadcast_to(x, (len(ranks), n)), edges, objective, kind)
    local_best = float(vals.max())
    keep = vals >= local_best - REL_TOL * abs(local_best)
    return local_best, ranks[keep], vals[keep]


def brute_force_best(
    profile: SnrProfile,
    objective: Objective,
    kind: BoundKind,
    cap: int = DEFAULT_CAP,
    chunk_size: int = 1 << 16,
    workers: int = 1,
) -> BruteForceResult:
    """Maximize ``objective`` over every labeled tree; ties within 1e-12 relative are co-optimal.

    The code space is split into contiguous rank chunks; the result does not
    depend on ``chunk_size`` or ``workers``.
    """
    n = profile.n
    _check_cap(n, cap)
    total = n ** (n - 2)
    x = np.asarray(profile.values, dtype=float)[None, :]
    bounds = [(s, min(s + chunk_size, total)) for s in range(0, total, chunk_size)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _search_chunk(x, n, *b, objective, kind), bounds))
    else:
        parts = [_search_chunk(x, n, s, e, objective, kind) for s, e in bounds]
    best = max(p[0] for p in parts)
    winners = []
    for _, ranks, vals in parts:
        winners.extend(int(r) for r, v in zip(ranks, vals) if within_tol(float(v), best))
    codes = [tuple(int(c) for c in row) for row in codes_from_ranks(np.array(winners), n)]
    return BruteForceResult(best, tuple(codes), total)


def cayley_count(n: int) -> int:
    return n ** (n - 2) if n >= 2 else 0


def code_rank(code: Sequence[int], n: int) -> int:
    """Lexicographic rank of ``code`` among all codes for ``n`` users."""
    _check_code(code, n)
    rank = 0
    for c in code:
        rank = rank * n + (c - 1)
    return rank
