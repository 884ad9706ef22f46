"""Randomized and exhaustive checks of the optimality results.

Each check returns a :class:`CheckResult` with the number of cases examined
and the number that violated the claim. Nothing here asserts; callers
decide what a violation means.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import optimal
from .core import ClientGraph, SnrProfile, build_client_graph, canonicalize, is_feasible, is_tree
from .oracle import Objective, brute_force_best, prufer_decode, prufer_encode, sample_uniform_tree, within_tol
from .rates import BoundKind, ds_product, evaluate, weak_bound_equivalent

REL_TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    n: int
    checked: int = 0
    violations: int = 0
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def fail(self, example) -> None:
        self.violations += 1
        if len(self.examples) < 3:
            self.examples.append(example)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name} n={self.n}: {self.checked} checked, {self.violations} violations"


def _rng(seed: int, n: int, suite: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, suite)))


def uniform_profile(n: int, rng: np.random.Generator, low: float = 1.0, high: float = 100.0) -> SnrProfile:
    return canonicalize(rng.uniform(low, high, size=n))


def check_tree_feasibility(n: int) -> CheckResult:
    """Every (N-1)-edge subset of K_N: connected iff tree."""
    res = CheckResult("tree-feasibility-equivalence", n)
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    for subset in itertools.combinations(all_edges, n - 1):
        g = ClientGraph.from_edges(n, subset)
        res.checked += 1
        if is_feasible(g) != is_tree(g):
            res.fail(subset)
    return res


def check_common_oracle(n: int, profiles: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("chain-maximizes-common-rate", n)
    chain = build_client_graph(optimal.chain_ordering(n), n)
    code = prufer_encode(chain)
    for _ in range(profiles):
        p = uniform_profile(n, rng)
        best = brute_force_best(p, Objective.COMMON, BoundKind.WEAK)
        value = evaluate(chain, p, BoundKind.WEAK).common_rate
        closed = optimal.max_common_rate_closed_form(p)
        res.checked += 1
        if not (within_tol(value, best.best_value) and best.contains(code) and closed == value):
            res.fail((p.values, value, best.best_value, closed))
    return res


def check_sum_oracle(n: int, profiles: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("star-maximizes-sum-rate", n)
    star = build_client_graph(optimal.star_ordering(n), n)
    code = prufer_encode(star)
    for _ in range(profiles):
        p = uniform_profile(n, rng)
        best = brute_force_best(p, Objective.SUM, BoundKind.WEAK)
        value = evaluate(star, p, BoundKind.WEAK).sum_rate
        closed = optimal.max_sum_rate_closed_form(p)
        exact_match = closed == value or optimal.sum_rate_result(p).low_snr
        res.checked += 1
        if not (within_tol(value, best.best_value) and best.contains(code) and exact_match):
            res.fail((p.values, value, best.best_value, closed))
    return res


def check_clamped_sum_oracle(n: int, profiles: int, rng: np.random.Generator) -> CheckResult:
    """Low-SNR profiles: the floored closed form equals the best exact-bound sum rate."""
    res = CheckResult("sum-closed-form-low-snr", n)
    for _ in range(profiles):
        p = canonicalize(rng.exponential(0.5, size=n) + 1e-9)
        best = brute_force_best(p, Objective.SUM, BoundKind.EXACT)
        closed = optimal.max_sum_rate_closed_form(p)
        res.checked += 1
        if not (within_tol(closed, best.best_value) and within_tol(best.best_value, closed)):
            res.fail((p.values, closed, best.best_value))
    return res


def check_v_transform(n: int, count: int, rng: np.random.Generator) -> CheckResult:
    """Moving the weakest neighbor of v_N onto another neighbor never lowers D_s."""
    res = CheckResult("v-transform-improves-ds", n)
    if n < 3:
        return res
    tries = 0
    while res.checked < count and tries < 50 * count:
        tries += 1
        p = uniform_profile(n, rng)
        g = sample_uniform_tree(n, rng)
        if g.degree(n) < 2:
            continue
        nbrs = sorted(g.neighbors(n), key=lambda v: (p.x(v), v))
        j = nbrs[0]
        base = ds_product(g, p)
        for i in nbrs[1:]:
            h = optimal.v_transform(g, n, i, j)
            moved = ds_product(h, p)
            res.checked += 1
            if not is_tree(h) or moved < base * (1 - REL_TOL):
                res.fail((p.values, sorted(g.edges), i, j, base, moved))
    return res


def leaf_pair_tree(n: int, rng: np.random.Generator) -> tuple[ClientGraph, int, int]:
    """Random tree where v_N and v_{N-1} are leaves; returns (tree, nbr of N, nbr of N-1)."""
    core_n = n - 2
    if core_n >= 2:
        code = rng.integers(1, core_n + 1, size=core_n - 2).tolist()
        core = set(prufer_decode(code, core_n).edges)
    else:
        core = set()
    i = int(rng.integers(1, core_n + 1))
    j = int(rng.integers(1, core_n + 1))
    return ClientGraph.from_edges(n, core | {(i, n), (j, n - 1)}), i, j


def check_leaf_swap(n: int, count: int, rng: np.random.Generator) -> CheckResult:
    """Swapping the attachments of leaves v_N, v_{N-1}: D_s does not grow iff x_i >= x_j."""
    res = CheckResult("leaf-swap-direction", n)
    if n < 3:
        return res
    while res.checked < count:
        p = uniform_profile(n, rng)
        if p.x(n) == p.x(n - 1):
            continue
        g, i, j = leaf_pair_tree(n, rng)
        edges = (set(g.edges) - {(i, n), (j, n - 1)}) | {(j, n), (i, n - 1)}
        swapped = ClientGraph.from_edges(n, edges)
        d, d2 = ds_product(g, p), ds_product(swapped, p)
        xi, xj = p.x(i), p.x(j)
        res.checked += 1
        bad = (xi >= xj and d2 > d * (1 + REL_TOL)) or (xi < xj and d2 < d * (1 - REL_TOL))
        if bad or not is_tree(swapped):
            res.fail((p.values, sorted(g.edges), i, j, d, d2))
    return res


def weak_regime_profile(n: int, rng: np.random.Generator, variance: float = 0.5) -> SnrProfile:
    """Rayleigh-faded profile at a random mean SNR in [0, 20] dB, restricted to the weak-bound regime."""
    while True:
        snr = 10 ** (rng.uniform(0.0, 20.0) / 10)
        g = rng.normal(0.0, np.sqrt(variance), size=(n, 2))
        x = snr * (g**2).sum(axis=1)
        if np.all(x > 0):
            p = canonicalize(x)
            if weak_bound_equivalent(p):
                return p


def check_gap_bounds(n: int, count: int, rng: np.random.Generator) -> CheckResult:
    res = CheckResult("gap-bounds", n)
    chain = build_client_graph(optimal.chain_ordering(n), n)
    star = build_client_graph(optimal.star_ordering(n), n)
    for _ in range(count):
        p = weak_regime_profile(n, rng)
        g = sample_uniform_tree(n, rng)
        bounds = optimal.gap_bounds(p)
        rand = evaluate(g, p, BoundKind.EXACT)
        c_gap = evaluate(chain, p, BoundKind.EXACT).common_rate - rand.common_rate
        s_gap = evaluate(star, p, BoundKind.EXACT).sum_rate - rand.sum_rate
        res.checked += 1
        if c_gap > bounds.common_gap_bound + 1e-12 or s_gap > bounds.sum_gap_bound + 1e-12:
            res.fail((p.values, sorted(g.edges), c_gap, s_gap, bounds))
    return res


def run_verification(ns, profiles: int, seed: int) -> list[CheckResult]:
    results = []
    for n in ns:
        results.append(check_tree_feasibility(n))
        results.append(check_common_oracle(n, profiles, _rng(seed, n, 1)))
        results.append(check_sum_oracle(n, profiles, _rng(seed, n, 2)))
        results.append(check_clamped_sum_oracle(n, profiles, _rng(seed, n, 3)))
        results.append(check_v_transform(n, profiles, _rng(seed, n, 4)))
        results.append(check_leaf_swap(n, profiles, _rng(seed, n, 5)))
        results.append(check_gap_bounds(n, profiles, _rng(seed, n, 6)))
    return results
