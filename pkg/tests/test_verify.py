import math

import numpy as np

from mwrc_ordering import optimal, verify
from mwrc_ordering.core import canonicalize


def test_all_suites_pass_small():
    results = verify.run_verification([2, 3, 4], profiles=60, seed=5)
    assert all(r.ok for r in results), [r.line() for r in results if not r.ok]
    assert {r.name for r in results} >= {"gap-bounds", "leaf-swap-direction", "v-transform-improves-ds"}


def test_n2_is_vacuous_but_passes():
    results = verify.run_verification([2], profiles=10, seed=1)
    assert all(r.ok for r in results)
    assert next(r for r in results if r.name == "v-transform-improves-ds").checked == 0


def test_leaf_pair_tree_shape():
    rng = np.random.default_rng(0)
    for n in range(3, 9):
        g, i, j = verify.leaf_pair_tree(n, rng)
        assert g.degree(n) == g.degree(n - 1) == 1
        assert g.neighbors(n) == {i} and g.neighbors(n - 1) == {j}


def _faulty_sum_closed_form(profile):
    # Floor applied one user too late: user 1's term is never floored.
    n = profile.n
    terms = optimal._star_terms(profile)
    return math.fsum(
        math.log2(t if k == 0 else max(1.0, t)) / (2 * (n - 1)) for k, t in enumerate(terms)
    )


def test_injected_clamp_fault_is_caught(monkeypatch):
    monkeypatch.setattr(optimal, "max_sum_rate_closed_form", _faulty_sum_closed_form)
    rng = np.random.default_rng(1)
    res = verify.check_clamped_sum_oracle(4, 200, rng)
    assert not res.ok and res.violations > 0


def test_faulty_closed_form_agrees_at_high_snr():
    # Sanity: the fault is invisible when no floor is active.
    p = canonicalize([2.0, 3.0, 9.0])
    assert _faulty_sum_closed_form(p) == optimal.max_sum_rate_closed_form(p)
