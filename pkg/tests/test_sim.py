import math

import numpy as np
import pytest

from mwrc_ordering.core import build_client_graph
from mwrc_ordering.optimal import chain_ordering, star_ordering
from mwrc_ordering.oracle import prufer_decode
from mwrc_ordering.rates import BoundKind, evaluate
from mwrc_ordering.sim import (
    CSV_HEADER,
    ChannelConfig,
    block_rng,
    run_gap_experiment,
    sample_snr_profile,
    sigma2_from_db,
    to_csv,
)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(n_users=4, snr_sweep_db=(1,), trials=0)
    with pytest.raises(ValueError):
        ChannelConfig(n_users=4, snr_sweep_db=(1,), fading_variance=0)
    with pytest.raises(ValueError):
        ChannelConfig(n_users=4, snr_sweep_db=(1,), transmit_power=-1.0)
    with pytest.raises(ValueError):
        ChannelConfig(n_users=1, snr_sweep_db=(1,))


@pytest.mark.parametrize("variance, mean", [(0.5, 1.0), (1.0, 2.0)])
def test_snr_mean_matches_fading_power(variance, mean):
    config = ChannelConfig(n_users=4, snr_sweep_db=(0,), fading_variance=variance)
    rng = np.random.default_rng(5)
    sigma2 = 0.25
    draws = np.array([sample_snr_profile(config, sigma2, rng).values for _ in range(20000)])
    # |g|^2 is exponential with mean 2*variance; the standard error here is ~0.4%.
    assert draws.mean() == pytest.approx(mean / sigma2, rel=0.02)


def test_profile_sampling_deterministic():
    config = ChannelConfig(n_users=5, snr_sweep_db=(0,))
    a = [sample_snr_profile(config, 1.0, np.random.default_rng(9)) for _ in range(3)]
    assert a[0] == a[1] == a[2]


def test_db_convention():
    assert sigma2_from_db(10.0) == pytest.approx(0.1)
    assert sigma2_from_db(0.0) == 1.0


def test_single_trial_equals_direct_evaluation():
    n = 5
    config = ChannelConfig(n_users=n, snr_sweep_db=(3.0,), trials=1, seed=7)
    (stats,) = run_gap_experiment(config)
    rng = block_rng(7, 0, 0)
    p = sample_snr_profile(config, sigma2_from_db(3.0), rng)
    code = rng.integers(1, n + 1, size=n - 2).tolist()
    rand = evaluate(prufer_decode(code, n), p, BoundKind.EXACT)
    chain = evaluate(build_client_graph(chain_ordering(n), n), p, BoundKind.EXACT)
    star = evaluate(build_client_graph(star_ordering(n), n), p, BoundKind.EXACT)
    assert stats.trials == 1
    assert stats.mean_optimal_common == pytest.approx(chain.common_rate, rel=1e-12, abs=1e-15)
    assert stats.mean_random_common == pytest.approx(rand.common_rate, rel=1e-12, abs=1e-15)
    assert stats.mean_optimal_sum == pytest.approx(star.sum_rate, rel=1e-12)
    assert stats.mean_random_sum == pytest.approx(rand.sum_rate, rel=1e-12)


def test_gap_ratios_are_ratio_of_means():
    config = ChannelConfig(n_users=4, snr_sweep_db=(5.0,), trials=3000, seed=2, block_size=1000)
    (s,) = run_gap_experiment(config)
    assert s.g_c == (s.mean_optimal_common - s.mean_random_common) / s.mean_optimal_common
    assert s.g_s == (s.mean_optimal_sum - s.mean_random_sum) / s.mean_optimal_sum
    assert 0 <= s.g_c <= 1 and 0 <= s.g_s <= 1


def test_invariant_counters_are_clean():
    config = ChannelConfig(n_users=6, snr_sweep_db=(0.0, 10.0, 20.0), trials=5000, seed=4)
    for s in run_gap_experiment(config):
        assert s.regime_trials > 0
        assert s.dominance_violations == 0
        assert s.gap_bound_violations == 0


def test_workers_do_not_change_results():
    base = dict(n_users=5, snr_sweep_db=(1.0, 7.0), trials=2500, seed=3, block_size=512)
    one = run_gap_experiment(ChannelConfig(**base, workers=1))
    many = run_gap_experiment(ChannelConfig(**base, workers=4))
    assert one == many
    assert to_csv(one) == to_csv(many)


def test_csv_format():
    config = ChannelConfig(n_users=3, snr_sweep_db=(1.0, 2.5), trials=10, seed=1)
    text = to_csv(run_gap_experiment(config))
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[-1] == "" and len(lines) == 4
    fields = lines[2].split(",")
    assert fields[:3] == ["2.5", "3", "10"]
    assert all(len(f.replace(".", "").replace("-", "").lstrip("0")) <= 12 or "e" in f for f in fields[3:])
    assert "\r" not in text


def test_two_users_has_no_gap():
    config = ChannelConfig(n_users=2, snr_sweep_db=(5.0,), trials=200, seed=1)
    (s,) = run_gap_experiment(config)
    assert s.g_c == 0.0 and s.g_s == 0.0


def test_zero_optimal_rate_gives_nan_gap():
    config = ChannelConfig(n_users=8, snr_sweep_db=(-40.0,), trials=20, seed=1)
    (s,) = run_gap_experiment(config)
    assert s.mean_optimal_common == 0.0
    assert math.isnan(s.g_c)
