"""Monte Carlo comparison of optimal and uniformly random orderings under Rayleigh fading."""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import SnrProfile, canonicalize
from .oracle import decode_batch
from .rates import BoundKind, batch_user_rates

CSV_HEADER = "snr_db,n,trials,mean_cr_opt,mean_cr_rand,mean_sr_opt,mean_sr_rand,g_c,g_s"
DEFAULT_BLOCK = 4096


@dataclass(frozen=True)
class ChannelConfig:
    n_users: int
    snr_sweep_db: tuple[float, ...]
    trials: int = 100_000
    seed: int = 0
    transmit_power: float | tuple[float, ...] = 1.0
    fading_variance: float = 0.5
    # Trials are drawn in fixed-size blocks, each with its own substream.
    # Changing block_size changes the random draws; changing workers does not.
    block_size: int = DEFAULT_BLOCK
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_sweep_db", tuple(float(v) for v in self.snr_sweep_db))
        if self.n_users < 2:
            raise ValueError(f"need at least 2 users, got {self.n_users}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.fading_variance > 0:
            raise ValueError("fading_variance must be positive")
        if self.block_size < 1 or self.workers < 1:
            raise ValueError("block_size and workers must be >= 1")
        if not all(p > 0 for p in self.powers()):
            raise ValueError("transmit powers must be positive")

    def powers(self) -> np.ndarray:
        p = np.broadcast_to(np.asarray(self.transmit_power, dtype=float), (self.n_users,))
        return p.copy()


def sigma2_from_db(snr_db: float) -> float:
    """Noise power for a sweep point given as 10*log10(1/sigma^2)."""
    return 10.0 ** (-snr_db / 10.0)


def _draw_snrs(config: ChannelConfig, sigma2: float, rng: np.random.Generator, size: int) -> np.ndarray:
    g = rng.normal(0.0, math.sqrt(config.fading_variance), size=(size, config.n_users, 2))
    return config.powers() * (g**2).sum(axis=-1) / sigma2


def sample_snr_profile(config: ChannelConfig, sigma2: float, rng: np.random.Generator) -> SnrProfile:
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    return canonicalize(_draw_snrs(config, sigma2, rng, 1)[0])


def block_rng(seed: int, sweep_index: int, block_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(sweep_index, block_index)))


@dataclass(frozen=True)
class TrialRates:
    cr_opt: np.ndarray
    cr_rand: np.ndarray
    sr_opt: np.ndarray
    sr_rand: np.ndarray
    in_regime: np.ndarray
    common_bound: np.ndarray
    sum_bound: np.ndarray


def trial_rates(x: np.ndarray, codes: np.ndarray) -> TrialRates:
    """Chain, star and random-tree rates for each row of sorted SNRs ``x``."""
    n = x.shape[1]
    chain = np.array([(i, i + 1) for i in range(n - 1)])
    star = np.array([(i, 0) for i in range(1, n)])
    rand = decode_batch(codes, n)
    r_chain = batch_user_rates(x, chain, BoundKind.EXACT)
    r_star = batch_user_rates(x, star, BoundKind.EXACT)
    r_rand = batch_user_rates(x, rand, BoundKind.EXACT)
    x1, xn = x[:, 0], x[:, -1]
    return TrialRates(
        cr_opt=r_chain.min(axis=1),
        cr_rand=r_rand.min(axis=1),
        sr_opt=r_star.sum(axis=1),
        sr_rand=r_rand.sum(axis=1),
        in_regime=x1 + x1 / (x1 + xn) >= 1,
        common_bound=np.log2((1 + 2 * xn) / (2 * x1)) / (2 * (n - 1)),
        sum_bound=0.5 * np.log2(xn * (1 + 2 * x1) / (x1 * (1 + 2 * xn))),
    )


def _run_block(config: ChannelConfig, sweep_index: int, block_index: int, size: int) -> TrialRates:
    rng = block_rng(config.seed, sweep_index, block_index)
    sigma2 = sigma2_from_db(config.snr_sweep_db[sweep_index])
    x = np.sort(_draw_snrs(config, sigma2, rng, size), axis=1)
    codes = rng.integers(1, config.n_users + 1, size=(size, config.n_users - 2))
    return trial_rates(x, codes)


@dataclass(frozen=True)
class GapStats:
    snr_db: float
    n: int
    trials: int
    mean_optimal_common: float
    mean_random_common: float
    mean_optimal_sum: float
    mean_random_sum: float
    g_c: float
    g_s: float
    regime_trials: int
    dominance_violations: int
    gap_bound_violations: int

    def csv_row(self) -> str:
        nums = [
            self.mean_optimal_common,
            self.mean_random_common,
            self.mean_optimal_sum,
            self.mean_random_sum,
            self.g_c,
            self.g_s,
        ]
        return ",".join([_fmt(self.snr_db), str(self.n), str(self.trials)] + [_fmt(v) for v in nums])


def _fmt(v: float) -> str:
    return format(v, ".12g")


def _relative_gap(opt: float, rand: float) -> float:
    return (opt - rand) / opt if opt > 0 else math.nan


def _slack(ref: np.ndarray) -> np.ndarray:
    return 1e-12 * np.maximum(1.0, np.abs(ref))


def summarize(snr_db: float, n: int, r: TrialRates) -> GapStats:
    trials = r.cr_opt.size
    # fsum is exactly rounded, so the means do not depend on block order.
    means = [math.fsum(a.tolist()) / trials for a in (r.cr_opt, r.cr_rand, r.sr_opt, r.sr_rand)]
    reg = r.in_regime
    dominance = (r.cr_opt < r.cr_rand - _slack(r.cr_rand)) | (r.sr_opt < r.sr_rand - _slack(r.sr_rand))
    over_bound = (r.cr_opt - r.cr_rand > r.common_bound + _slack(r.cr_opt)) | (
        r.sr_opt - r.sr_rand > r.sum_bound + _slack(r.sr_opt)
    )
    return GapStats(
        snr_db=snr_db,
        n=n,
        trials=trials,
        mean_optimal_common=means[0],
        mean_random_common=means[1],
        mean_optimal_sum=means[2],
        mean_random_sum=means[3],
        g_c=_relative_gap(means[0], means[1]),
        g_s=_relative_gap(means[2], means[3]),
        regime_trials=int(reg.sum()),
        dominance_violations=int((dominance & reg).sum()),
        gap_bound_violations=int((over_bound & reg).sum()),
    )


def _concat(parts: Sequence[TrialRates]) -> TrialRates:
    fields = TrialRates.__dataclass_fields__
    return TrialRates(**{f: np.concatenate([getattr(p, f) for p in parts]) for f in fields})


def run_gap_experiment(config: ChannelConfig) -> list[GapStats]:
    """One GapStats per sweep point; bit-identical for a given config regardless of ``workers``."""
    jobs = []
    for s in range(len(config.snr_sweep_db)):
        for b, start in enumerate(range(0, config.trials, config.block_size)):
            jobs.append((s, b, min(config.block_size, config.trials - start)))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda job: _run_block(config, *job), jobs))
    else:
        results = [_run_block(config, *job) for job in jobs]
    out = []
    for s, snr_db in enumerate(config.snr_sweep_db):
        parts = [r for (js, _, _), r in zip(jobs, results) if js == s]
        out.append(summarize(snr_db, config.n_users, _concat(parts)))
    return out


def to_csv(stats: Sequence[GapStats]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in stats:
        buf.write(row.csv_row() + "\n")
    return buf.getvalue()
