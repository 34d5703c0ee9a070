"""Seeded Monte-Carlo trial batches: outage estimates and empirical PDFs.

Trials are processed in fixed-size blocks addressed by (seed, block index),
so the variates consumed by trial t never depend on how many workers run or
how blocks are scheduled.  Per-block results are integers (outage counts,
histogram counts) or block-ordered arrays, and the reduction is performed in
block-index order; outputs are therefore bit-identical for any worker count.

``model="physical"`` evaluates the full signal-chain SINR formulas on channel
realizations.  ``model="component"`` draws the analytic component model
(independent ratio numerator, hypoexponential interference, cooperation sum)
instead, which is the sampling model the closed-form densities describe; use
it to validate those densities without the physical-model correlation between
a user's desired and interfering powers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, derive_rates
from .sampling import draw_block, sample_component_sinr
from .sinr import Scenario, scheme_sinr

BLOCK_SIZE = 1 << 16
RETENTION_CAP = 1_000_000


@dataclass(frozen=True)
class SimResult:
    scenario: Scenario
    k: int
    trials: int
    outage_hat: float
    ci95_halfwidth: float
    seed: int
    sinr_samples: np.ndarray | None = None


@dataclass(frozen=True)
class EmpiricalPdf:
    scenario: Scenario
    k: int
    trials: int
    seed: int
    bin_edges: np.ndarray
    density: np.ndarray
    sample_mean: float


def _component_kind(scenario: Scenario) -> str:
    imp = scenario.imp
    if imp.timing_imperfect:
        return "timing_v_eta" if imp.sic_imperfect else "timing_v"
    if imp.csi_imperfect:
        return "sum_l_chi"
    if imp.sic_imperfect:
        return "sum_l_eta"
    return "sum_l"


def _sinr_block(scenario: Scenario, k: int, config: SystemConfig,
                seed: int, block_index: int, block_size: int) -> np.ndarray:
    real = draw_block(seed, block_index, block_size, config, scenario.imp,
                      with_relay=(scenario.scheme == "ccn"))
    return np.asarray(scheme_sinr(scenario, k, real, config))


def _component_block(scenario: Scenario, k: int, config: SystemConfig,
                     seed: int, n: int) -> np.ndarray:
    if k < 3:
        raise ValueError("the component model covers cooperating users (k >= 3)")
    imp = scenario.imp
    rp = derive_rates(config, imp, k, upsilon=1.0)
    return sample_component_sinr(
        _component_kind(scenario), n, seed,
        lambda_h=rp.lambda_h, lambda_i=rp.lambda_i, lambda_g=rp.lambda_g,
        lambda_eta=rp.lambda_eta, lambda_chi=rp.lambda_chi, eps1=imp.eps1)


def _map_blocks(fn, n_blocks: int, workers: int) -> list:
    if workers <= 1 or n_blocks <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_blocks)))


def _physical_samples(scenario, k, trials, seed, config, workers) -> np.ndarray:
    n_blocks = (trials + BLOCK_SIZE - 1) // BLOCK_SIZE

    def one(b):
        s = _sinr_block(scenario, k, config, seed, b, BLOCK_SIZE)
        hi = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        return s[:hi]

    return np.concatenate(_map_blocks(one, n_blocks, workers))


def collect_sinr_samples(scenario: Scenario, k: int, trials: int, seed: int,
                         config: SystemConfig, workers: int = 1,
                         model: str = "physical") -> np.ndarray:
    """The per-trial SINR vector (trials must stay within the retention cap)."""
    if trials > RETENTION_CAP:
        raise ValueError(f"sample retention is capped at {RETENTION_CAP}")
    if model == "physical":
        return _physical_samples(scenario, k, trials, seed, config, workers)
    if model == "component":
        return _component_block(scenario, k, config, seed, trials)
    raise ValueError(f"unknown model {model!r}")


def simulate_outage(scenario: Scenario, k: int, gamma_th: float, trials: int,
                    seed: int, config: SystemConfig, workers: int = 1,
                    model: str = "physical", retain: bool = False) -> SimResult:
    """Fraction of trials with SINR strictly below gamma_th.

    Deterministic in (seed, trials, scenario); the worker count only affects
    wall time.  ci95_halfwidth = 1.96 sqrt(p(1-p)/n).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    samples = None
    if model == "component":
        s = _component_block(scenario, k, config, seed, trials)
        count = int(np.count_nonzero(s < gamma_th))
        if retain:
            samples = s
    else:
        n_blocks = (trials + BLOCK_SIZE - 1) // BLOCK_SIZE

        def one(b):
            s = _sinr_block(scenario, k, config, seed, b, BLOCK_SIZE)
            hi = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
            return int(np.count_nonzero(s[:hi] < gamma_th))

        count = sum(_map_blocks(one, n_blocks, workers))
        if retain:
            if trials > RETENTION_CAP:
                raise ValueError(f"sample retention is capped at {RETENTION_CAP}")
            samples = _physical_samples(scenario, k, trials, seed, config, workers)
    p = count / trials
    ci = 1.96 * math.sqrt(p * (1.0 - p) / trials)
    return SimResult(scenario=scenario, k=k, trials=trials, outage_hat=p,
                     ci95_halfwidth=ci, seed=seed, sinr_samples=samples)


def outage_curve(scenario: Scenario, k: int, gamma_grid, trials: int, seed: int,
                 config: SystemConfig, workers: int = 1,
                 model: str = "physical") -> list[SimResult]:
    """Outage estimates for a threshold grid from one shared sample set.

    Sharing the samples makes the curve monotone in gamma_th by construction.
    """
    gammas = np.asarray(gamma_grid, dtype=float)
    if model == "component":
        s = _component_block(scenario, k, config, seed, trials)
        counts = np.array([int(np.count_nonzero(s < g)) for g in gammas])
    else:
        n_blocks = (trials + BLOCK_SIZE - 1) // BLOCK_SIZE

        def one(b):
            s = _sinr_block(scenario, k, config, seed, b, BLOCK_SIZE)
            hi = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
            return np.array([int(np.count_nonzero(s[:hi] < g)) for g in gammas])

        counts = sum(_map_blocks(one, n_blocks, workers))
    out = []
    for g, c in zip(gammas, counts):
        p = c / trials
        ci = 1.96 * math.sqrt(p * (1.0 - p) / trials)
        out.append(SimResult(scenario=scenario, k=k, trials=trials, outage_hat=p,
                             ci95_halfwidth=ci, seed=seed))
    return out


def empirical_pdf(scenario: Scenario, k: int, trials: int, bins: int, seed: int,
                  config: SystemConfig, workers: int = 1,
                  value_range: tuple[float, float] | None = None,
                  model: str = "physical") -> EmpiricalPdf:
    """Normalized SINR histogram (integrates to one over its bins).

    Below the retention cap the full sample vector is kept and binned in one
    shot; above it, counts stream block by block into fixed bins whose range
    comes from the first block (doubled max) unless given explicitly.
    """
    if bins < 10:
        raise ValueError("bins must be >= 10")
    if trials <= RETENTION_CAP:
        s = collect_sinr_samples(scenario, k, trials, seed, config, workers, model)
        density, edges = np.histogram(s, bins=bins, range=value_range, density=True)
        return EmpiricalPdf(scenario=scenario, k=k, trials=trials, seed=seed,
                            bin_edges=edges, density=density,
                            sample_mean=float(np.mean(s)))
    if model != "physical":
        raise ValueError("streaming histograms support the physical model only")
    first = _sinr_block(scenario, k, config, seed, 0, BLOCK_SIZE)
    if value_range is None:
        value_range = (0.0, 2.0 * float(np.max(first)))
    edges = np.linspace(value_range[0], value_range[1], bins + 1)
    n_blocks = (trials + BLOCK_SIZE - 1) // BLOCK_SIZE

    def one(b):
        s = _sinr_block(scenario, k, config, seed, b, BLOCK_SIZE)
        hi = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        s = s[:hi]
        counts, _ = np.histogram(s, bins=edges)
        return counts.astype(np.int64), float(np.sum(s)), int(np.count_nonzero(
            (s >= value_range[0]) & (s <= value_range[1])))

    parts = _map_blocks(one, n_blocks, workers)
    counts = sum(p[0] for p in parts)
    total = sum(p[1] for p in parts)
    covered = sum(p[2] for p in parts)
    width = np.diff(edges)
    density = counts / (covered * width) if covered else counts * 0.0
    return EmpiricalPdf(scenario=scenario, k=k, trials=trials, seed=seed,
                        bin_edges=edges, density=density,
                        sample_mean=total / trials)
