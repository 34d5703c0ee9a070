"""Seeded generation of channel and error variates with deterministic substreams.

Every trial consumes a fixed number of uniforms from a Philox counter stream,
so trial t always sees the same variates no matter how trials are batched or
distributed across workers.  Exponentials come from inverse-CDF (-log1p(-u))
and complex Gaussians from Box-Muller pairs; both consume a fixed uniform
budget, which is what makes the scalar and block paths bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ImpairmentSpec, SystemConfig, csi_coefficients, serving_pair


@dataclass(frozen=True)
class StreamKey:
    """Addresses one trial's variates inside the master stream."""

    master_seed: int
    trial_index: int = 0
    variate_counter: int = 0


@dataclass(frozen=True)
class ChannelRealization:
    """One draw (or a batch of draws) of every channel variate.

    h2[..., k-1] is |h_k|^2.  g_pair[..., k-1, :] holds the two complex
    inter-user coefficients seen by user k from its serving pair, index 0 the
    early transmitter and index 1 the late one.  varrho_pair are the matching
    estimation-error components (all zeros under perfect CSI).  g_relay2 is
    the |g_{k,j}|^2 lower triangle used only by the decode-and-forward
    cooperative scheme, and is None unless requested.
    """

    K: int
    h2: np.ndarray
    g_pair: np.ndarray
    g_eta2: np.ndarray
    varrho_pair: np.ndarray
    g_relay2: np.ndarray | None = None

    def relay_gain2(self, k: int, j: int) -> np.ndarray:
        """|g_{k,j}|^2 for j < k (decode-and-forward links)."""
        if self.g_relay2 is None:
            raise ValueError("realization was drawn without relay channels")
        return self.g_relay2[..., _tri_index(k, j)]


def _tri_index(k: int, j: int) -> int:
    if not 1 <= j < k:
        raise ValueError(f"need 1 <= j < k, got k={k}, j={j}")
    return (k - 2) * (k - 1) // 2 + (j - 1)


_WORD_ALIGN = 4  # the counter RNG emits 4 words per counter step


def _aligned(n: int) -> int:
    return -(-n // _WORD_ALIGN) * _WORD_ALIGN


def uniforms_per_trial(K: int, with_relay: bool = False) -> int:
    """Per-trial uniform budget, padded so trial offsets are whole counter steps."""
    n = K + 4 * K + 1 + 4 * K
    if with_relay:
        n += K * (K - 1) // 2
    return _aligned(n)


def _uniform_block(master_seed: int, offset_words: int, n_words: int) -> np.ndarray:
    if offset_words % _WORD_ALIGN:
        raise ValueError(f"stream offsets must be multiples of {_WORD_ALIGN}")
    bitgen = np.random.Philox(key=master_seed)
    bitgen.advance(offset_words // _WORD_ALIGN)
    return np.random.Generator(bitgen).random(n_words)


def _standard_complex(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    # Box-Muller: unit-variance complex normal (0.5 per real dimension).
    r = np.sqrt(-np.log1p(-u1))
    ang = 2.0 * math.pi * u2
    return r * (np.cos(ang) + 1j * np.sin(ang))


def _realization_from_uniforms(u: np.ndarray, config: SystemConfig,
                               imp: ImpairmentSpec, with_relay: bool) -> ChannelRealization:
    K = config.K
    lead = u.shape[:-1]
    pos = 0

    h2 = -config.zeta_h * np.log1p(-u[..., pos:pos + K])
    pos += K

    gu = u[..., pos:pos + 4 * K].reshape(lead + (K, 2, 2))
    g_pair = math.sqrt(config.zeta_g) * _standard_complex(gu[..., 0], gu[..., 1])
    pos += 4 * K

    g_eta2 = -config.zeta_eta * np.log1p(-u[..., pos])
    pos += 1

    vu = u[..., pos:pos + 4 * K].reshape(lead + (K, 2, 2))
    chi = csi_coefficients(imp.sigma_omega2, config.zeta_g)
    varrho = math.sqrt(chi.sigma_rho2) * _standard_complex(vu[..., 0], vu[..., 1])
    pos += 4 * K

    g_relay2 = None
    if with_relay:
        tri = K * (K - 1) // 2
        g_relay2 = -config.zeta_g * np.log1p(-u[..., pos:pos + tri])
        pos += tri

    return ChannelRealization(K=K, h2=h2, g_pair=g_pair, g_eta2=g_eta2,
                              varrho_pair=varrho, g_relay2=g_relay2)


def draw_realization(key: StreamKey, config: SystemConfig, imp: ImpairmentSpec,
                     with_relay: bool = False) -> ChannelRealization:
    """One complete draw; a deterministic function of the key.

    Distinct (seed, trial, counter) triples address disjoint stream regions;
    the counter selects an independent substream for the same trial index.
    """
    V = uniforms_per_trial(config.K, with_relay)
    offset = (key.trial_index + (key.variate_counter << 32)) * V
    u = _uniform_block(key.master_seed, offset, V)
    return _realization_from_uniforms(u, config, imp, with_relay)


def draw_block(master_seed: int, block_index: int, block_size: int,
               config: SystemConfig, imp: ImpairmentSpec,
               with_relay: bool = False) -> ChannelRealization:
    """Trials [block_index*block_size, ...) as batched arrays.

    Row r equals draw_realization for trial_index = block_index*block_size + r,
    which is the property the parallel harness leans on.
    """
    V = uniforms_per_trial(config.K, with_relay)
    offset = block_index * block_size * V
    u = _uniform_block(master_seed, offset, block_size * V).reshape(block_size, V)
    return _realization_from_uniforms(u, config, imp, with_relay)


def draw_hypoexp(key: StreamKey, rates) -> float:
    """One sum of independent exponentials with the given rates.

    Sampling by summation, so equal rates are fine (no distinct-rate
    restriction as in the analytic density).
    """
    rates = np.asarray(rates, dtype=float)
    if rates.ndim != 1 or rates.size == 0:
        raise ValueError("rates must be a nonempty 1-D sequence")
    if np.any(rates <= 0):
        raise ValueError(f"rates must be positive, got {rates}")
    stride = _aligned(rates.size)
    offset = (key.trial_index + (key.variate_counter << 32)) * stride
    u = _uniform_block(key.master_seed, offset, rates.size)
    return float(np.sum(-np.log1p(-u) / rates))


def draw_hypoexp_block(master_seed: int, n: int, rates,
                       stream_offset: int = 0) -> np.ndarray:
    """n hypoexponential draws; stream_offset selects a disjoint substream."""
    rates = np.asarray(rates, dtype=float)
    if np.any(rates <= 0):
        raise ValueError(f"rates must be positive, got {rates}")
    stride = _aligned(rates.size)
    u = _uniform_block(master_seed, stream_offset * stride * n,
                       n * stride).reshape(n, stride)
    return np.sum(-np.log1p(-u[:, :rates.size]) / rates, axis=1)


# -- component-model sampling -------------------------------------------------
#
# Draws straight from the analytic component model (independent A, B, F and
# coop variates) instead of the physical signal chain.  Used to validate the
# closed-form densities against their own sampling model.

def sample_component_sinr(kind: str, n: int, master_seed: int, *,
                          lambda_h: float, lambda_i, lambda_g: float,
                          lambda_eta: float | None = None,
                          lambda_chi: float | None = None,
                          eps1: float = 1.0) -> np.ndarray:
    """n draws of the composite SINR for one analytic family.

    kind: "sum_l" (A/B + Z), "sum_l_eta" (A/(F+B) + Z), "sum_l_chi"
    (A/B + Z_chi), "timing_v" (A/B + R), "timing_v_eta" (A/(F+B) + R)
    with R = (C + eps1*D)^2/(C + D).
    """
    lambda_i = tuple(lambda_i)
    w_rates = list(lambda_i)
    if kind in ("sum_l_eta", "timing_v_eta"):
        if lambda_eta is None:
            raise ValueError(f"{kind} requires lambda_eta")
        w_rates.append(lambda_eta)
    coop_rate = lambda_g
    if kind == "sum_l_chi":
        if lambda_chi is None:
            raise ValueError("sum_l_chi requires lambda_chi")
        coop_rate = lambda_chi
    elif kind not in ("sum_l", "sum_l_eta", "timing_v", "timing_v_eta"):
        raise ValueError(f"unknown component kind {kind!r}")

    V = _aligned(1 + len(w_rates) + 2)
    u = _uniform_block(master_seed, 0, n * V).reshape(n, V)
    A = -np.log1p(-u[:, 0]) / lambda_h
    if w_rates:
        W = np.sum(-np.log1p(-u[:, 1:1 + len(w_rates)]) / np.asarray(w_rates), axis=1)
        q = A / W
    else:
        q = A
    c_col = 1 + len(w_rates)
    C = -np.log1p(-u[:, c_col]) / coop_rate
    D = -np.log1p(-u[:, c_col + 1]) / coop_rate
    if kind.startswith("timing"):
        coop = (C + eps1 * D) ** 2 / (C + D)
    else:
        coop = C + D
    return q + coop
