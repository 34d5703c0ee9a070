"""Instantaneous per-user SINR for every supported scenario.

Two evaluation paths coexist on purpose:

* ``stbc_combine_with_offset`` runs the explicit two-slot signal chain
  (receiver equations, then the pair combiner) and is the ground truth for
  the combiner algebra;
* ``sinr_with_impairments`` evaluates the per-parity closed SINR forms.

For odd-indexed receivers the second path keeps the published self-gain
inter-symbol term eps2*|g_early|^2 verbatim, whereas the combiner algebra
produces eps2*|g_late|^2.  The two coincide whenever eps2 = 0 and are equal
in distribution otherwise (the pair gains are exchangeable); see the module
tests for the cross-check each path is held to.

Everything broadcasts over leading batch axes of the realization arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ImpairmentSpec, SystemConfig, csi_coefficients
from .sampling import ChannelRealization


class UnsupportedScenarioError(ValueError):
    """Raised for impairment combinations with no derived SINR form."""


_SCHEMES = ("noma", "ccn", "stbc-cnoma")


@dataclass(frozen=True)
class Scenario:
    """Scheme plus impairment axes; exactly one variant per axis."""

    scheme: str = "stbc-cnoma"
    imp: ImpairmentSpec = ImpairmentSpec()

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {_SCHEMES}")
        if self.scheme in ("noma", "ccn"):
            if self.imp.timing_imperfect or self.imp.csi_imperfect:
                raise UnsupportedScenarioError(
                    f"{self.scheme} supports the SIC axis only; timing/CSI "
                    "impairments are modeled for stbc-cnoma")
        if self.imp.timing_imperfect and self.imp.csi_imperfect:
            raise UnsupportedScenarioError(
                "joint timing + CSI impairment has no derived SINR form")
        if self.imp.sic_imperfect and self.imp.csi_imperfect:
            raise UnsupportedScenarioError(
                "joint SIC + CSI impairment has no derived SINR form")

    def label(self) -> str:
        bits = [self.scheme]
        if self.imp.timing_imperfect:
            bits.append(f"tau={self.imp.tau:g}")
        if self.imp.sic_imperfect:
            bits.append(f"ipSIC(phi_eta={self.imp.phi_eta:g})")
        if self.imp.csi_imperfect:
            bits.append(f"ipCSI(sw2={self.imp.sigma_omega2:g})")
        return " ".join(bits)


@dataclass(frozen=True)
class SinrSample:
    user: int
    direct_term: np.ndarray
    coop_term: np.ndarray
    total: np.ndarray


def direct_noma_sinr(k: int, real: ChannelRealization, config: SystemConfig,
                     imp: ImpairmentSpec) -> np.ndarray:
    """Direct-phase SINR: |h_k|^2 p_k / (eta |g_eta|^2 p_eta + |h_k|^2 sum p_i + sigma2)."""
    if not 1 <= k <= config.K:
        raise ValueError(f"user index {k} out of range 1..{config.K}")
    h2k = real.h2[..., k - 1]
    interference = h2k * (sum(config.phi[: k - 1]) * config.p_noma)
    residual = 0.0
    if imp.eta == 1:
        residual = real.g_eta2 * (imp.phi_eta * config.p_noma)
    return h2k * config.user_power(k) / (residual + interference + config.sigma2)


def stbc_coop_sinr_perfect(k: int, real: ChannelRealization,
                           config: SystemConfig) -> np.ndarray:
    """Cooperation-phase SINR under perfect sync: (|g1|^2 + |g2|^2) p_s / sigma2."""
    if k < 3:
        raise ValueError(f"user {k} has no cooperation phase (first pair transmits only)")
    g = real.g_pair[..., k - 1, :]
    return (np.abs(g[..., 0]) ** 2 + np.abs(g[..., 1]) ** 2) * config.p_s / config.sigma2


def default_relay_powers(k: int, config: SystemConfig) -> np.ndarray:
    """q_{k,k-j} for j=1..k-1: transmitter u serves users u+1..K, splitting
    p_s evenly across its K-u relay transmissions."""
    return np.array([config.p_s / (config.K - (k - j)) for j in range(1, k)])


def ccn_sinr(k: int, real: ChannelRealization, config: SystemConfig,
             imp: ImpairmentSpec = ImpairmentSpec(),
             relay_powers=None) -> np.ndarray:
    """Decode-and-forward cooperative SINR with maximum-ratio combining.

    Each stronger user j < k relays to user k with power q_{k,k-j}; the relay
    branch for transmitter j sees all the other relay powers on the same link
    gain as interference.
    """
    if relay_powers is None:
        relay_powers = default_relay_powers(k, config)
    q = np.asarray(relay_powers, dtype=float)
    if q.shape != (k - 1,):
        raise ValueError(f"need {k - 1} relay powers for user {k}, got shape {q.shape}")
    total = direct_noma_sinr(k, real, config, imp)
    if k == 1:
        return total
    qsum = q.sum()
    for j in range(1, k):
        gain = real.relay_gain2(k, k - j)
        total = total + gain * q[j - 1] / (gain * qsum + config.sigma2)
    return total


def stbc_combine_with_offset(real: ChannelRealization, k_odd: int,
                             x_m, x_n, imp: ImpairmentSpec,
                             noise=None) -> tuple[np.ndarray, np.ndarray]:
    """Two-slot receive-and-combine for the receiving pair (k_odd, k_odd+1).

    Runs the receiver equations for both slots and then the pair combiner:
    v_m = g1* r_m1 + g2 r_m2*, v_n = g2'* r_n1 - g1' r_n2*.  Symbols are
    unit-power; transmit scaling and noise power are applied by the caller.
    ``noise`` is ((xi_m1, xi_m2), (xi_n1, xi_n2)) or None for noiseless.
    """
    if k_odd < 3 or k_odd % 2 == 0:
        raise ValueError(f"k_odd must be an odd receiving user >= 3, got {k_odd}")
    e1, e2 = imp.eps1, imp.eps2
    if noise is None:
        zeros = np.zeros_like(real.h2[..., 0], dtype=complex)
        noise = ((zeros, zeros), (zeros, zeros))
    (xi_m1, xi_m2), (xi_n1, xi_n2) = noise

    gm = real.g_pair[..., k_odd - 1, :]
    gn = real.g_pair[..., k_odd, :]

    r_m1 = gm[..., 0] * x_m + gm[..., 1] * e1 * x_n + xi_m1
    r_m2 = (-gm[..., 0] * np.conj(x_n) + gm[..., 1] * e1 * np.conj(x_m)
            + gm[..., 1] * e2 * x_n + xi_m2)
    v_m = np.conj(gm[..., 0]) * r_m1 + gm[..., 1] * np.conj(r_m2)

    r_n1 = gn[..., 0] * x_m + gn[..., 1] * e1 * x_n + xi_n1
    r_n2 = (-gn[..., 0] * np.conj(x_n) + gn[..., 1] * e1 * np.conj(x_m)
            + gn[..., 1] * e2 * x_n + xi_n2)
    v_n = np.conj(gn[..., 1]) * r_n1 - gn[..., 0] * np.conj(r_n2)

    return v_m, v_n


def coop_sinr_from_combiner(k: int, real: ChannelRealization,
                            config: SystemConfig, imp: ImpairmentSpec) -> np.ndarray:
    """Cooperation SINR from combiner signal statistics.

    Desired power over inter-symbol power plus combined noise power, with the
    inter-symbol amplitude read off the noiseless unit-symbol combiner output.
    """
    if k < 3:
        raise ValueError(f"user {k} has no cooperation phase")
    k_odd = k if k % 2 == 1 else k - 1
    v_m, v_n = stbc_combine_with_offset(real, k_odd, 1.0, 1.0, imp)
    g = real.g_pair[..., k - 1, :]
    g1sq = np.abs(g[..., 0]) ** 2
    g2sq = np.abs(g[..., 1]) ** 2
    desired = g1sq + imp.eps1 * g2sq
    v = v_m if k % 2 == 1 else v_n
    isi_amp = v - desired
    num = desired ** 2 * config.p_s
    den = np.abs(isi_amp) ** 2 * config.p_s + (g1sq + g2sq) * config.sigma2
    return num / den


def _coop_term(k: int, real: ChannelRealization, config: SystemConfig,
               imp: ImpairmentSpec) -> np.ndarray:
    g = real.g_pair[..., k - 1, :]
    g1, g2 = g[..., 0], g[..., 1]
    g1sq = np.abs(g1) ** 2
    g2sq = np.abs(g2) ** 2

    if imp.csi_imperfect:
        chi = csi_coefficients(imp.sigma_omega2, config.zeta_g)
        v = real.varrho_pair[..., k - 1, :]
        e1sq = np.abs(v[..., 0] + chi.rho * g1) ** 2
        e2sq = np.abs(v[..., 1] + chi.rho * g2) ** 2
        return (e1sq + e2sq) * config.p_s / config.sigma2

    if imp.timing_imperfect:
        e1, e2 = imp.eps1, imp.eps2
        desired = g1sq + e1 * g2sq
        if k % 2 == 1:
            # published odd-user form: the eps2 term self-couples the early gain
            isi2 = np.abs((e1 - 1.0) * np.conj(g1) * g2 + e2 * g1sq) ** 2
        else:
            isi2 = ((1.0 - e1) - e2) ** 2 * g1sq * g2sq
        return desired ** 2 * config.p_s / (isi2 * config.p_s
                                            + (g1sq + g2sq) * config.sigma2)

    return (g1sq + g2sq) * config.p_s / config.sigma2


def sinr_with_impairments(k: int, real: ChannelRealization, config: SystemConfig,
                          imp: ImpairmentSpec) -> SinrSample:
    """Closed-form SINR for user k under the active impairment family.

    Joint timing+CSI and SIC+CSI combinations are rejected: no formula family
    covers them.  Users 1 and 2 transmit in the cooperation phase, so their
    SINR is the direct term alone.
    """
    if imp.timing_imperfect and imp.csi_imperfect:
        raise UnsupportedScenarioError(
            "joint timing + CSI impairment has no derived SINR form")
    if imp.sic_imperfect and imp.csi_imperfect:
        raise UnsupportedScenarioError(
            "joint SIC + CSI impairment has no derived SINR form")
    direct = direct_noma_sinr(k, real, config, imp)
    if k < 3:
        coop = np.zeros_like(direct)
    else:
        coop = _coop_term(k, real, config, imp)
    return SinrSample(user=k, direct_term=direct, coop_term=coop, total=direct + coop)


def scheme_sinr(scenario: Scenario, k: int, real: ChannelRealization,
                config: SystemConfig) -> np.ndarray:
    """Total SINR for user k under the scenario's scheme."""
    if scenario.scheme == "noma":
        return direct_noma_sinr(k, real, config, scenario.imp)
    if scenario.scheme == "ccn":
        return ccn_sinr(k, real, config, scenario.imp)
    return sinr_with_impairments(k, real, config, scenario.imp).total
