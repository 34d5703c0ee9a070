"""Scenario parameters, validation, and derived distribution rates.

All analytic rate parameters are computed from noise-normalized received
powers (power / sigma2).  The closed-form machinery downstream was audited
against Monte-Carlo ground truth under exactly this normalization; with
sigma2 = 1 the rates reduce to the plain 1/(p*zeta) form.

Units: p_noma, p_s, sigma2 are linear watts.  The configuration file and the
CLI speak dB / dBm; conversion happens only at those boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

PHI_SUM_TOL = 1e-12


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


def noise_power_watts(psd_dbm_per_hz: float = -174.0, bandwidth_hz: float = 1e6) -> float:
    """Total noise power from a PSD and a bandwidth (1 MHz by default)."""
    return dbm_to_watts(psd_dbm_per_hz) * bandwidth_hz


@dataclass(frozen=True)
class SystemConfig:
    """Static downlink parameters shared by every trial.

    ``phi`` must ascend: the weakest user (highest index) gets the largest
    power coefficient.  ``zeta_*`` are mean-square channel gains.
    """

    K: int
    phi: tuple[float, ...]
    p_noma: float
    p_s: float
    sigma2: float
    zeta_h: float = 1.0
    zeta_g: float = 1.0
    zeta_eta: float = 1.0
    zeta_chi: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(p) for p in self.phi))

    def user_power(self, k: int) -> float:
        """p_k = phi_k * p_noma for the 1-based user index k."""
        return self.phi[k - 1] * self.p_noma


@dataclass(frozen=True)
class ImpairmentSpec:
    """Impairment knobs: timing offset, residual SIC, channel-estimation error.

    The timing offset tau (in symbol durations, T = 1) maps to the overlap
    coefficients via the rectangular-pulse model eps1 = 1 - tau, eps2 = tau,
    which reproduces the perfect-sync point (1, 0).  ``eps_override`` replaces
    that mapping with an explicit independent (eps1, eps2) pair for
    experimentation.
    """

    tau: float = 0.0
    eta: int = 0
    phi_eta: float = 0.0
    sigma_omega2: float = 0.0
    eps_override: tuple[float, float] | None = None

    @property
    def eps1(self) -> float:
        if self.eps_override is not None:
            return self.eps_override[0]
        return 1.0 - self.tau

    @property
    def eps2(self) -> float:
        if self.eps_override is not None:
            return self.eps_override[1]
        return self.tau

    @property
    def timing_imperfect(self) -> bool:
        return self.eps1 != 1.0 or self.eps2 != 0.0

    @property
    def sic_imperfect(self) -> bool:
        return self.eta == 1

    @property
    def csi_imperfect(self) -> bool:
        return self.sigma_omega2 > 0.0


class CsiCoefficients(NamedTuple):
    rho: float
    sigma_rho2: float
    sigma_chi2: float


def csi_coefficients(sigma_omega2: float, sigma_g2: float) -> CsiCoefficients:
    """Estimate-truth correlation and component variances.

    rho = sg2/(sg2+sw2); the true channel decomposes as g = rho*ghat + varrho
    with Var[varrho] = sg2*sw2/(sg2+sw2).  The effective per-branch gain
    varrho + rho*g is complex Gaussian with variance
    sigma_chi2 = sigma_rho2 + rho^2*sg2, which equals sg2 when sw2 = 0.
    """
    if sigma_omega2 < 0:
        raise ValueError("sigma_omega2 must be >= 0")
    if sigma_omega2 == 0.0:
        return CsiCoefficients(1.0, 0.0, sigma_g2)
    rho = sigma_g2 / (sigma_g2 + sigma_omega2)
    sigma_rho2 = sigma_g2 * sigma_omega2 / (sigma_g2 + sigma_omega2)
    return CsiCoefficients(rho, sigma_rho2, sigma_rho2 + rho * rho * sigma_g2)


@dataclass(frozen=True)
class RateParameters:
    """Distribution rate parameters for one (user, rate-threshold) query.

    All lambdas are exponential *rates* of the noise-normalized received
    powers: lambda_h = 1/((p_k/sigma2) zeta_h) and so on.  lambda_eta is None
    under perfect SIC.  gamma_th = 2^upsilon - 1 exactly.
    """

    lambda_h: float
    lambda_i: tuple[float, ...]
    lambda_g: float
    lambda_eta: float | None
    lambda_chi: float
    gamma_th: float
    upsilon: float

    @property
    def interferer_count(self) -> int:
        return len(self.lambda_i)


def validate(config: SystemConfig, imp: ImpairmentSpec) -> list[str]:
    """Return the list of violated invariants (empty iff usable)."""
    v: list[str] = []
    if config.K < 2:
        v.append(f"K must be >= 2, got {config.K}")
    if len(config.phi) != config.K:
        v.append(f"phi has {len(config.phi)} entries for K={config.K}")
    if config.phi:
        if abs(sum(config.phi) - 1.0) > PHI_SUM_TOL:
            v.append(f"phi must sum to 1 within {PHI_SUM_TOL}, got {sum(config.phi)!r}")
        if any(b < a for a, b in zip(config.phi, config.phi[1:])):
            v.append("phi not ascending (weakest user must get the most power)")
        if any(p <= 0 for p in config.phi):
            v.append("phi entries must be strictly positive")
    for name in ("p_noma", "p_s", "sigma2", "zeta_h", "zeta_g", "zeta_eta", "zeta_chi"):
        if getattr(config, name) <= 0:
            v.append(f"{name} must be strictly positive")
    if not 0.0 <= imp.tau <= 1.0:
        v.append(f"tau out of [0,1]: {imp.tau}")
    if imp.eta not in (0, 1):
        v.append(f"eta must be 0 or 1, got {imp.eta}")
    if imp.eta == 1 and imp.phi_eta <= 0:
        v.append("phi_eta must be > 0 when eta=1")
    if imp.phi_eta < 0:
        v.append(f"phi_eta must be >= 0, got {imp.phi_eta}")
    if imp.sigma_omega2 < 0:
        v.append(f"sigma_omega2 must be >= 0, got {imp.sigma_omega2}")
    if imp.eps_override is not None:
        e1, e2 = imp.eps_override
        if not (0.0 < e1 <= 1.0 and 0.0 <= e2 <= 1.0):
            v.append(f"eps_override out of range: {imp.eps_override}")
    return v


def derive_rates(config: SystemConfig, imp: ImpairmentSpec, k: int, upsilon: float) -> RateParameters:
    """Rates for user k's SINR components and the threshold for rate upsilon.

    Pure function of its inputs.  Raises ValueError when k is out of range.
    """
    if not 1 <= k <= config.K:
        raise ValueError(f"user index k={k} out of range 1..{config.K}")
    s2 = config.sigma2
    lam_h = 1.0 / ((config.user_power(k) / s2) * config.zeta_h)
    lam_i = tuple(1.0 / ((config.phi[i] * config.p_noma / s2) * config.zeta_h)
                  for i in range(k - 1))
    lam_g = 1.0 / ((config.p_s / s2) * config.zeta_g)
    if imp.eta == 1 and imp.phi_eta > 0:
        lam_eta = 1.0 / ((imp.phi_eta * config.p_noma / s2) * config.zeta_eta)
    else:
        lam_eta = None
    chi = csi_coefficients(imp.sigma_omega2, config.zeta_g)
    lam_chi = 1.0 / ((config.p_s / s2) * chi.sigma_chi2)
    return RateParameters(
        lambda_h=lam_h,
        lambda_i=lam_i,
        lambda_g=lam_g,
        lambda_eta=lam_eta,
        lambda_chi=lam_chi,
        gamma_th=2.0 ** upsilon - 1.0,
        upsilon=upsilon,
    )


def pair_users(K: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Relay chain as (transmit-pair, receive-pair) stages.

    Even K: ((1,2)->(3,4)), ((3,4)->(5,6)), ..., ((K-3,K-2)->(K-1,K)).
    Odd K: the final transmit pair is (K-2, K-1) and it serves (K-1, K).
    """
    if K < 4:
        raise ValueError(f"pairing requires K >= 4, got {K}")
    stages = []
    t = (1, 2)
    while t[1] + 2 <= K:
        r = (t[1] + 1, t[1] + 2)
        stages.append((t, r))
        t = r
    if K % 2 == 1:
        stages.append((t, (K - 1, K)))
    return stages


def serving_pair(k: int) -> tuple[int, int]:
    """Transmitting pair for receiving user k >= 3: (k-2,k-1) odd, (k-3,k-2) even."""
    if k < 3:
        raise ValueError(f"user {k} has no cooperation phase")
    if k % 2 == 1:
        return (k - 2, k - 1)
    return (k - 3, k - 2)


# -- configuration file (flat key = value, '#' comments) ---------------------

_CONFIG_FIELDS = ("K", "phi", "p_noma", "p_s", "sigma2",
                  "zeta_h", "zeta_g", "zeta_eta", "zeta_chi")
_IMP_FIELDS = ("tau", "eta", "phi_eta", "sigma_omega2", "eps_override")


def save_config(path, config: SystemConfig, imp: ImpairmentSpec) -> None:
    lines = ["# system configuration (linear units)"]
    for name in _CONFIG_FIELDS:
        val = getattr(config, name)
        if name == "phi":
            val = ", ".join(repr(p) for p in val)
        lines.append(f"{name} = {val}")
    lines.append("# impairments")
    for name in _IMP_FIELDS:
        val = getattr(imp, name)
        if name == "eps_override":
            val = "none" if val is None else f"{val[0]!r}, {val[1]!r}"
        lines.append(f"{name} = {val}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_config(path) -> tuple[SystemConfig, ImpairmentSpec]:
    raw: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _CONFIG_FIELDS + _IMP_FIELDS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = val
    missing = [k for k in _CONFIG_FIELDS if k not in raw and k != "eps_override"]
    if missing:
        raise ValueError(f"{path}: missing keys {missing}")
    cfg = SystemConfig(
        K=int(raw["K"]),
        phi=tuple(float(p) for p in raw["phi"].split(",")),
        p_noma=float(raw["p_noma"]),
        p_s=float(raw["p_s"]),
        sigma2=float(raw["sigma2"]),
        zeta_h=float(raw.get("zeta_h", 1.0)),
        zeta_g=float(raw.get("zeta_g", 1.0)),
        zeta_eta=float(raw.get("zeta_eta", 1.0)),
        zeta_chi=float(raw.get("zeta_chi", 1.0)),
    )
    eps = raw.get("eps_override", "none").strip()
    imp = ImpairmentSpec(
        tau=float(raw.get("tau", 0.0)),
        eta=int(raw.get("eta", 0)),
        phi_eta=float(raw.get("phi_eta", 0.0)),
        sigma_omega2=float(raw.get("sigma_omega2", 0.0)),
        eps_override=None if eps.lower() == "none"
        else tuple(float(x) for x in eps.split(",")),  # type: ignore[arg-type]
    )
    return cfg, imp


def default_config(K: int = 4) -> SystemConfig:
    """Four-user downlink defaults: 45 dBm total NOMA power, p_s = p_noma/2,
    noise from -174 dBm/Hz over 1 MHz, unit fading gains, ascending phi."""
    if K == 4:
        phi = (0.1, 0.2, 0.3, 0.4)
    else:
        # ascending arithmetic coefficients summing to 1
        w = [float(i) for i in range(1, K + 1)]
        s = sum(w)
        phi = tuple(x / s for x in w)
    p = dbm_to_watts(45.0)
    return SystemConfig(K=K, phi=phi, p_noma=p, p_s=p / 2.0,
                        sigma2=noise_power_watts())


def with_snr(config: SystemConfig, snr_db: float) -> SystemConfig:
    """Copy of ``config`` normalized to sigma2 = 1 with p_noma set from a
    transmit SNR in dB (p_s keeps its ratio to p_noma)."""
    ratio = config.p_s / config.p_noma
    p = db_to_linear(snr_db)
    return replace(config, p_noma=p, p_s=ratio * p, sigma2=1.0)
