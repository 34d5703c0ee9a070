"""Exact, numerically integrated, and asymptotic outage probabilities.

Scenario-to-expression map (stbc-cnoma scheme, user k >= 3):

==============================  ==========================================
impairments                     exact expression
==============================  ==========================================
none                            closed Ei form for P(Q1 + Z <= g)
residual SIC                    same form with the residual rate appended
                                to the interference component set
timing offset                   moment-matched Gamma(shape, scale) of
                                V = Q + R, regularized lower incomplete
timing offset + residual SIC    same with Q carrying the residual component
estimation error                closed Ei form with the effective
                                cooperation rate lambda_chi
==============================  ==========================================

``outage_numeric`` integrates the authoritative component densities and is
the reference every closed form is tested against.  For the timing scenarios
the exact path goes through the Gamma approximation, so it carries a model
error of a few percent in distribution even though the numeric path is tight;
callers that need the true law should prefer ``outage_numeric``.

``outage_asymptotic`` evaluates the five high-SNR approximations.  These are
sums of single-branch outage terms (union-style), with unit-power rates
lambda_h = 1/zeta_h, lambda_g = 1/zeta_g, lambda_chi = 1/sigma_chi^2 and all
SNR dependence in g(SNR) = (2^U - 1)/SNR; they assume p_s = p_noma/2.  Their
first term requires Phi_k - sum_i Phi_i (2^U - 1) > 0 and evaluation is
refused outside that region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from . import distributions as dist
from .config import ImpairmentSpec, RateParameters, SystemConfig, csi_coefficients, derive_rates
from .sinr import Scenario, UnsupportedScenarioError
from .specfun import gamma_lower_regularized


class InternalConsistencyError(RuntimeError):
    """A probability left [0, 1] by more than the numerical guard."""


class AsymptoticValidityError(ValueError):
    """The high-SNR approximation's validity condition fails."""


_PROB_GUARD = 1e-9


@dataclass(frozen=True)
class OutageQuery:
    """One outage evaluation: scenario, user, threshold, rates, and the
    transmit SNR used by the asymptotic forms."""

    scenario: Scenario
    k: int
    rate_params: RateParameters
    config: SystemConfig
    snr: float | None = None

    def __post_init__(self):
        if self.rate_params.gamma_th < 0:
            raise ValueError("gamma_th must be >= 0")
        if self.snr is not None and self.snr <= 0:
            raise ValueError("snr must be positive")

    @property
    def gamma_th(self) -> float:
        return self.rate_params.gamma_th

    @property
    def imp(self) -> ImpairmentSpec:
        return self.scenario.imp


def make_query(config: SystemConfig, imp: ImpairmentSpec, k: int, upsilon: float,
               snr: float | None = None, scheme: str = "stbc-cnoma") -> OutageQuery:
    rates = derive_rates(config, imp, k, upsilon)
    return OutageQuery(scenario=Scenario(scheme=scheme, imp=imp), k=k,
                       rate_params=rates, config=config, snr=snr)


def _clamp_probability(p: float, context: str) -> float:
    if not -_PROB_GUARD <= p <= 1.0 + _PROB_GUARD:
        raise InternalConsistencyError(f"{context} produced probability {p!r}")
    return min(max(p, 0.0), 1.0)


def _interference_components(q: OutageQuery) -> tuple[float, ...]:
    comps = tuple(q.rate_params.lambda_i)
    if q.imp.sic_imperfect:
        if q.rate_params.lambda_eta is None:
            raise ValueError("residual-SIC scenario without lambda_eta")
        comps = comps + (q.rate_params.lambda_eta,)
    return comps


def _check_scenario(q: OutageQuery) -> None:
    if q.scenario.scheme != "stbc-cnoma":
        raise UnsupportedScenarioError(
            f"analytic outage covers the stbc-cnoma scheme, not {q.scenario.scheme!r}")
    if q.imp.timing_imperfect and q.imp.csi_imperfect:
        raise UnsupportedScenarioError("joint timing + CSI has no derived form")
    if q.imp.sic_imperfect and q.imp.csi_imperfect:
        raise UnsupportedScenarioError("joint SIC + CSI has no derived form")
    if q.k <= 2 and (q.imp.timing_imperfect or q.imp.csi_imperfect):
        raise UnsupportedScenarioError(
            "users 1 and 2 have no cooperation phase to impair")


def _coop_rate(q: OutageQuery) -> float:
    return q.rate_params.lambda_chi if q.imp.csi_imperfect else q.rate_params.lambda_g


def timing_gamma_parameters(rate_params: RateParameters, eps1: float,
                            include_eta: bool = False) -> tuple[float, float]:
    """(shape, scale) of the moment-matched Gamma for V = Q + R."""
    comps = tuple(rate_params.lambda_i)
    if include_eta:
        if rate_params.lambda_eta is None:
            raise ValueError("residual-SIC fit without lambda_eta")
        comps = comps + (rate_params.lambda_eta,)
    mq = dist.moments_ratio(rate_params.lambda_h, comps)
    mr = dist.moments_R(rate_params.lambda_g, eps1)
    pair = dist.MomentPair(mean=mq.mean + mr.mean,
                           variance=mq.variance + mr.variance)
    return dist.gamma_fit_moments(pair)


def _timing_gamma_parameters(q: OutageQuery) -> tuple[float, float]:
    return timing_gamma_parameters(q.rate_params, q.imp.eps1,
                                   include_eta=q.imp.sic_imperfect)


def outage_exact(q: OutageQuery) -> float:
    """Closed-form outage for the scenario's expression family."""
    _check_scenario(q)
    g = q.gamma_th
    if g == 0.0:
        return 0.0
    comps = _interference_components(q)
    if q.k <= 2:
        p = dist.cdf_ratio(g, q.rate_params.lambda_h, comps)
        return _clamp_probability(float(p), "direct-only outage")
    if q.imp.timing_imperfect:
        shape, scale = _timing_gamma_parameters(q)
        p = gamma_lower_regularized(shape, g / scale)
        return _clamp_probability(p, "Gamma-fit outage")
    if dist.has_near_duplicate_rates(comps):
        return outage_numeric(q)
    p = float(dist._sum_cdf_closed(g, q.rate_params.lambda_h, comps, _coop_rate(q))[0])
    return _clamp_probability(p, "closed Ei outage")


def outage_numeric(q: OutageQuery) -> float:
    """Quadrature of the authoritative component density up to gamma_th."""
    _check_scenario(q)
    g = q.gamma_th
    if g == 0.0:
        return 0.0
    la = q.rate_params.lambda_h
    comps = _interference_components(q)
    if q.k <= 2:
        return _clamp_probability(float(dist.cdf_ratio(g, la, comps)),
                                  "direct-only outage")
    if q.imp.timing_imperfect:
        lamg = q.rate_params.lambda_g
        e1 = q.imp.eps1
        val, _ = integrate.quad(
            lambda t: g * dist.pdf_timing_ratio_R(g * t, lamg, e1)
            * dist.cdf_ratio(g * (1.0 - t), la, comps),
            0.0, 1.0, limit=300, epsabs=1e-13, epsrel=1e-10)
        return _clamp_probability(val, "timing-sum quadrature")
    p = dist._sum_cdf_numeric(g, la, comps, _coop_rate(q))
    return _clamp_probability(p, "sum quadrature")


def _asymptotic_denominator(q: OutageQuery, with_eta: bool) -> float:
    phi = q.config.phi
    gamma = q.gamma_th
    interf = sum(phi[: q.k - 1])
    if with_eta:
        interf += q.imp.phi_eta
    return phi[q.k - 1] - interf * gamma


def outage_asymptotic(q: OutageQuery) -> float:
    """High-SNR rate-outage approximation for the scenario's family."""
    _check_scenario(q)
    if q.snr is None:
        raise ValueError("asymptotic evaluation needs the transmit SNR")
    lam_h = 1.0 / q.config.zeta_h
    lam_g = 1.0 / q.config.zeta_g
    g = q.gamma_th / q.snr
    with_eta = q.imp.sic_imperfect
    denom = _asymptotic_denominator(q, with_eta)
    if denom <= 0:
        k = q.k
        cond = (f"Phi_{k} - (Phi_eta + sum_i<k Phi_i)(2^U - 1) > 0" if with_eta
                else f"Phi_{k} - sum_i<k Phi_i (2^U - 1) > 0")
        raise AsymptoticValidityError(
            f"validity condition {cond} fails (value {denom:.6g})")
    first = lam_h * g / denom
    if q.k <= 2:
        return min(first, 1.0)
    if q.imp.csi_imperfect:
        chi = csi_coefficients(q.imp.sigma_omega2, q.config.zeta_g)
        lam_chi = 1.0 / chi.sigma_chi2
        second = 2.0 * lam_chi ** 2 * g * g
    elif q.imp.timing_imperfect:
        second = 2.0 * q.imp.eps1 * lam_g ** 2 * g * g
    else:
        second = 2.0 * lam_g ** 2 * g * g
    # the term sum legitimately exceeds one at low SNR; saturate there
    return min(first + second, 1.0)


def rate_outage_threshold(upsilon: float) -> float:
    """gamma_th = 2^upsilon - 1 for a rate threshold in bits per channel use."""
    return 2.0 ** upsilon - 1.0
