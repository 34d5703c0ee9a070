"""Analytic densities for the composite SINR variables, their moments,
moment-matched Gamma fits, and a Kolmogorov-Smirnov statistic.

Component conventions (the single source of truth, fixed by a Monte-Carlo
audit of the closed forms):

* ``A ~ Exp(lambda_h)`` and the interference components ``B_i ~ Exp(lambda_i)``
  are parameterized by *rate* throughout.
* The cooperation sum ``Z = C + D`` has per-component rate ``lambda_g``
  (``lambda_chi`` for the estimation-error variant); inside the closed Ei
  forms this enters through the component scale ``1/lambda_g``.
* The ratio is ``Q = A / W`` with ``W`` the hypoexponential interference sum
  (optionally including the residual-SIC component), and the composite SINR
  families are ``L = Q + Z`` and ``V = Q + R`` with
  ``R = (C + eps1 D)^2 / (C + D)`` the timing-impaired cooperation term.

Every closed form here is validated in the test suite against direct
numerical convolution of the rate-parameterized components ("mode b"), which
is the authoritative path; the Ei-based expressions ("mode a") are the fast
cross-checked evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, linalg

from . import specfun

DUPLICATE_RATE_RTOL = 1e-6

_eis = np.vectorize(specfun.exp_integral_ei_scaled, otypes=[float])


@dataclass(frozen=True)
class MomentPair:
    mean: float
    variance: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.mean) and math.isfinite(self.variance)


def _check_rates(rates) -> np.ndarray:
    r = np.asarray(rates, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("rates must be a nonempty 1-D sequence")
    if np.any(r <= 0):
        raise ValueError(f"rates must be strictly positive, got {r}")
    return r


def has_near_duplicate_rates(rates, rtol: float = DUPLICATE_RATE_RTOL) -> bool:
    r = np.sort(_check_rates(rates))
    if r.size < 2:
        return False
    return bool(np.any(np.diff(r) < rtol * r[:-1]))


def hypoexp_coefficients(rates) -> np.ndarray:
    """Partial-fraction weights c_i with f_W(w) = sum_i c_i exp(-mu_i w).

    Requires pairwise-distinct rates; near-ties belong to the matrix
    Erlang-limit branch instead.
    """
    r = _check_rates(rates)
    if has_near_duplicate_rates(r):
        raise ValueError("rates too close for the partial-fraction form")
    c = np.empty_like(r)
    for i in range(r.size):
        others = np.delete(r, i)
        c[i] = np.prod(r) / np.prod(others - r[i])
    return c


def _phase_type_generator(rates: np.ndarray) -> np.ndarray:
    n = rates.size
    T = np.zeros((n, n))
    for i, mu in enumerate(rates):
        T[i, i] = -mu
        if i + 1 < n:
            T[i, i + 1] = mu
    return T


def pdf_hypoexp(b, rates) -> np.ndarray | float:
    """Density of a sum of independent exponentials with the given rates.

    Distinct rates use the partial-fraction form; rates within relative
    1e-6 of each other are routed through the exact matrix-exponential
    (Erlang-limit) branch to avoid catastrophic cancellation.
    """
    r = _check_rates(rates)
    b_arr = np.atleast_1d(np.asarray(b, dtype=float))
    if r.size == 1:
        out = np.where(b_arr >= 0, r[0] * np.exp(-r[0] * b_arr), 0.0)
    elif not has_near_duplicate_rates(r):
        c = hypoexp_coefficients(r)
        out = np.where(b_arr >= 0,
                       np.sum(c * np.exp(-np.outer(b_arr, r)), axis=1), 0.0)
    else:
        T = _phase_type_generator(r)
        exit_rate = -T @ np.ones(r.size)
        out = np.array([float(linalg.expm(T * bb)[0] @ exit_rate) if bb >= 0 else 0.0
                        for bb in b_arr])
    return out if np.ndim(b) else float(out[0])


def cdf_hypoexp(b, rates) -> np.ndarray | float:
    r = _check_rates(rates)
    b_arr = np.atleast_1d(np.asarray(b, dtype=float))
    if r.size == 1:
        out = np.where(b_arr > 0, -np.expm1(-r[0] * b_arr), 0.0)
    elif not has_near_duplicate_rates(r):
        c = hypoexp_coefficients(r)
        out = np.where(b_arr > 0,
                       np.sum((c / r) * (-np.expm1(-np.outer(b_arr, r))), axis=1), 0.0)
    else:
        T = _phase_type_generator(r)
        out = np.array([1.0 - float(np.sum(linalg.expm(T * bb)[0])) if bb > 0 else 0.0
                        for bb in b_arr])
    return out if np.ndim(b) else float(out[0])


def hypoexp_inverse_moments(rates) -> MomentPair:
    """Closed-form E[1/W] and Var-free second moment E[1/W^2] cross-checks.

    E[1/W] = -sum_i c_i ln(mu_i) for two or more components and
    E[1/W^2] = sum_i c_i mu_i ln(mu_i) for three or more; fewer components
    make the respective moment infinite.  Returned as (E[1/W], E[1/W^2]).
    """
    r = _check_rates(rates)
    c = hypoexp_coefficients(r)
    inv1 = -float(np.sum(c * np.log(r))) if r.size >= 2 else math.inf
    inv2 = float(np.sum(c * r * np.log(r))) if r.size >= 3 else math.inf
    return MomentPair(mean=inv1, variance=inv2)


# -- ratio Q = A/W ------------------------------------------------------------

def survival_ratio(q, lambda_h: float, comp_rates) -> np.ndarray | float:
    """P(Q > q) = prod_j mu_j/(mu_j + lambda_h q); exact for any rates."""
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.ones_like(q_arr)
    for mu in np.atleast_1d(np.asarray(comp_rates, dtype=float)):
        out = out * (mu / (mu + lambda_h * np.maximum(q_arr, 0.0)))
    if len(np.atleast_1d(comp_rates)) == 0:
        out = np.exp(-lambda_h * np.maximum(q_arr, 0.0))
    out = np.where(q_arr < 0, 1.0, out)
    return out if np.ndim(q) else float(out[0])


def cdf_ratio(q, lambda_h: float, comp_rates) -> np.ndarray | float:
    return 1.0 - survival_ratio(q, lambda_h, comp_rates)


def pdf_ratio(q, lambda_h: float, comp_rates) -> np.ndarray | float:
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    comps = np.atleast_1d(np.asarray(comp_rates, dtype=float))
    if comps.size == 0:
        out = np.where(q_arr >= 0, lambda_h * np.exp(-lambda_h * q_arr), 0.0)
        return out if np.ndim(q) else float(out[0])
    s = np.asarray(survival_ratio(q_arr, lambda_h, comps))
    rate_sum = np.zeros_like(q_arr)
    for mu in comps:
        rate_sum = rate_sum + lambda_h / (mu + lambda_h * np.maximum(q_arr, 0.0))
    out = np.where(q_arr >= 0, s * rate_sum, 0.0)
    return out if np.ndim(q) else float(out[0])


def pdf_ratio_q1(q, lambda_h: float, rates) -> np.ndarray | float:
    """Density of the direct-phase ratio Q1 = A/B."""
    _check_rates(rates)
    return pdf_ratio(q, lambda_h, rates)


def moments_ratio(lambda_h: float, comp_rates) -> MomentPair:
    """Mean and variance of Q = A/W by adaptive quadrature of the survival
    function; divergent cases are reported as inf instead of garbage.

    With W summing I components, the mean is finite for I >= 2 and the
    variance for I >= 3 (I = 0 degenerates to the plain exponential A).
    """
    comps = np.atleast_1d(np.asarray(comp_rates, dtype=float))
    n = comps.size
    if n == 0:
        return MomentPair(mean=1.0 / lambda_h, variance=1.0 / lambda_h ** 2)
    mean = math.inf
    var = math.inf
    if n >= 2:
        mean, _ = integrate.quad(lambda q: survival_ratio(q, lambda_h, comps),
                                 0, np.inf, limit=400)
    if n >= 3:
        m2 = 2.0 * integrate.quad(lambda q: q * survival_ratio(q, lambda_h, comps),
                                  0, np.inf, limit=400)[0]
        var = m2 - mean * mean
    return MomentPair(mean=mean, variance=var)


def moments_q1(lambda_h: float, rates) -> MomentPair:
    _check_rates(rates)
    return moments_ratio(lambda_h, rates)


# -- composite sum L = Q + Z (closed Ei form and numerical convolution) --------

def _sum_component_terms(lambda_h: float, comp_rates) -> tuple[np.ndarray, np.ndarray]:
    c = hypoexp_coefficients(comp_rates)
    r = np.asarray(comp_rates, dtype=float)
    return c / r, r


def _sum_cdf_closed(x, lambda_h: float, comp_rates, z_rate: float) -> np.ndarray:
    """P(Q + Z <= x) in closed form.

    Per interference component with rate mu and partial-fraction weight
    w = c/mu, with t0 = mu/(lg*lh), t1 = t0 + x/lg, lg = 1/z_rate:

        w * [ 1 - e^{-x/lg}(1 + x/lg)            (Erlang-2 mass)
              + t0 (1 - e^{-x/lg})
              - t0 t1 e^{-t1} (Ei(t1) - Ei(t0)) ]

    evaluated through the scaled exponential integral so large arguments
    neither overflow nor cancel.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    lg = 1.0 / z_rate
    w, mus = _sum_component_terms(lambda_h, comp_rates)
    xs = np.maximum(x_arr, 0.0)
    u = xs / lg
    erl2 = -np.expm1(-u) - u * np.exp(-u)
    total = np.zeros_like(xs)
    for wi, mu in zip(w, mus):
        t0 = mu / (lg * lambda_h)
        t1 = t0 + u
        ei_diff = _eis(t1) - np.exp(-u) * _eis(t0)
        total += wi * (erl2 + t0 * (-np.expm1(-u)) - t0 * t1 * ei_diff)
    total = np.where(x_arr <= 0, 0.0, total)
    return total


def _sum_pdf_closed(l, lambda_h: float, comp_rates, z_rate: float) -> np.ndarray:
    """Density matching ``_sum_cdf_closed``:

        w/lg * [ t1 e^{-l/lg} - t0 + t0 (t1 - 1) e^{-t1} (Ei(t1) - Ei(t0)) ].
    """
    l_arr = np.atleast_1d(np.asarray(l, dtype=float))
    lg = 1.0 / z_rate
    w, mus = _sum_component_terms(lambda_h, comp_rates)
    ls = np.maximum(l_arr, 0.0)
    u = ls / lg
    total = np.zeros_like(ls)
    for wi, mu in zip(w, mus):
        t0 = mu / (lg * lambda_h)
        t1 = t0 + u
        ei_diff = _eis(t1) - np.exp(-u) * _eis(t0)
        total += (wi / lg) * (t1 * np.exp(-u) - t0 + t0 * (t1 - 1.0) * ei_diff)
    total = np.where(l_arr < 0, 0.0, total)
    return total


def _erlang2_pdf(z, rate: float):
    return rate * rate * z * np.exp(-rate * z)


def _sum_pdf_numeric(l: float, lambda_h: float, comp_rates, z_rate: float) -> float:
    if l <= 0:
        return 0.0
    val, _ = integrate.quad(
        lambda t: l * _erlang2_pdf(l * t, z_rate)
        * pdf_ratio(l * (1.0 - t), lambda_h, comp_rates),
        0.0, 1.0, limit=200, epsabs=1e-12, epsrel=1e-10)
    return val


def _sum_cdf_numeric(x: float, lambda_h: float, comp_rates, z_rate: float) -> float:
    if x <= 0:
        return 0.0
    val, _ = integrate.quad(
        lambda t: x * _erlang2_pdf(x * t, z_rate)
        * cdf_ratio(x * (1.0 - t), lambda_h, comp_rates),
        0.0, 1.0, limit=200, epsabs=1e-13, epsrel=1e-10)
    return val


def _sum_cdf_numeric_batch(xs: np.ndarray, lambda_h: float, comp_rates,
                           z_rate: float, nodes: int = 400) -> np.ndarray:
    t, wt = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (t + 1.0)
    wt = 0.5 * wt
    out = np.zeros_like(xs, dtype=float)
    chunk = 4096
    for lo in range(0, xs.size, chunk):
        x = xs[lo:lo + chunk, None]
        fz = _erlang2_pdf(x * t, z_rate)
        fq = np.asarray(cdf_ratio((x * (1.0 - t)).ravel(), lambda_h, comp_rates))
        integrand = fz * fq.reshape(fz.shape)
        out[lo:lo + chunk] = np.sum(wt * integrand, axis=1) * xs[lo:lo + chunk]
    return out


def _sum_dispatch(vals, lambda_h, comp_rates, z_rate, mode, closed_fn, numeric_fn):
    if mode not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    arr = np.atleast_1d(np.asarray(vals, dtype=float))
    use_closed = mode in ("auto", "closed")
    if use_closed and has_near_duplicate_rates(comp_rates):
        if mode == "closed":
            raise ValueError("closed form needs pairwise-distinct rates")
        use_closed = False
    if use_closed:
        try:
            out = closed_fn(arr, lambda_h, comp_rates, z_rate)
            if np.all(np.isfinite(out)):
                return out if np.ndim(vals) else float(out[0])
        except (OverflowError, ArithmeticError):
            if mode == "closed":
                raise
        if mode == "closed":
            return out if np.ndim(vals) else float(out[0])
    out = np.array([numeric_fn(v, lambda_h, comp_rates, z_rate) for v in arr])
    return out if np.ndim(vals) else float(out[0])


def pdf_sum_L(l, lambda_h: float, rates, lambda_g: float, mode: str = "auto"):
    """Density of L = Q1 + Z (total SINR, perfect timing and SIC).

    mode "closed" forces the Ei expression, "numeric" the convolution
    quadrature; "auto" prefers the closed form and falls back on numerical
    trouble or near-duplicate rates.
    """
    _check_rates(rates)
    return _sum_dispatch(l, lambda_h, rates, lambda_g, mode,
                         _sum_pdf_closed, _sum_pdf_numeric)


def cdf_sum_L(x, lambda_h: float, rates, lambda_g: float, mode: str = "auto"):
    _check_rates(rates)
    return _sum_dispatch(x, lambda_h, rates, lambda_g, mode,
                         _sum_cdf_closed, _sum_cdf_numeric)


def pdf_sum_L_eta(l, lambda_h: float, rates, lambda_g: float,
                  lambda_eta: float, mode: str = "auto"):
    """Density of L_eta = A/(F+B) + Z (residual-SIC variant)."""
    comps = tuple(_check_rates(rates)) + (float(lambda_eta),)
    return _sum_dispatch(l, lambda_h, comps, lambda_g, mode,
                         _sum_pdf_closed, _sum_pdf_numeric)


def pdf_sum_L_chi(l, lambda_h: float, rates, lambda_chi: float, mode: str = "auto"):
    """Density of L_chi = Q1 + Z_chi (channel-estimation-error variant)."""
    _check_rates(rates)
    return _sum_dispatch(l, lambda_h, rates, lambda_chi, mode,
                         _sum_pdf_closed, _sum_pdf_numeric)


# -- timing cooperation ratio R -----------------------------------------------

def pdf_timing_ratio_R(r, lambda_g: float, eps1: float) -> np.ndarray | float:
    """Density of R = (C + eps1 D)^2 / (C + D), C,D ~ Exp(lambda_g) iid.

    Closed erf/exponential form for 0 < eps1 < 1; the prefactor is singular
    at eps1 = 1 where R degenerates to C + D, so the Erlang-2 density is
    returned directly there.
    """
    if not 0.0 < eps1 <= 1.0:
        raise ValueError(f"eps1 must be in (0, 1], got {eps1}")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    rs = np.maximum(r_arr, 0.0)
    if eps1 == 1.0:
        out = _erlang2_pdf(rs, lambda_g)
    else:
        a = np.sqrt(lambda_g * rs)
        with np.errstate(divide="ignore", invalid="ignore"):
            erf_part = np.where(
                rs > 0,
                math.sqrt(math.pi) * (np.vectorize(math.erf)(a)
                                      - np.vectorize(math.erf)(a / eps1)) / a,
                2.0 * (1.0 - 1.0 / eps1))
        out = (lambda_g / (4.0 * (eps1 - 1.0))) * (
            erf_part + 2.0 * np.exp(-lambda_g * rs / eps1 ** 2) / eps1
            - 2.0 * np.exp(-lambda_g * rs))
    out = np.where(r_arr < 0, 0.0, out)
    return out if np.ndim(r) else float(out[0])


def cdf_timing_ratio_R(r, lambda_g: float, eps1: float,
                       nodes: int = 200) -> np.ndarray | float:
    """F_R by integrating the Erlang-2 CDF over the uniform mixing variable."""
    if not 0.0 < eps1 <= 1.0:
        raise ValueError(f"eps1 must be in (0, 1], got {eps1}")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    rs = np.maximum(r_arr, 0.0)
    if eps1 == 1.0:
        u = lambda_g * rs
        out = -np.expm1(-u) - u * np.exp(-u)
    else:
        t, wt = np.polynomial.legendre.leggauss(nodes)
        u = 0.5 * (t + 1.0)
        wt = 0.5 * wt
        phi2 = (eps1 + (1.0 - eps1) * u) ** 2
        z = lambda_g * rs[..., None] / phi2
        out = np.sum(wt * (-np.expm1(-z) - z * np.exp(-z)), axis=-1)
    out = np.where(r_arr <= 0, 0.0, out)
    return out if np.ndim(r) else float(out[0])


def moments_R(lambda_g: float, eps1: float) -> MomentPair:
    """E[R] = 2(1+e+e^2)/(3 lg), Var[R] = 2(17+7e-3e^2+7e^3+17e^4)/(45 lg^2).

    Valid on 0 < eps1 <= 1; at eps1 = 1 these are the Erlang-2 moments.
    """
    if not 0.0 < eps1 <= 1.0:
        raise ValueError(f"eps1 must be in (0, 1], got {eps1}")
    e = eps1
    mean = 2.0 * (1.0 + e + e * e) / (3.0 * lambda_g)
    var = 2.0 * (17.0 + 7.0 * e - 3.0 * e ** 2 + 7.0 * e ** 3 + 17.0 * e ** 4) \
        / (45.0 * lambda_g ** 2)
    return MomentPair(mean=mean, variance=var)


# -- moment-matched Gamma fit and K-S statistic --------------------------------

def gamma_fit_moments(moments: MomentPair) -> tuple[float, float]:
    """(shape, scale) = (mean^2/var, var/mean); both moments must be positive
    and finite."""
    if not moments.finite:
        raise ValueError(f"cannot fit a Gamma to non-finite moments {moments}")
    if moments.mean <= 0 or moments.variance <= 0:
        raise ValueError(f"need positive mean and variance, got {moments}")
    return (moments.mean ** 2 / moments.variance,
            moments.variance / moments.mean)


def ks_statistic(samples, cdf) -> float:
    """D_n = sup_x |F_n(x) - F(x)| for sorted or unsorted samples.

    ``cdf`` is a vectorized callable or an AnalyticDistribution.
    """
    if isinstance(cdf, AnalyticDistribution):
        cdf = cdf.cdf
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 1:
        raise ValueError("need at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


# -- distribution objects ------------------------------------------------------

@dataclass(frozen=True)
class AnalyticDistribution:
    """A named density/CDF pair on [0, inf) with vectorized evaluation."""

    kind: str
    params: tuple
    _pdf: Callable
    _cdf: Callable

    def pdf(self, x):
        return self._pdf(np.asarray(x, dtype=float))

    def cdf(self, x):
        return self._cdf(np.asarray(x, dtype=float))

    def quadrature_mass(self, upper: float | None = None) -> float:
        hi = np.inf if upper is None else upper
        val, _ = integrate.quad(lambda t: float(self.pdf(t)), 0, hi,
                                limit=400, epsabs=1e-11)
        return val

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params)
        return f"AnalyticDistribution({self.kind}: {inner})"


def exponential(rate: float) -> AnalyticDistribution:
    if rate <= 0:
        raise ValueError("rate must be positive")
    return AnalyticDistribution(
        "exponential", (("rate", rate),),
        lambda x: np.where(x >= 0, rate * np.exp(-rate * x), 0.0),
        lambda x: np.where(x > 0, -np.expm1(-rate * x), 0.0))


def hypoexponential(rates) -> AnalyticDistribution:
    r = tuple(_check_rates(rates))
    return AnalyticDistribution(
        "hypoexponential", (("rates", r),),
        lambda x: pdf_hypoexp(x, r),
        lambda x: cdf_hypoexp(x, r))


def ratio_q1(lambda_h: float, rates) -> AnalyticDistribution:
    r = tuple(_check_rates(rates))
    return AnalyticDistribution(
        "ratio_Q1", (("lambda_h", lambda_h), ("rates", r)),
        lambda x: pdf_ratio(x, lambda_h, r),
        lambda x: cdf_ratio(x, lambda_h, r))


def ratio_q_eta(lambda_h: float, rates, lambda_eta: float) -> AnalyticDistribution:
    comps = tuple(_check_rates(rates)) + (float(lambda_eta),)
    return AnalyticDistribution(
        "ratio_Qeta", (("lambda_h", lambda_h), ("rates", tuple(rates)),
                       ("lambda_eta", lambda_eta)),
        lambda x: pdf_ratio(x, lambda_h, comps),
        lambda x: cdf_ratio(x, lambda_h, comps))


def _sum_distribution(kind, lambda_h, comps, z_rate, params) -> AnalyticDistribution:
    if has_near_duplicate_rates(comps):
        return AnalyticDistribution(
            kind, params,
            lambda x: np.array([_sum_pdf_numeric(v, lambda_h, comps, z_rate)
                                for v in np.atleast_1d(x)]),
            lambda x: _sum_cdf_numeric_batch(np.atleast_1d(np.asarray(x, float)),
                                             lambda_h, comps, z_rate))
    return AnalyticDistribution(
        kind, params,
        lambda x: _sum_pdf_closed(np.atleast_1d(x), lambda_h, comps, z_rate),
        lambda x: _sum_cdf_closed(np.atleast_1d(x), lambda_h, comps, z_rate))


def sum_l(lambda_h: float, rates, lambda_g: float) -> AnalyticDistribution:
    comps = tuple(_check_rates(rates))
    return _sum_distribution("sum_L", lambda_h, comps, lambda_g,
                             (("lambda_h", lambda_h), ("rates", comps),
                              ("lambda_g", lambda_g)))


def sum_l_eta(lambda_h: float, rates, lambda_g: float,
              lambda_eta: float) -> AnalyticDistribution:
    comps = tuple(_check_rates(rates)) + (float(lambda_eta),)
    return _sum_distribution("sum_L_eta", lambda_h, comps, lambda_g,
                             (("lambda_h", lambda_h), ("rates", tuple(rates)),
                              ("lambda_g", lambda_g), ("lambda_eta", lambda_eta)))


def sum_l_chi(lambda_h: float, rates, lambda_chi: float) -> AnalyticDistribution:
    comps = tuple(_check_rates(rates))
    return _sum_distribution("sum_L_chi", lambda_h, comps, lambda_chi,
                             (("lambda_h", lambda_h), ("rates", comps),
                              ("lambda_chi", lambda_chi)))


def timing_ratio_r(lambda_g: float, eps1: float) -> AnalyticDistribution:
    return AnalyticDistribution(
        "timing_ratio_R", (("lambda_g", lambda_g), ("eps1", eps1)),
        lambda x: pdf_timing_ratio_R(x, lambda_g, eps1),
        lambda x: cdf_timing_ratio_R(x, lambda_g, eps1))


def gamma_fit(shape: float, scale: float) -> AnalyticDistribution:
    if shape <= 0 or scale <= 0:
        raise ValueError("shape and scale must be positive")
    lg_norm = math.lgamma(shape) + shape * math.log(scale)

    def pdf(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        with np.errstate(divide="ignore"):
            out = np.where(xs > 0,
                           np.exp((shape - 1.0) * np.log(np.maximum(xs, 1e-320))
                                  - xs / scale - lg_norm), 0.0)
        return out

    cdf_scalar = np.vectorize(
        lambda x: specfun.gamma_lower_regularized(shape, x / scale) if x > 0 else 0.0,
        otypes=[float])
    return AnalyticDistribution(
        "gamma_fit", (("shape", shape), ("scale", scale)), pdf, cdf_scalar)


def export_table(path, xs, values, comment: str = "") -> None:
    """Write a two-column numeric text table (x, f(x)) for plotting."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for x, v in zip(xs, values):
            fh.write(f"{x:.10g} {v:.10g}\n")
