import math

import numpy as np
import pytest
from scipy import integrate

from stbc_cnoma import specfun


def ei_series_oracle(x, terms=400):
    # independent power-series oracle: Ei(x) = gamma + ln|x| + sum x^n/(n n!)
    total = specfun.EULER_GAMMA + math.log(abs(x))
    term = 1.0
    for n in range(1, terms + 1):
        term *= x / n
        total += term / n
    return total


def erf_maclaurin_oracle(x, terms=60):
    total = 0.0
    term = x
    for n in range(terms):
        total += term / (2 * n + 1)
        term *= -x * x / (n + 1)
    return total * 2.0 / math.sqrt(math.pi)


class TestExponentialIntegral:
    def test_ei_at_one(self):
        assert specfun.exp_integral_ei(1.0) == pytest.approx(ei_series_oracle(1.0), rel=1e-12)
        assert specfun.exp_integral_ei(1.0) == pytest.approx(1.8951178163559368, rel=1e-12)

    def test_ei_at_minus_one(self):
        assert specfun.exp_integral_ei(-1.0) == pytest.approx(ei_series_oracle(-1.0), rel=1e-12)
        assert specfun.exp_integral_ei(-1.0) == pytest.approx(-0.21938393439552027, rel=1e-12)

    def test_singular_point_rejected(self):
        with pytest.raises(ValueError):
            specfun.exp_integral_ei(0.0)

    @pytest.mark.parametrize("x", [0.01, 0.5, 2.0, 7.5, 15.0, 33.0, 50.0,
                                   -0.01, -0.5, -2.0, -7.5, -15.0, -33.0, -50.0])
    def test_against_series_and_quadrature_oracle(self, x):
        if -7 <= x <= 25:
            # the alternating series loses too many digits below about -7
            oracle = ei_series_oracle(x)
        elif x < 0:
            # Ei(x) = -e^x int_0^inf e^{-t}/(t - x) dt for x < 0
            oracle = -math.exp(x) * integrate.quad(
                lambda t: math.exp(-t) / (t - x), 0, np.inf, limit=500)[0]
        else:
            # principal value, scaled to stay in range
            eps = 1e-9
            part1 = integrate.quad(lambda t: math.exp(-t) / (t - x), 0, x - eps,
                                   limit=500, epsabs=1e-15)[0]
            part2 = integrate.quad(lambda t: math.exp(-t) / (t - x), x + eps, np.inf,
                                   limit=500, epsabs=1e-15)[0]
            oracle = -math.exp(x) * (part1 + part2)
            assert specfun.exp_integral_ei(x) == pytest.approx(oracle, rel=1e-6)
            return
        assert specfun.exp_integral_ei(x) == pytest.approx(oracle, rel=1e-10)

    def test_branch_overlap_positive(self):
        # series vs asymptotic agreement around the switch point
        tol = specfun.Tolerance(rel_tol=1e-16, max_terms=1000)
        for x in np.linspace(35.0, 50.0, 16):
            series = specfun._ei_series(float(x), tol)
            asym = math.exp(float(x)) * specfun._ei_asymptotic_scaled(float(x), tol)
            assert asym == pytest.approx(series, rel=1e-9)

    def test_branch_overlap_negative(self):
        tol = specfun.Tolerance(rel_tol=1e-16, max_terms=1000)
        for x in np.linspace(-7.0, -1.0, 13):
            series = specfun._ei_series(float(x), tol)
            cf = -specfun._e1_continued_fraction(-float(x), tol)
            assert cf == pytest.approx(series, rel=1e-9)

    def test_scaled_variant_consistent(self):
        for x in (0.5, 3.0, 39.0, 41.0, 200.0, 700.0, 5e3):
            s = specfun.exp_integral_ei_scaled(x)
            if x <= 700:
                assert s == pytest.approx(math.exp(-x) * specfun.exp_integral_ei(x),
                                          rel=1e-10)
            assert s > 0


class TestErf:
    def test_zero(self):
        assert specfun.erf(0.0) == 0.0

    def test_value(self):
        assert specfun.erf(1.0) == pytest.approx(erf_maclaurin_oracle(1.0), abs=1e-12)
        assert specfun.erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-12)

    @pytest.mark.parametrize("x", [0.1, 0.7, 1.3, 2.9, 4.0])
    def test_odd_symmetry(self, x):
        assert specfun.erf(-x) == -specfun.erf(x)

    def test_monotone_and_bounded(self):
        # beyond |x| ~ 5.8 consecutive doubles saturate, so stay inside
        xs = np.linspace(-4.5, 4.5, 200)
        vals = [specfun.erf(float(x)) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(-1 < v < 1 for v in vals)


class TestIncompleteGamma:
    def test_factorial_identity(self):
        assert specfun.gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)

    def test_exponential_identity(self):
        assert specfun.gamma_upper(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
        assert specfun.gamma_upper(1.0, 2.0) == pytest.approx(0.1353352832366127, rel=1e-10)

    def test_at_zero_equals_complete(self):
        for a in (0.3, 1.0, 2.5, 7.0):
            assert specfun.gamma_upper(a, 0.0) == pytest.approx(specfun.gamma_fn(a),
                                                                rel=1e-12)

    def test_against_quadrature_oracle(self):
        val = integrate.quad(lambda t: t ** 1.5 * math.exp(-t), 1.3, np.inf,
                             limit=300, epsabs=1e-14)[0]
        assert specfun.gamma_upper(2.5, 1.3) == pytest.approx(val, rel=1e-10)

    def test_recurrence_grid(self):
        # Gamma(a+1, x) = a Gamma(a, x) + x^a e^{-x}
        for a in np.arange(0.5, 10.01, 0.5):
            for x in np.arange(0.0, 20.01, 1.0):
                lhs = specfun.gamma_upper(a + 1.0, x)
                rhs = a * specfun.gamma_upper(a, x) + (x ** a) * math.exp(-x) if x > 0 \
                    else a * specfun.gamma_upper(a, x)
                assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_lower_regularized_complements_upper(self):
        for a in (0.5, 2.0, 6.5):
            for x in (0.2, 1.0, 5.0, 30.0):
                p = specfun.gamma_lower_regularized(a, x)
                q = specfun.gamma_upper(a, x) / specfun.gamma_fn(a)
                assert p + q == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            specfun.gamma_upper(-1.0, 1.0)
        with pytest.raises(ValueError):
            specfun.gamma_upper(1.0, -0.5)
        with pytest.raises(ValueError):
            specfun.gamma_fn(0.0)


class TestTolerance:
    def test_defaults_valid(self):
        t = specfun.Tolerance()
        assert t.max_terms >= 1

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            specfun.Tolerance(abs_tol=0.0, rel_tol=0.0)

    def test_bad_max_terms(self):
        with pytest.raises(ValueError):
            specfun.Tolerance(max_terms=0)
