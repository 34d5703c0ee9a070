import numpy as np
import pytest

from stbc_cnoma import harness
from stbc_cnoma.config import ImpairmentSpec, SystemConfig, with_snr, default_config
from stbc_cnoma.distributions import ks_statistic, sum_l
from stbc_cnoma.config import derive_rates
from stbc_cnoma.harness import (collect_sinr_samples, empirical_pdf,
                                outage_curve, simulate_outage)
from stbc_cnoma.outage import make_query, outage_numeric
from stbc_cnoma.sinr import Scenario

UNIT = SystemConfig(K=4, phi=(0.1, 0.2, 0.3, 0.4), p_noma=1.0, p_s=0.5, sigma2=1.0)
STBC = Scenario()


class TestOutageEstimation:
    def test_zero_threshold_exact_zero(self):
        r = simulate_outage(STBC, 4, 0.0, 10_000, 1, UNIT)
        assert r.outage_hat == 0.0 and r.ci95_halfwidth == 0.0

    def test_worker_counts_bit_identical(self):
        a = simulate_outage(STBC, 4, 1.0, 300_000, 2, UNIT, workers=1)
        b = simulate_outage(STBC, 4, 1.0, 300_000, 2, UNIT, workers=4)
        c = simulate_outage(STBC, 4, 1.0, 300_000, 2, UNIT, workers=8)
        assert a.outage_hat == b.outage_hat == c.outage_hat

    def test_seed_changes_estimate(self):
        a = simulate_outage(STBC, 4, 1.0, 50_000, 3, UNIT)
        b = simulate_outage(STBC, 4, 1.0, 50_000, 4, UNIT)
        assert a.outage_hat != b.outage_hat

    def test_ci_formula(self):
        r = simulate_outage(STBC, 4, 1.0, 40_000, 5, UNIT)
        p = r.outage_hat
        assert r.ci95_halfwidth == pytest.approx(1.96 * np.sqrt(p * (1 - p) / 40_000))

    def test_nested_thresholds_monotone(self):
        curve = outage_curve(STBC, 4, [0.1, 0.5, 1.0, 2.0, 5.0], 100_000, 6, UNIT)
        hats = [r.outage_hat for r in curve]
        assert all(b >= a for a, b in zip(hats, hats[1:]))

    def test_component_model_against_analytic(self):
        cfg = UNIT
        q = make_query(cfg, ImpairmentSpec(), 4, upsilon=2.0)
        r = simulate_outage(STBC, 4, 3.0, 500_000, 7, cfg, model="component")
        assert abs(r.outage_hat - outage_numeric(q)) <= 3 * r.ci95_halfwidth

    def test_retention(self):
        r = simulate_outage(STBC, 4, 1.0, 20_000, 8, UNIT, retain=True)
        assert r.sinr_samples is not None and r.sinr_samples.shape == (20_000,)
        recount = float(np.mean(r.sinr_samples < 1.0))
        assert recount == r.outage_hat

    def test_retention_cap(self):
        with pytest.raises(ValueError):
            collect_sinr_samples(STBC, 4, harness.RETENTION_CAP + 1, 9, UNIT)

    def test_trials_validation(self):
        with pytest.raises(ValueError):
            simulate_outage(STBC, 4, 1.0, 0, 1, UNIT)


class TestEmpiricalPdf:
    def test_mass_sums_to_one(self):
        h = empirical_pdf(STBC, 4, 50_000, 40, 10, UNIT)
        mass = float(np.sum(h.density * np.diff(h.bin_edges)))
        assert mass == pytest.approx(1.0, abs=1e-12)

    def test_bin_edges_cover_samples(self):
        h = empirical_pdf(STBC, 4, 20_000, 25, 11, UNIT)
        s = collect_sinr_samples(STBC, 4, 20_000, 11, UNIT)
        assert h.bin_edges[0] <= s.min() and h.bin_edges[-1] >= s.max()

    def test_timing_offset_lowers_mean(self):
        h0 = empirical_pdf(STBC, 4, 100_000, 40, 12, UNIT)
        h9 = empirical_pdf(Scenario(imp=ImpairmentSpec(tau=0.9)), 4, 100_000, 40,
                           12, UNIT)
        assert h9.sample_mean < h0.sample_mean

    def test_min_bins(self):
        with pytest.raises(ValueError):
            empirical_pdf(STBC, 4, 1000, 5, 13, UNIT)

    def test_streaming_path(self, monkeypatch):
        monkeypatch.setattr(harness, "RETENTION_CAP", 50_000)
        h = empirical_pdf(STBC, 4, 120_000, 30, 14, UNIT)
        mass = float(np.sum(h.density * np.diff(h.bin_edges)))
        assert mass == pytest.approx(1.0, abs=1e-6)
        # streaming and retained paths see the same trials
        monkeypatch.setattr(harness, "RETENTION_CAP", 1_000_000)
        hr = empirical_pdf(STBC, 4, 120_000, 30, 14, UNIT,
                           value_range=(float(h.bin_edges[0]), float(h.bin_edges[-1])))
        assert hr.sample_mean == pytest.approx(h.sample_mean)

    def test_component_samples_match_analytic_cdf(self):
        s = collect_sinr_samples(STBC, 4, 100_000, 15, UNIT, model="component")
        rp = derive_rates(UNIT, ImpairmentSpec(), 4, 2.0)
        d = ks_statistic(s, sum_l(rp.lambda_h, rp.lambda_i, rp.lambda_g))
        assert d <= 0.01


class TestPhysicalVsAnalyticRegimes:
    def test_high_snr_cooperation_dominated_agreement(self):
        # with the cooperation term dominant, the physical chain and the
        # analytic component model agree on outage
        cfg = with_snr(default_config(), 25.0)
        q = make_query(cfg, ImpairmentSpec(), 4, upsilon=2.0)
        sim = simulate_outage(STBC, 4, 3.0, 400_000, 16, cfg)
        assert abs(sim.outage_hat - outage_numeric(q)) <= max(
            0.002, 3 * sim.ci95_halfwidth)

    def test_reference_preset_zero_outage(self):
        cfg = default_config()  # 45 dBm vs -114 dBm noise
        sim = simulate_outage(STBC, 4, 3.16, 100_000, 17, cfg)
        assert sim.outage_hat == 0.0
