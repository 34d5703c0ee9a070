"""Link-level simulator and analytic outage engine for downlink cooperative
NOMA with distributed pairwise space-time coding, under timing offsets,
residual interference after cancellation, and channel-estimation error."""

from .config import (ImpairmentSpec, RateParameters, SystemConfig,
                     csi_coefficients, db_to_linear, dbm_to_watts,
                     default_config, derive_rates, linear_to_db, load_config,
                     noise_power_watts, pair_users, save_config, serving_pair,
                     validate, watts_to_dbm, with_snr)
from .sampling import (ChannelRealization, StreamKey, draw_block,
                       draw_hypoexp, draw_hypoexp_block, draw_realization,
                       sample_component_sinr)
from .sinr import (Scenario, SinrSample, UnsupportedScenarioError, ccn_sinr,
                   coop_sinr_from_combiner, direct_noma_sinr, scheme_sinr,
                   sinr_with_impairments, stbc_combine_with_offset,
                   stbc_coop_sinr_perfect)
from .distributions import (AnalyticDistribution, MomentPair, cdf_hypoexp,
                            cdf_ratio, cdf_sum_L, cdf_timing_ratio_R,
                            export_table, gamma_fit, gamma_fit_moments,
                            hypoexponential, ks_statistic, moments_q1,
                            moments_R, moments_ratio, pdf_hypoexp, pdf_ratio,
                            pdf_ratio_q1, pdf_sum_L, pdf_sum_L_chi,
                            pdf_sum_L_eta, pdf_timing_ratio_R, ratio_q1,
                            ratio_q_eta, sum_l, sum_l_chi, sum_l_eta,
                            timing_ratio_r)
from .outage import (AsymptoticValidityError, InternalConsistencyError,
                     OutageQuery, make_query, outage_asymptotic, outage_exact,
                     outage_numeric, rate_outage_threshold,
                     timing_gamma_parameters)
from .complexity import (ComplexityRow, SCHEMES, complexity_row,
                         render_sic_table, render_slots_table, sic_count,
                         sic_reduction, sic_table, slots_and_transmissions)
from .harness import (EmpiricalPdf, SimResult, collect_sinr_samples,
                      empirical_pdf, outage_curve, simulate_outage)
from . import specfun

__all__ = [name for name in dir() if not name.startswith("_")]
