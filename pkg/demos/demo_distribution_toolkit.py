"""Tour of the analytic-distribution toolkit.

Shows the two evaluation modes of the composite-SINR density agreeing, the
ratio and timing-term building blocks, and how good (or not) the
moment-matched Gamma surrogate of the timing-impaired SINR really is.  The
final table is the number to remember: the surrogate's Kolmogorov-Smirnov
distance from the exact law sits at the 0.01-0.04 level once the offset is
nonzero, which is visible at histogram scale even though the first two
moments match by construction.
"""

import numpy as np

from stbc_cnoma import (cdf_timing_ratio_R, gamma_fit, gamma_fit_moments,
                        ks_statistic, moments_R, moments_q1, pdf_sum_L,
                        pdf_timing_ratio_R, sample_component_sinr, sum_l)
from stbc_cnoma.distributions import MomentPair

LAM_H = 2.5
RATES = (10.0, 5.0, 10.0 / 3.0)
LAM_G = 2.0

print("== composite SINR density: closed form vs numerical convolution ==")
for l in (0.5, 2.0, 8.0):
    a = pdf_sum_L(l, LAM_H, RATES, LAM_G, mode="closed")
    b = pdf_sum_L(l, LAM_H, RATES, LAM_G, mode="numeric")
    print(f"  f({l:>4}) closed={a:.10f}  numeric={b:.10f}  |diff|={abs(a - b):.2e}")

print("\n== ratio-term moments (mean by quadrature of the survival fn) ==")
m = moments_q1(LAM_H, RATES)
print(f"  direct-phase ratio: mean={m.mean:.4f} variance={m.variance:.4f}")

print("\n== timing cooperation term ==")
for eps1 in (1.0, 0.7, 0.4, 0.1):
    mr = moments_R(LAM_G, eps1)
    print(f"  eps1={eps1:3.1f}: mean={mr.mean:.4f} var={mr.variance:.4f} "
          f"f(1)={pdf_timing_ratio_R(1.0, LAM_G, eps1):.4f}")

print("\n== Gamma surrogate quality for the timing cooperation term ==")
print("  per-offset distance between the exact law and its moment fit")
for eps1 in (1.0, 0.7, 0.4, 0.1):
    mr = moments_R(LAM_G, eps1)
    shape, scale = gamma_fit_moments(MomentPair(mr.mean, mr.variance))
    xs = np.linspace(1e-6, mr.mean + 8 * np.sqrt(mr.variance), 3000)
    exact = cdf_timing_ratio_R(xs, LAM_G, eps1)
    fit = gamma_fit(shape, scale).cdf(xs)
    print(f"  eps1={eps1:3.1f}: shape={shape:6.3f} scale={scale:6.3f} "
          f"sup|dF|={np.max(np.abs(exact - fit)):.4f}")

print("\n== sampling the component model and testing it ==")
s = sample_component_sinr("sum_l", 200_000, 99, lambda_h=LAM_H, lambda_i=RATES,
                          lambda_g=LAM_G)
d = ks_statistic(s, sum_l(LAM_H, RATES, LAM_G))
print(f"  K-S(200k component draws, closed CDF) = {d:.4f}  "
      f"(95% band at this n is about 0.003)")
