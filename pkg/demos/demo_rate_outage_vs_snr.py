"""Rate outage versus transmit SNR for each impairment family.

Runs the half-BPCU regime where the high-SNR approximations have a valid
first-term denominator, and prints their relative error against the exact
numeric outage.  The table makes the character of those approximations
plain: they are sums of single-branch outage terms, and their leading term
decays like 1/SNR while the exact two-branch outage decays like 1/SNR^2, so
the ratio grows with SNR even though both curves fall.  Treat the dotted
curves as upper bounds, not asymptotes.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from stbc_cnoma import (ImpairmentSpec, Scenario, db_to_linear, default_config,
                        make_query, outage_asymptotic, outage_numeric,
                        simulate_outage, with_snr)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

upsilon = 0.5
gamma_th = 2 ** upsilon - 1
snr_db = np.arange(0, 51, 5)
families = (("perfect", ImpairmentSpec()),
            ("residual SIC -20 dB", ImpairmentSpec(eta=1, phi_eta=0.01)),
            ("timing offset 0.5", ImpairmentSpec(tau=0.5)),
            ("estimation error -10 dB", ImpairmentSpec(sigma_omega2=0.1)))

fig, ax = plt.subplots(figsize=(7, 4.5))
print(f"rate threshold {upsilon} BPCU  (gamma_th = {gamma_th:.4f})")
print(f"{'family':>24} {'SNR(dB)':>8} {'simulated':>11} {'numeric':>11} "
      f"{'approx':>11} {'approx/numeric':>15}")

for label, imp in families:
    nums, sims, asyms = [], [], []
    for s in snr_db:
        cfg = with_snr(default_config(), float(s))
        q = make_query(cfg, imp, 4, upsilon, snr=db_to_linear(float(s)))
        num = outage_numeric(q)
        sim = simulate_outage(Scenario(imp=imp), 4, gamma_th, 300_000, 31, cfg,
                              workers=4).outage_hat
        asym = outage_asymptotic(q)
        nums.append(num), sims.append(sim), asyms.append(asym)
        if s in (20, 30, 40, 50):
            print(f"{label:>24} {s:>8} {sim:>11.3e} {num:>11.3e} "
                  f"{asym:>11.3e} {asym / num:>15.1f}")
    line, = ax.semilogy(snr_db, nums, "-", lw=1.2, label=label)
    ax.semilogy(snr_db, np.maximum(sims, 1e-8), "o", ms=3, color=line.get_color())
    ax.semilogy(snr_db, asyms, ":", lw=1.0, color=line.get_color())

ax.set_xlabel("transmit SNR (dB)")
ax.set_ylabel("rate outage probability")
ax.set_ylim(1e-8, 1.2)
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=8)
ax.set_title("Rate outage (solid: exact, dots: simulation, dotted: bound)")
fig.tight_layout()
fig.savefig(OUT / "rate_outage_vs_snr.png", dpi=130)
print(f"wrote {OUT / 'rate_outage_vs_snr.png'}")
