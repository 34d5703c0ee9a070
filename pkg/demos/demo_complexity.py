"""Receiver-complexity comparison of five cooperative downlink schemes.

Prints the cancellation counts, the slot/transmission table for even user
counts, and the two headline reductions of the chained-pair scheme against
decode-and-forward relaying.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from stbc_cnoma import (SCHEMES, render_sic_table, render_slots_table,
                        sic_count, sic_reduction)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

print(render_sic_table(range(2, 21)))
print()
print(render_slots_table([4, 6, 8]))
print()
for K in (6, 10, 18):
    print(f"K={K:>2}: chained-pair needs {sic_count('stbc-cnoma', K):>3} "
          f"cancellations vs {sic_count('ccn', K):>3} for decode-and-forward "
          f"({100 * sic_reduction(K):.1f}% fewer)")

ks = range(2, 21)
fig, ax = plt.subplots(figsize=(6.5, 4.2))
for scheme in SCHEMES:
    ax.plot(list(ks), [sic_count(scheme, K) for K in ks], marker="o", ms=3,
            label=scheme)
ax.set_xlabel("number of users K")
ax.set_ylabel("total cancellations")
ax.legend()
ax.grid(alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "complexity.png", dpi=130)
print(f"\nwrote {OUT / 'complexity.png'}")
