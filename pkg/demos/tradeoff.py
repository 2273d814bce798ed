# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: light
# ---

# # Communication-sensing trade-off
#
# NSP runs from 0 (constraint inactive) to 1 (envelope pinned at B). The
# high-SNR gap and the low-SNR maximum variance both shrink as NSP grows,
# and both depend only on the ratio A/B.

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from owisac.capacity import tradeoff_high, tradeoff_low

chis = [k / 20 for k in range(20)]
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
for a, b in ((0.1, 1.0), (0.2, 1.0), (0.05, 0.5)):
    gap = tradeoff_high(a, b, chis)
    var = np.array(tradeoff_low(a, b, chis)) / b**2
    print(f"A/B={a / b:.2f}  gap(0)={gap[0]:.4f}  gap(0.95)={gap[-1]:.4f}  var/B^2(0)={var[0]:.4f}")
    ax1.plot(chis, gap, label=f"A={a}, B={b}")
    ax2.plot(chis, var, label=f"A={a}, B={b}")
ax1.set_xlabel("NSP"); ax1.set_ylabel("high-SNR gap [nats]")
ax2.set_xlabel("NSP"); ax2.set_ylabel("max variance / B^2")
ax1.legend(fontsize=7)
fig.tight_layout()
fig.savefig("tradeoff.png", dpi=120)
