# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: light
# ---

# # Capacity bounds across SNR
#
# Lower bound: entropy-power inequality on the max-entropy input.
# Upper bounds: a max-variance Gaussian bound (tight at low SNR) and a
# sphere-packing style bound (tight at high SNR). SNR is 10 log10((B - A)/sigma).

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from owisac import EnvelopeConstraints, build_capacity_curve, design_high_snr, design_low_snr

A, B = 0.1, 1.0
grid = np.arange(-10.0, 40.01, 5.0)

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, s in zip(axes, (1.156, 2.406)):
    c = EnvelopeConstraints(A, B, s)
    designs = [("2-PAM-low", design_low_snr(c)), ("16-PAM-high", design_high_snr(c, 16))]
    curve = build_capacity_curve(c, grid, designs)
    print(f"sigma_h={s}")
    for snr, lo, up in zip(curve.snr_db, curve.lower, curve.upper):
        print(f"  {snr:5.1f} dB  lower {lo:.4f}  upper {up:.4f} nats")
    ax.plot(grid, curve.lower, label="lower")
    ax.plot(grid, curve.upper, label="upper")
    for lbl, rate in curve.achievable.items():
        ax.plot(grid, rate, "--", label=lbl)
    ax.set_title(f"sigma_h = {s}")
    ax.set_xlabel("(B-A)/sigma [dB]")
axes[0].set_ylabel("rate [nats]")
axes[0].legend(fontsize=7)
fig.tight_layout()
fig.savefig("capacity_bounds.png", dpi=120)
