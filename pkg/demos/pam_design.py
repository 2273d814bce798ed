# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: light
# ---

# # PAM envelope design
#
# Low SNR: a two-level law attaining the largest variance under the constraint.
# High SNR: uniform levels with max-entropy probabilities, whose step CDF
# follows the continuous max-entropy CDF more closely as the order grows.

import numpy as np

from owisac import EnvelopeConstraints, design_high_snr, design_low_snr, max_variance, solve_max_entropy
from owisac.envelope import cdf_sup_distance

c = EnvelopeConstraints(0.1, 1.0, 2.406)

p2 = design_low_snr(c)
v = max_variance(c)
print("2-PAM-low levels", p2.levels, "probs", np.round(p2.probs, 4))
print(f"variance {p2.variance:.5f} (max {v.variance:.5f}, case {v.case})")

# a step CDF sits at least half its largest jump away from a continuous one
d = solve_max_entropy(c)
for m in (4, 8, 16, 64):
    p = design_high_snr(c, m)
    print(f"{m:3d}-PAM  E[1/X]={p.harmonic_mean:.6f}  H={p.entropy:.4f} nats"
          f"  sup|F_pam - F_maxent|={cdf_sup_distance(p, d):.4f}  largest atom={max(p.probs):.4f}")

# designs serialize to a two-column CSV
print(design_high_snr(c, 8).to_csv())
