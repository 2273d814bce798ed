# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: light
# ---

# # Max-entropy envelope law under a harmonic-mean constraint
#
# The envelope X lives on [A, B] and the sensing requirement bounds E[1/X].
# The entropy-maximizing density is exp(eta/x + mu - 1); a tighter bound
# pushes eta further below zero and the mass toward the peak B.

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from owisac import DomainError, EnvelopeConstraints, classify_case, nsp_from_sigma, solve_max_entropy

A, B = 0.1, 1.0

# each bound gets a case label: uniform when the bound is loose, trade-off otherwise.
# NSP is only defined between 1/B and the harmonic mean of the uniform law.
for s in (6.0, 2.406, 1.156, 1.02):
    c = EnvelopeConstraints(A, B, s)
    d = solve_max_entropy(c)
    try:
        nsp = f"{nsp_from_sigma(c):.3f}"
    except DomainError:
        nsp = "n/a"
    print(f"sigma_h={s:6.3f}  NSP={nsp:5s}  case={classify_case(c).value:9s}"
          f"  eta*={d.eta_star:+.6f}  h={d.entropy:+.5f} nats")

# the density is increasing whenever the constraint binds
x = np.linspace(A, B, 400)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
for s in (6.0, 2.406, 1.156):
    d = solve_max_entropy(EnvelopeConstraints(A, B, s))
    ax1.plot(x, d.pdf(x), label=f"sigma_h={s}")
    ax2.plot(x, [d.cdf(v) for v in x], label=f"sigma_h={s}")
ax1.set_xlabel("x"); ax1.set_ylabel("pdf")
ax2.set_xlabel("x"); ax2.set_ylabel("cdf")
ax1.legend(fontsize=7)
fig.tight_layout()
fig.savefig("maxent_envelope.png", dpi=120)
