# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: light
# ---

# # FMCW ranging through a random envelope
#
# The data-bearing envelope multiplies the beat signal. Dividing it out
# amplifies noise by E[1/X], so constellations with equal harmonic mean
# give equal beat-recovery MSE.

import numpy as np

from owisac import (
    DEFAULT_FMCW,
    EnvelopeConstraints,
    NoiseSpec,
    TargetScenario,
    design_high_snr,
    design_low_snr,
    monte_carlo_sensing,
)
from owisac.fmcwsim import Ramp, beat_frequency, channel_gains, sense_snr_db_to_sigma

scen = TargetScenario(range_m=7.5, velocity_mps=10.0)
print("beat up   %.4f MHz" % (beat_frequency(scen, DEFAULT_FMCW, Ramp.UP) / 1e6))
print("beat down %.4f MHz" % (beat_frequency(scen, DEFAULT_FMCW, Ramp.DOWN) / 1e6))

_, h_s = channel_gains(scen)
c = EnvelopeConstraints(0.1, 1.0, 1.156)
designs = {"2-PAM-low": design_low_snr(c), "8-PAM-high": design_high_snr(c, 8)}

for snr in (0.0, 10.0, 20.0, 30.0):
    sig = sense_snr_db_to_sigma(h_s, snr)
    for label, p in designs.items():
        r = monte_carlo_sensing(p, scen, DEFAULT_FMCW, NoiseSpec(sigma_sense=sig, seed=1), trials=200)
        theory = sig**2 / h_s**2 * p.harmonic_mean
        print(f"{snr:4.0f} dB {label:11s} mse {r.mse_beat:.3e} (known envelope {r.mse_beat_known_envelope:.3e},"
              f" sigma^2 E[1/X]/h_s^2 {theory:.3e})  range rmse {r.rmse_range_m:.2e} m")
