"""Baseband FMCW simulator for the sensing side of the link.

Only the post-filter models are simulated: the direct-detection output
``y = h_c x(t - d0/c) + n_c`` and the coherent IQ output
``z = h_s sqrt(x(t - 2 d0/c)) exp(j phi_b(t)) + n_s``. The optical carrier is
never synthesized. The beat phase ``phi_b`` is the exact difference between
the reference chirp phase and its round-trip-delayed copy, plus Doppler, so it
holds the textbook beat frequency on each ramp outside the dead zones.

Delays on the envelope are rounded to the nearest sample and applied
circularly over one chirp period.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AliasError, DomainError, WindowError

ZERO_PAD = 8
DEGENERATE_ENVELOPE = 1e-12


@dataclass(frozen=True)
class FmcwConfig:
    carrier_hz: float = 194e12
    chirp_bandwidth_hz: float = 5e9
    period_s: float = 10e-6
    symbols_per_period: int = 500
    sample_rate_hz: float = 200e6
    light_speed_mps: float = 3e8

    def __post_init__(self):
        for name in ("carrier_hz", "chirp_bandwidth_hz", "period_s",
                     "sample_rate_hz", "light_speed_mps"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.symbols_per_period < 1:
            raise DomainError("symbols_per_period must be positive")
        n = self.sample_rate_hz * self.period_s
        if abs(n - round(n)) > 1e-6 * n:
            raise DomainError(f"sample_rate_hz * period_s = {n} is not an integer")
        if round(n) % self.symbols_per_period:
            raise DomainError(
                f"{self.symbols_per_period} symbols do not divide {round(n)} samples"
            )

    @property
    def samples_per_period(self):
        return int(round(self.sample_rate_hz * self.period_s))

    @property
    def samples_per_symbol(self):
        return self.samples_per_period // self.symbols_per_period


DEFAULT_FMCW = FmcwConfig()


@dataclass(frozen=True)
class TargetScenario:
    range_m: float
    velocity_mps: float
    comm_offset_m: float = 0.0
    sense_offset_m: float = 0.0
    reflectivity: float = 1.0
    waist_m: float = 1e-3
    rayleigh_m: float = 2.0
    amplitude: float = 1.0
    responsivity_comm: float = 1.0
    responsivity_sense: float = 1.0

    def __post_init__(self):
        if not self.range_m > 0.0:
            raise DomainError(f"range_m must be positive, got {self.range_m}")
        if not 0.0 < self.reflectivity <= 1.0:
            raise DomainError("reflectivity must lie in (0, 1]")


@dataclass(frozen=True)
class NoiseSpec:
    sigma_comm: float = 0.0
    sigma_sense: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma_comm < 0 or self.sigma_sense < 0:
            raise DomainError("noise std must be nonnegative")


@dataclass(frozen=True)
class SensingRunResult:
    mse_beat: float
    rmse_range_m: float
    rmse_velocity_mps: float
    trials: int
    beat_freq_true_hz: tuple
    mse_beat_known_envelope: float = float("nan")
    degenerate_samples: int = 0


class Ramp(enum.Enum):
    UP = "up"
    DOWN = "down"


def instantaneous_frequency(t, cfg):
    """Chirp frequency offset from the carrier (Hz), periodic in ``period_s``."""
    T, B = cfg.period_s, cfg.chirp_bandwidth_hz
    tt = np.mod(np.asarray(t, dtype=float), T)
    # keep t == T on the down-ramp end rather than wrapping to 0
    tt = np.where((np.asarray(t) > 0) & (tt == 0.0), T, tt)
    out = np.where(tt <= T / 2, 2 * B * tt / T, B * (2 - 2 * tt / T))
    return float(out) if out.ndim == 0 else out


def chirp_phase_cycles(t, cfg):
    """Integral of :func:`instantaneous_frequency` from 0 to ``t`` (cycles)."""
    T, B = cfg.period_s, cfg.chirp_bandwidth_hz
    t = np.asarray(t, dtype=float)
    k = np.floor(t / T)
    tt = t - k * T
    up = B * tt * tt / T
    down = B * T / 4 + B * (2 * tt - tt * tt / T - 0.75 * T)
    return k * (B * T / 2) + np.where(tt <= T / 2, up, down)


def doppler_hz(s, cfg):
    return 2.0 * cfg.carrier_hz * s.velocity_mps / cfg.light_speed_mps


def beat_frequency(s, cfg, ramp):
    """Signed beat frequency on the given ramp; raises if it aliases."""
    range_term = 4.0 * cfg.chirp_bandwidth_hz * s.range_m / (
        cfg.light_speed_mps * cfg.period_s
    )
    fd = doppler_hz(s, cfg)
    f = fd + range_term if Ramp(ramp) is Ramp.UP else fd - range_term
    # a relative slack keeps the exact Nyquist boundary on the aliasing side
    if abs(f) >= cfg.sample_rate_hz / 2 * (1.0 - 1e-12):
        raise AliasError(
            f"beat frequency {f:.6e} Hz beyond Nyquist {cfg.sample_rate_hz / 2:.6e} Hz"
        )
    return f


def beat_phase(t, s, cfg, phase0=0.0):
    """Noiseless beat phase (radians) at times ``t``."""
    tau = 2.0 * s.range_m / cfg.light_speed_mps
    cycles = chirp_phase_cycles(t, cfg) - chirp_phase_cycles(np.asarray(t) - tau, cfg)
    return 2 * np.pi * (cycles + doppler_hz(s, cfg) * np.asarray(t)) + phase0


def channel_gains(s):
    """Packed gains ``(h_c, h_s)`` of the communication and sensing paths."""
    if not s.range_m > 0.0:
        raise DomainError("range_m must be positive")
    ratio = s.rayleigh_m / (s.waist_m * s.range_m)
    h_c = (
        s.amplitude**2 * s.rayleigh_m**2 * s.responsivity_comm / s.range_m**2
        * math.exp(-2.0 * ratio**2 * s.comm_offset_m**2)
    )
    h_s = (
        2.0 * s.amplitude * s.rayleigh_m * s.reflectivity * s.responsivity_sense
        / s.range_m * math.exp(-(ratio**2) * s.sense_offset_m**2)
    )
    return h_c, h_s


def generate_envelope(p, cfg, rng):
    """One chirp period of i.i.d. PAM symbols, each held for several samples."""
    symbols = rng.choice(np.asarray(p.levels), size=cfg.symbols_per_period, p=np.asarray(p.probs))
    return np.repeat(symbols, cfg.samples_per_symbol)


def _delay_samples(delay_s, cfg):
    return int(round(delay_s * cfg.sample_rate_hz))


def simulate_detection(envelope, s, cfg, noise, rng, phase0=None):
    """Direct-detection output ``y`` and coherent IQ output ``z_iq``.

    ``phase0`` defaults to a uniform draw on [0, 2 pi). Returns
    ``(y, z_iq, phase0)``.
    """
    beat_frequency(s, cfg, Ramp.UP)
    beat_frequency(s, cfg, Ramp.DOWN)
    if phase0 is None:
        phase0 = rng.uniform(0.0, 2 * np.pi)
    envelope = np.asarray(envelope, dtype=float)
    n = envelope.size
    t = np.arange(n) / cfg.sample_rate_hz
    h_c, h_s = channel_gains(s)
    c = cfg.light_speed_mps

    x_comm = np.roll(envelope, _delay_samples(s.range_m / c, cfg))
    y = h_c * x_comm
    if noise.sigma_comm > 0:
        y = y + noise.sigma_comm * rng.standard_normal(n)

    x_sense = np.roll(envelope, _delay_samples(2 * s.range_m / c, cfg))
    z_iq = h_s * np.sqrt(x_sense) * np.exp(1j * beat_phase(t, s, cfg, phase0))
    if noise.sigma_sense > 0:
        std = noise.sigma_sense / math.sqrt(2.0)
        z_iq = z_iq + std * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return y, z_iq, phase0


def recover_beat(z_iq, h_s, envelope=None):
    """Divide the envelope out of the IQ signal.

    Without ``envelope`` the blind estimate ``|z_iq|^2 / h_s^2`` is used,
    which makes the result unit-modulus. Passing the true (delayed) envelope
    gives the known-envelope recovery. Returns ``(z, valid)`` where
    ``valid`` marks samples whose envelope estimate is not degenerate.
    """
    if not h_s > 0:
        raise DomainError("h_s must be positive")
    z_iq = np.asarray(z_iq)
    if envelope is None:
        x_hat = (z_iq.real**2 + z_iq.imag**2) / h_s**2
    else:
        x_hat = np.asarray(envelope, dtype=float)
    valid = x_hat >= DEGENERATE_ENVELOPE
    safe = np.where(valid, x_hat, 1.0)
    z = np.where(valid, z_iq / (h_s * np.sqrt(safe)), 0.0)
    return z, valid


def default_windows(s, cfg):
    """Up- and down-ramp sample windows that skip the round-trip dead zone."""
    n = cfg.samples_per_period
    dead = int(math.ceil(2 * s.range_m / cfg.light_speed_mps * cfg.sample_rate_hz - 1e-9))
    half = n // 2
    return (dead, half), (half + dead, n)


def estimate_beat_frequency(z, window, cfg):
    """Peak frequency of the zero-padded DFT over ``window`` = (start, stop).

    The peak bin is refined by a parabola through the log-magnitudes of the
    bin and its neighbours. The window must lie inside a single ramp.
    """
    start, stop = window
    n = cfg.samples_per_period
    half = n // 2
    if not (0 <= start < stop <= n):
        raise WindowError(f"window {window} outside one period of {n} samples")
    if start < half < stop:
        raise WindowError(f"window {window} crosses the ramp boundary at {half}")
    seg = np.asarray(z)[start:stop]
    nfft = ZERO_PAD * seg.size
    spec = np.abs(np.fft.fft(seg, nfft))
    k = int(np.argmax(spec))
    lm, l0, lp = (np.log(max(spec[(k + d) % nfft], 1e-300)) for d in (-1, 0, 1))
    denom = lm - 2 * l0 + lp
    offset = 0.5 * (lm - lp) / denom if denom < 0 else 0.0
    f = (k + offset) * cfg.sample_rate_hz / nfft
    if f >= cfg.sample_rate_hz / 2:
        f -= cfg.sample_rate_hz
    # window start time enters only as a phase, so no correction is needed
    return f


def estimate_range_velocity(f_up, f_down, cfg):
    """Invert the two-ramp beat frequencies into (range, velocity)."""
    c = cfg.light_speed_mps
    rng_m = (f_up - f_down) * c * cfg.period_s / (8.0 * cfg.chirp_bandwidth_hz)
    vel = (f_up + f_down) * c / (4.0 * cfg.carrier_hz)
    return rng_m, vel


def trial_rng(seed, index):
    """Independent generator for trial ``index`` derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_trial(i, p, s, cfg, noise, windows):
    rng = trial_rng(noise.seed, i)
    env = generate_envelope(p, cfg, rng)
    _, z_iq, phase0 = simulate_detection(env, s, cfg, noise, rng)
    _, h_s = channel_gains(s)
    t = np.arange(env.size) / cfg.sample_rate_hz
    ref = np.exp(1j * beat_phase(t, s, cfg, phase0))

    z, valid = recover_beat(z_iq, h_s)
    err = np.abs(z - ref) ** 2
    mse = float(err[valid].mean()) if valid.any() else float("nan")

    x_sense = np.roll(env, _delay_samples(2 * s.range_m / cfg.light_speed_mps, cfg))
    z_known, _ = recover_beat(z_iq, h_s, envelope=x_sense)
    mse_known = float((np.abs(z_known - ref) ** 2).mean())

    f_up = estimate_beat_frequency(z, windows[0], cfg)
    f_down = estimate_beat_frequency(z, windows[1], cfg)
    d_hat, v_hat = estimate_range_velocity(f_up, f_down, cfg)
    return mse, mse_known, d_hat - s.range_m, v_hat - s.velocity_mps, int((~valid).sum())


def monte_carlo_sensing(p, s, cfg, noise, trials, workers=1, windows=None):
    """Average beat-recovery MSE and range/velocity RMSE over ``trials`` runs.

    Trial ``i`` draws everything from :func:`trial_rng` ``(seed, i)`` and the
    reductions use exactly rounded sums, so the result does not depend on
    ``workers``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    f_true = (beat_frequency(s, cfg, Ramp.UP), beat_frequency(s, cfg, Ramp.DOWN))
    if windows is None:
        windows = default_windows(s, cfg)

    def run(i):
        return _run_trial(i, p, s, cfg, noise, windows)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(trials)))
    else:
        rows = [run(i) for i in range(trials)]

    mse, mse_known, d_err, v_err, degenerate = zip(*rows)
    return SensingRunResult(
        mse_beat=math.fsum(mse) / trials,
        rmse_range_m=math.sqrt(math.fsum(e * e for e in d_err) / trials),
        rmse_velocity_mps=math.sqrt(math.fsum(e * e for e in v_err) / trials),
        trials=trials,
        beat_freq_true_hz=f_true,
        mse_beat_known_envelope=math.fsum(mse_known) / trials,
        degenerate_samples=sum(degenerate),
    )


def sense_snr_db_to_sigma(h_s, snr_db):
    """Sensing noise std for ``10 log10(h_s / sigma_s) = snr_db``."""
    return h_s / 10.0 ** (snr_db / 10.0)
