"""PAM envelope design and achievable-rate evaluation.

Two designs are provided and never substituted for one another:

* ``design_low_snr`` -- the two-point law of largest variance (M = 2).
* ``design_high_snr`` -- uniform levels on [A, B] with max-entropy
  probabilities ``a_m ~ exp(eta / x_m)``.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .errors import DomainError, InfeasibleConstraint
from .maxent import extended_bisection

CSV_COLUMNS = ("level", "probability")


@dataclass(frozen=True)
class PamConstellation:
    levels: tuple
    probs: tuple
    label: str = ""
    eta: float = 0.0

    def __post_init__(self):
        levels = tuple(float(x) for x in self.levels)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "probs", probs)
        if len(levels) != len(probs) or not levels:
            raise DomainError("levels and probs must be non-empty and the same length")
        if any(p < 0.0 for p in probs):
            raise DomainError("probabilities must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {math.fsum(probs)}, not 1")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise DomainError("levels must be strictly increasing")

    @property
    def order(self):
        return len(self.levels)

    @property
    def harmonic_mean(self):
        return math.fsum(p / x for x, p in zip(self.levels, self.probs))

    @property
    def mean(self):
        return math.fsum(p * x for x, p in zip(self.levels, self.probs))

    @property
    def variance(self):
        m = self.mean
        return math.fsum(p * (x - m) ** 2 for x, p in zip(self.levels, self.probs))

    @property
    def entropy(self):
        return -math.fsum(p * math.log(p) for p in self.probs if p > 0.0)

    def cdf(self, x):
        return pam_cdf(self, x)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for x, p in zip(self.levels, self.probs):
            writer.writerow((repr(x), repr(p)))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, label=""):
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        if tuple(c.strip() for c in rows[0]) != CSV_COLUMNS:
            raise DomainError(f"expected header {CSV_COLUMNS}, got {rows[0]}")
        levels = [float(r[0]) for r in rows[1:]]
        probs = [float(r[1]) for r in rows[1:]]
        return cls(levels, probs, label=label)


def _check_feasible(c):
    if c.b_peak < 1.0 / c.sigma_h:
        raise InfeasibleConstraint(
            f"b_peak={c.b_peak} < 1/sigma_h={1.0 / c.sigma_h}: the problem is infeasible"
        )


def design_low_snr(c):
    """Two-point envelope (x1, B) with the largest variance under ``c``."""
    _check_feasible(c)
    a, b, s = c.a_min, c.b_peak, c.sigma_h
    x1 = a if s >= 1.0 / (2.0 * a) else 1.0 / (2.0 * s)
    if s >= 0.5 * (1.0 / a + 1.0 / b):
        a1 = 0.5
    elif s < 1.0 / (2.0 * a):
        a1 = (s - 1.0 / b) / (2.0 * s - 1.0 / b)
    else:
        a1 = (s - 1.0 / b) / (1.0 / a - 1.0 / b)
    if a1 == 0.0:
        return PamConstellation((b,), (1.0,), label="2-PAM low-SNR")
    return PamConstellation((x1, b), (a1, 1.0 - a1), label="2-PAM low-SNR")


def pam_levels_uniform(c, m):
    """``m`` equally spaced levels from A to B inclusive."""
    if m < 2:
        raise DomainError(f"PAM order must be >= 2, got {m}")
    a, b = c.a_min, c.b_peak
    k = np.arange(m)
    levels = (k * b + (m - 1 - k) * a) / (m - 1)
    levels[0], levels[-1] = a, b
    return levels


def _discrete_ratio(levels, eta):
    # sum(e^{eta/x}) / sum(e^{eta/x} / x), weights shifted by the largest exponent
    expo = eta / levels
    w = np.exp(expo - expo.max())
    return w.sum() / (w / levels).sum()


def design_high_snr(c, m, tol=1e-10):
    """Max-entropy probabilities on ``m`` uniform levels under ``c``."""
    _check_feasible(c)
    levels = pam_levels_uniform(c, m)
    label = f"{m}-PAM high-SNR"
    if np.mean(1.0 / levels) <= c.sigma_h:
        return PamConstellation(levels, np.full(m, 1.0 / m), label=label)
    b = c.b_peak
    unit = levels / b
    eta_unit = extended_bisection(
        lambda e: _discrete_ratio(unit, e),
        1.0 / (c.sigma_h * b),
        tol_eta=tol / b,
        tol_residual=1e-8 / b,
    )
    eta = eta_unit * b
    log_w = eta / levels
    probs = np.exp(log_w - logsumexp(log_w))
    probs /= math.fsum(probs)
    return PamConstellation(levels, probs, label=label, eta=eta)


def discrete_dual_residual(p, sigma_h):
    levels = np.asarray(p.levels)
    return abs(_discrete_ratio(levels, p.eta) - 1.0 / sigma_h)


def pam_cdf(p, x):
    """Right-continuous step CDF of the constellation."""
    idx = int(np.searchsorted(p.levels, x, side="right"))
    if idx == len(p.levels):
        return 1.0
    return min(1.0, math.fsum(p.probs[:idx]))


def cdf_sup_distance(p, d):
    """Sup-norm distance between the step CDF of ``p`` and a continuous CDF ``d``.

    The step CDF is flat between levels and the continuous CDF is monotone, so
    the supremum is attained at a level from one side or the other.
    """
    cum = np.concatenate(([0.0], np.cumsum(p.probs)))
    dist = 0.0
    for i, x in enumerate(p.levels):
        f = d.cdf(x)
        dist = max(dist, abs(cum[i] - f), abs(cum[i + 1] - f))
    return float(dist)


def _output_log_density(y, levels, log_probs, sigma):
    z = (y[:, None] - levels[None, :]) / sigma
    return logsumexp(log_probs[None, :] - 0.5 * z * z, axis=1) - math.log(
        math.sqrt(2.0 * math.pi) * sigma
    )


def mutual_information_discrete(p, noise_sigma, epsabs=1e-8):
    """I(X; Y) in nats for ``Y = X + N(0, noise_sigma^2)`` with PAM input ``p``.

    ``h(Y)`` is integrated by adaptive Gauss-Kronrod quadrature over
    ``[x_1 - 10 sigma, x_M + 10 sigma]``. When the Gaussian bumps are well
    separated the window is cut at the midpoints between levels and each
    piece is trimmed to 12 sigma around its level, where the neglected mass
    is below 1e-30.
    """
    if not noise_sigma > 0.0:
        raise DomainError("noise_sigma must be positive")
    levels = np.asarray(p.levels, dtype=float)
    probs = np.asarray(p.probs, dtype=float)
    keep = probs > 0.0
    levels, log_probs = levels[keep], np.log(probs[keep])
    if levels.size == 1:
        return 0.0
    sig = noise_sigma
    log_norm = math.log(math.sqrt(2.0 * math.pi) * sig)

    def integrand(y):
        z = (y - levels) / sig
        log_f = logsumexp(log_probs - 0.5 * z * z) - log_norm
        return -math.exp(log_f) * log_f

    lo, hi = levels[0] - 10.0 * sig, levels[-1] + 10.0 * sig
    spacing = float(np.min(np.diff(levels)))
    if 24.0 * sig >= spacing:
        pieces = [(lo, hi, list(levels) if levels.size <= 50 else None)]
    else:
        mids = 0.5 * (levels[1:] + levels[:-1])
        edges = np.concatenate(([lo], mids, [hi]))
        pieces = [
            (max(left, x - 12.0 * sig), min(right, x + 12.0 * sig), [x])
            for left, right, x in zip(edges[:-1], edges[1:], levels)
        ]
    tol = epsabs / len(pieces)
    h_y = 0.0
    for left, right, pts in pieces:
        val, _ = integrate.quad(
            integrand, left, right, points=pts, epsabs=tol, epsrel=1e-12, limit=500
        )
        h_y += val
    mi = h_y - 0.5 * math.log(2.0 * math.pi * math.e * sig**2)
    return min(max(mi, 0.0), float(np.log(levels.size)))


def mutual_information_monte_carlo(p, noise_sigma, n_samples, rng):
    """Monte-Carlo estimate of I(X; Y) and its standard error."""
    levels = np.asarray(p.levels, dtype=float)
    probs = np.asarray(p.probs, dtype=float)
    keep = probs > 0.0
    levels, log_probs = levels[keep], np.log(probs[keep])
    x = rng.choice(levels, size=n_samples, p=np.exp(log_probs))
    y = x + noise_sigma * rng.standard_normal(n_samples)
    log_cond = -0.5 * ((y - x) / noise_sigma) ** 2 - math.log(
        math.sqrt(2.0 * math.pi) * noise_sigma
    )
    samples = log_cond - _output_log_density(y, levels, log_probs, noise_sigma)
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n_samples))
