"""Capacity bounds, asymptotes and trade-off curves.

Everything is in nats. The SNR axis is ``(B - A) / sigma`` where ``sigma`` is
the normalized communication noise std, expressed in dB as
``10 log10((B - A) / sigma)``.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import specialfn as sf
from .errors import DomainError, InfeasibleConstraint
from .maxent import (
    EnvelopeConstraints,
    capacity_lower_bound,
    entropy_from_eta,
    solve_max_entropy,
)

HALF_LOG_2PIE = 0.5 * math.log(2.0 * math.pi * math.e)


def snr_db_to_sigma(a, b, snr_db):
    """Noise std for which ``10 log10((b - a) / sigma)`` equals ``snr_db``."""
    return (b - a) / 10.0 ** (snr_db / 10.0)


def sigma_to_snr_db(a, b, noise_sigma):
    return 10.0 * math.log10((b - a) / noise_sigma)


@dataclass(frozen=True)
class MaxVarianceResult:
    variance: float
    mean: float
    harmonic: float
    case: str  # "III-1", "III-2" or "III-3"
    a_min: float
    b_peak: float

    def two_point_law(self):
        """The Bernoulli law attaining ``variance``: ((x1, B), (p1, p2))."""
        a, b = self.a_min, self.b_peak
        x1 = a if self.case != "III-3" else 1.0 / (2.0 * self.harmonic)
        p1 = (b - self.mean) / (b - x1)
        return (x1, b), (p1, 1.0 - p1)


def max_variance(c):
    """Largest variance of a law on [A, B] with E[1/X] <= varsigma.

    Attained by a two-point law with an atom at B. The boundary
    ``varsigma == 1/(2A)`` is reported as case III-3 (both formulas agree).
    """
    a, b, s = c.a_min, c.b_peak, c.sigma_h
    if b < 1.0 / s:
        raise InfeasibleConstraint(f"b_peak={b} < 1/sigma_h={1.0 / s}")
    if s >= 0.5 * (1.0 / a + 1.0 / b):
        return MaxVarianceResult(
            (b - a) ** 2 / 4.0, 0.5 * (a + b), 0.5 * (1.0 / a + 1.0 / b), "III-1", a, b
        )
    if s <= 1.0 / (2.0 * a):
        return MaxVarianceResult(
            b * (b * s - 1.0) / (4.0 * s), (b * s + 1.0) / (2.0 * s), s, "III-3", a, b
        )
    return MaxVarianceResult(
        (s - 1.0 / b) * (1.0 / a - s) * a * a * b * b, a + b - a * b * s, s, "III-2", a, b
    )


def low_snr_upper_bound(v, noise_sigma):
    """``0.5 ln(1 + var / sigma^2)`` from a Gaussian output law."""
    if not noise_sigma > 0.0:
        raise DomainError("noise_sigma must be positive")
    return 0.5 * math.log1p(v.variance / noise_sigma**2)


def low_snr_asymptote(v, noise_sigma):
    return v.variance / (2.0 * noise_sigma**2)


@dataclass(frozen=True)
class HighSnrHyperParams:
    sigma_star: float
    delta: float
    eta_tilde: float


def high_snr_hyperparams(c, eta_star, noise_sigma):
    a, b, s = c.a_min, c.b_peak, c.sigma_h
    delta = noise_sigma * math.log1p(a / (2.0 * noise_sigma))
    eta_tilde = eta_star * -math.expm1(-s * delta**2 / (2.0 * noise_sigma**2))
    return HighSnrHyperParams(min(s, 2.0 / (a + b)), delta, eta_tilde)


def high_snr_upper_bound(c, hp, noise_sigma):
    """Duality upper bound built on a Gaussian-roll-off output density.

    The output law copies ``exp(eta_tilde / y)`` on ``[A - delta, B + delta]``
    and decays like a Gaussian outside; requires ``delta < A``.
    """
    a, b, s = c.a_min, c.b_peak, c.sigma_h
    sig, delta, eta_t = noise_sigma, hp.delta, hp.eta_tilde
    if delta >= a:
        raise DomainError(f"delta={delta} must be smaller than a_min={a}")
    if eta_t > 0.0:
        raise DomainError("eta_tilde must be <= 0")
    q = sf.gaussian_q
    sqrt2pi = math.sqrt(2.0 * math.pi)
    inv_s_star = 1.0 / hp.sigma_star

    log_j = sf.log_ih_integral(a - delta, b + delta, eta_t) - math.log1p(
        -2.0 * q(delta / sig)
    )
    edge = delta / (sqrt2pi * sig) * math.exp(-(delta**2) / (2.0 * sig**2))
    inner_mass = 1.0 - q((inv_s_star - a + delta) / sig) - q((b - inv_s_star + delta) / sig)
    body = (log_j - math.log(sqrt2pi * sig)) * inner_mass
    tail = 1.0 - 2.0 * q((b - a + 2.0 * delta) / (2.0 * sig)) + sig / sqrt2pi * (
        -math.expm1(-((b - a + delta) ** 2) / (2.0 * sig**2)) / (a - delta)
        + math.expm1(-(delta**2) / (2.0 * sig**2)) / (b + delta)
    )
    return edge - 0.5 + body + q(delta / sig) - eta_t * s * tail


def asymptotic_gap(c, eta_star=None):
    """High-SNR limit of ``C - ln((B - A) / sigma)``.

    Equals ``-0.5 ln(2 pi e)`` when the harmonic-mean constraint is inactive.
    """
    if eta_star is None:
        eta_star = solve_max_entropy(c).eta_star
    h = entropy_from_eta(c, eta_star)
    return h - math.log(c.b_peak - c.a_min) - HALF_LOG_2PIE


def high_snr_asymptote(c, eta_star, noise_sigma):
    return math.log((c.b_peak - c.a_min) / noise_sigma) + asymptotic_gap(c, eta_star)


def nsp_from_sigma(c):
    """Normalized sensing priority in [0, 1]: 0 at sigma_max, 1 at 1/B."""
    lo, hi = c.sigma_min, c.sigma_max
    s = c.sigma_h
    slack = 1e-12 * hi  # endpoints computed by different formulas round differently
    if not (lo - slack <= s <= hi + slack):
        raise DomainError(f"sigma_h={s} outside [{lo}, {hi}]")
    return min(1.0, max(0.0, (hi - s) / (hi - lo)))


def sigma_from_nsp(a, b, chi):
    if not (0.0 <= chi <= 1.0):
        raise DomainError(f"chi must lie in [0, 1], got {chi}")
    hi = (math.log(b) - math.log(a)) / (b - a)
    lo = 1.0 / b
    return hi - chi * (hi - lo)


@dataclass
class CapacityCurve:
    snr_db: list
    lower: list = field(default_factory=list)
    upper_low: list = field(default_factory=list)
    upper_high: list = field(default_factory=list)
    asymptote_low: list = field(default_factory=list)
    asymptote_high: list = field(default_factory=list)
    achievable: dict = field(default_factory=dict)

    @property
    def upper(self):
        return [min(lo, hi) for lo, hi in zip(self.upper_low, self.upper_high)]


def _curve_point(c, d, v, snr_db, constellations):
    from .envelope import mutual_information_discrete

    sig = snr_db_to_sigma(c.a_min, c.b_peak, snr_db)
    lower = capacity_lower_bound(d, sig)
    up_low = low_snr_upper_bound(v, sig)
    hp = high_snr_hyperparams(c, d.eta_star, sig)
    try:
        up_high = high_snr_upper_bound(c, hp, sig)
    except DomainError:
        up_high = up_low
    rates = {
        label: mutual_information_discrete(p, sig) for label, p in constellations
    }
    return (
        lower,
        up_low,
        up_high,
        low_snr_asymptote(v, sig),
        high_snr_asymptote(c, d.eta_star, sig),
        rates,
    )


def build_capacity_curve(c, snr_grid_db, constellations=(), workers=1):
    """Bounds, asymptotes and achievable rates over an SNR grid (dB).

    ``constellations`` is a sequence of ``(label, PamConstellation)`` pairs.
    Rows come back in grid order whatever ``workers`` is.
    """
    d = solve_max_entropy(c)
    v = max_variance(c)
    constellations = list(constellations)
    grid = [float(s) for s in snr_grid_db]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(lambda s: _curve_point(c, d, v, s, constellations), grid)
            )
    else:
        rows = [_curve_point(c, d, v, s, constellations) for s in grid]

    curve = CapacityCurve(snr_db=grid)
    curve.achievable = {label: [] for label, _ in constellations}
    for lower, up_low, up_high, as_low, as_high, rates in rows:
        if lower > min(up_low, up_high) + 1e-9:
            raise ArithmeticError(
                f"bound ordering violated: lower={lower}, upper={min(up_low, up_high)}"
            )
        curve.lower.append(lower)
        curve.upper_low.append(up_low)
        curve.upper_high.append(up_high)
        curve.asymptote_low.append(as_low)
        curve.asymptote_high.append(as_high)
        for label, rate in rates.items():
            curve.achievable[label].append(rate)
    return curve


def tradeoff_high(a, b, chis):
    """Asymptotic gap at each NSP value in ``chis``."""
    return [asymptotic_gap(EnvelopeConstraints(a, b, sigma_from_nsp(a, b, chi))) for chi in chis]


def tradeoff_low(a, b, chis):
    """Maximum input variance at each NSP value in ``chis``."""
    return [max_variance(EnvelopeConstraints(a, b, sigma_from_nsp(a, b, chi))).variance for chi in chis]
