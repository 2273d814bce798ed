"""Max-entropy envelope law under a harmonic-mean constraint.

The law maximizing differential entropy on [A, B] subject to E[1/X] <= varsigma
is the truncated exponential family ``f(x) = exp(eta / x + mu - 1)``. The
dual variable ``eta`` is found with an extended bisection: the left end of
the bracket is doubled until it straddles the root, then halved down.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specialfn as sf
from .errors import DomainError, InfeasibleConstraint, NonConvergence

DEFAULT_TOL_ETA = 1e-10
DEFAULT_TOL_RESIDUAL = 1e-8
INITIAL_LEFT_ETA = -1.0
MAX_DOUBLINGS = 64
MAX_HALVINGS = 400


@dataclass(frozen=True)
class EnvelopeConstraints:
    """Envelope floor ``a_min``, peak ``b_peak`` and harmonic-mean cap ``sigma_h``."""

    a_min: float
    b_peak: float
    sigma_h: float

    def __post_init__(self):
        if not (0.0 < self.a_min < self.b_peak <= 1.0):
            raise DomainError(
                f"need 0 < a_min < b_peak <= 1, got ({self.a_min}, {self.b_peak})"
            )
        if not self.sigma_h > 0.0:
            raise DomainError(f"sigma_h must be positive, got {self.sigma_h}")

    @property
    def sigma_min(self):
        """Tightest feasible threshold, 1/B."""
        return 1.0 / self.b_peak

    @property
    def sigma_max(self):
        """Harmonic mean of the uniform law on [A, B]."""
        return sigma_max(self.a_min, self.b_peak)

    @property
    def feasible(self):
        return self.b_peak >= 1.0 / self.sigma_h

    def scaled(self, kappa):
        """Constraints for the envelope scaled by ``kappa`` (A, B -> kA, kB)."""
        return EnvelopeConstraints(
            self.a_min * kappa, self.b_peak * kappa, self.sigma_h / kappa
        )


def sigma_max(a, b):
    return (math.log(b) - math.log(a)) / (b - a)


class CaseClassification(enum.Enum):
    INFEASIBLE = "Infeasible"
    CONSTRAINT_INACTIVE = "ConstraintInactive"
    TRADE_OFF = "TradeOff"


def classify_case(c):
    """Which regime the harmonic-mean constraint puts the problem in.

    The boundary ``sigma_h == sigma_max`` counts as inactive.
    """
    if c.b_peak < 1.0 / c.sigma_h:
        return CaseClassification.INFEASIBLE
    if c.sigma_h >= c.sigma_max:
        return CaseClassification.CONSTRAINT_INACTIVE
    return CaseClassification.TRADE_OFF


def extended_bisection(
    ratio,
    target,
    tol_eta=DEFAULT_TOL_ETA,
    tol_residual=DEFAULT_TOL_RESIDUAL,
    eta_left=INITIAL_LEFT_ETA,
    max_doublings=MAX_DOUBLINGS,
):
    """Root of a decreasing ``ratio(eta) = target`` on (-inf, 0].

    ``ratio(0) < target`` must hold; the left end starts at ``eta_left`` and
    doubles until ``ratio(eta_left) >= target``. Bisection then continues
    until the bracket is narrower than ``tol_eta`` *and* the residual at the
    midpoint is below ``tol_residual``, or the bracket stops shrinking in
    floating point.
    """
    if not eta_left < 0.0:
        raise ValueError("eta_left must be negative")
    eta_r = 0.0
    eta_l = eta_left
    f_l = ratio(eta_l) - target
    doublings = 0
    while f_l < 0.0:
        if doublings >= max_doublings:
            raise NonConvergence(
                f"left bracket failed to reach target {target} after "
                f"{max_doublings} doublings (eta={eta_l})"
            )
        eta_l *= 2.0
        f_l = ratio(eta_l) - target
        doublings += 1

    for _ in range(MAX_HALVINGS):
        eta_m = 0.5 * (eta_l + eta_r)
        f_m = ratio(eta_m) - target
        if abs(eta_l - eta_r) < tol_eta and abs(f_m) <= tol_residual:
            return eta_m
        if eta_m in (eta_l, eta_r):
            break
        if f_m * f_l < 0.0:
            eta_r = eta_m
        else:
            eta_l, f_l = eta_m, f_m
    eta_m = 0.5 * (eta_l + eta_r)
    residual = abs(ratio(eta_m) - target)
    if residual <= tol_residual:
        return eta_m
    raise NonConvergence(
        f"bisection stalled at eta={eta_m} with residual {residual:.3e}"
    )


@dataclass(frozen=True)
class MaxEntropyDistribution:
    """Solved max-entropy law; ``mu_star`` always normalizes the density."""

    constraints: EnvelopeConstraints
    eta_star: float
    mu_star: float
    case: CaseClassification

    def pdf(self, x):
        return maxent_pdf(self, x)

    def cdf(self, x):
        return maxent_cdf(self, x)

    @property
    def entropy(self):
        return maxent_entropy(self)


def _normalizer(a, b, eta):
    return 1.0 - sf.log_ih_integral(a, b, eta)


def solve_max_entropy(c, tol_eta=DEFAULT_TOL_ETA):
    """Dual variables of the max-entropy law for constraints ``c``."""
    if not tol_eta > 0.0:
        raise ValueError("tol_eta must be positive")
    case = classify_case(c)
    a, b = c.a_min, c.b_peak
    if case is CaseClassification.INFEASIBLE:
        raise InfeasibleConstraint(
            f"b_peak={b} < 1/sigma_h={1.0 / c.sigma_h}: the problem is infeasible"
        )
    if case is CaseClassification.CONSTRAINT_INACTIVE:
        eta = 0.0
    else:
        # g_h is homogeneous of degree one in (a, b, eta); solving on the
        # unit-peak problem makes the bracket doubling scale-free.
        eta_unit = extended_bisection(
            lambda e: sf.gh_auxiliary(a / b, 1.0, e),
            1.0 / (c.sigma_h * b),
            tol_eta=tol_eta / b,
            tol_residual=DEFAULT_TOL_RESIDUAL / b,
        )
        eta = eta_unit * b
    return MaxEntropyDistribution(c, eta, _normalizer(a, b, eta), case)


def maxent_pdf(d, x):
    """Density ``exp(eta/x + mu - 1)`` on [A, B], zero elsewhere.

    Scalars give a float; arrays are evaluated elementwise.
    """
    a, b = d.constraints.a_min, d.constraints.b_peak
    if np.ndim(x) == 0:
        if x < a or x > b:
            return 0.0
        return math.exp(d.eta_star / x + d.mu_star - 1.0)
    x = np.asarray(x, dtype=float)
    inside = (x >= a) & (x <= b)
    xs = np.where(inside, x, b)
    return np.where(inside, np.exp(d.eta_star / xs + d.mu_star - 1.0), 0.0)


def maxent_cdf(d, x):
    """Closed-form CDF as a ratio of truncated ``I_h`` integrals."""
    a, b = d.constraints.a_min, d.constraints.b_peak
    if x <= a:
        return 0.0
    if x >= b:
        return 1.0
    return math.exp(sf.log_ih_integral(a, x, d.eta_star) + d.mu_star - 1.0)


def entropy_from_eta(c, eta):
    """Entropy of the max-entropy law given its dual variable ``eta``.

    ``eta == 0`` means the constraint is inactive and the law is uniform.
    """
    if eta == 0.0:
        return math.log(c.b_peak - c.a_min)
    log_diff = sf.log_ei_difference(c.a_min, c.b_peak, eta)
    return log_diff - math.log(c.sigma_h) - eta * c.sigma_h


def maxent_entropy(d):
    """Differential entropy in nats."""
    return entropy_from_eta(d.constraints, d.eta_star)


def harmonic_mean(d):
    """E[1/X] under the solved law."""
    c = d.constraints
    if d.eta_star == 0.0:
        return (math.log(c.b_peak) - math.log(c.a_min)) / (c.b_peak - c.a_min)
    return math.exp(
        sf.log_ei_difference(c.a_min, c.b_peak, d.eta_star) + d.mu_star - 1.0
    )


def capacity_lower_bound(d, noise_sigma):
    """Entropy-power lower bound ``0.5 ln(1 + e^{2h} / (2 pi e sigma^2))`` in nats."""
    if not noise_sigma > 0.0:
        raise DomainError("noise_sigma must be positive")
    h = maxent_entropy(d)
    snr_term = math.exp(2.0 * h - 2.0 * math.log(noise_sigma)) / (2.0 * math.pi * math.e)
    return 0.5 * math.log1p(snr_term)
