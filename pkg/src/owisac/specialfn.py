"""Special functions and closed-form integrals shared by the solvers.

All routines work on the negative real axis only, which is the only place the
dual variable of the harmonic-mean constraint lives (eta <= 0).

Most of the numerics go through the *scaled* exponential integral
``exp(-x) * Ei(x)`` so that ratios such as ``g_h`` stay finite for very
negative ``eta`` where ``exp(eta / a)`` underflows.
"""

import math

import numpy as np
from scipy.special import erfc

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061

_SERIES_SWITCH = -1.0
_CF_MAX_ITER = 500
_TINY = 1e-300


def _e1_scaled_cf(z):
    """exp(z) * E1(z) for z > 1 by the modified Lentz continued fraction."""
    b = z + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge for z={z}")


def _ei_series(x):
    """Ei(x) for -1 <= x < 0 from the convergent power series."""
    total = 0.0
    term = 1.0
    for k in range(1, 60):
        term *= x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            break
    return EULER_GAMMA + math.log(-x) + total


def ei_scaled(x):
    """Return ``exp(-x) * Ei(x)`` for ``x < 0``.

    Bounded in magnitude by ``1 / |x|`` for ``x < -1`` and never underflows.
    """
    x = float(x)
    if not x < 0.0:
        raise DomainError(f"Ei is only provided for negative arguments, got {x}")
    if x < _SERIES_SWITCH:
        return -_e1_scaled_cf(-x)
    return math.exp(-x) * _ei_series(x)


def exp_integral_ei(x):
    """Exponential integral ``Ei(x) = int_{-inf}^{x} e^u / u du`` for ``x < 0``.

    Ei is negative and strictly decreasing on the negative axis. For
    ``x < -745`` the result underflows to ``-0.0``.
    """
    x = float(x)
    if not x < 0.0:
        raise DomainError(f"Ei is only provided for negative arguments, got {x}")
    if x < _SERIES_SWITCH:
        if x < -745.0:
            return -0.0
        return math.exp(x) * ei_scaled(x)
    return _ei_series(x)


def gaussian_q(x):
    """Standard Gaussian tail probability ``Q(x) = 1 - Phi(x)``.

    Accepts scalars or arrays; evaluated through ``erfc`` so the upper tail
    keeps full relative precision.
    """
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def _check_interval(a, b):
    if not (a > 0.0 and b > a):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
# narrow intervals where the closed forms cancel badly: b <= 2a and the
# exponent eta/x varies by at most this much across [a, b]
_NARROW_SPAN = 30.0


def _is_narrow(a, b, eta):
    return b <= 2.0 * a and -eta * (1.0 / a - 1.0 / b) <= _NARROW_SPAN


def _gl_scaled(a, b, eta):
    """Gauss-Legendre ``(I_h, Ei-difference)``, both times ``exp(-eta/b)``.

    On a narrow interval the integrands are smooth, positive and bounded
    away from zero, so 64 nodes reach machine precision.
    """
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _GL_NODES
    w = half * _GL_WEIGHTS * np.exp(eta / x - eta / b)
    return math.fsum(w), math.fsum(w / x)


def _ei_diff_scaled(a, b, eta):
    """``(Ei(eta/a) - Ei(eta/b)) * exp(-eta/b)`` for eta < 0; positive."""
    if _is_narrow(a, b, eta):
        return _gl_scaled(a, b, eta)[1]
    shift = math.exp(eta / a - eta / b)
    return shift * ei_scaled(eta / a) - ei_scaled(eta / b)


def _ih_scaled(a, b, eta):
    """``I_h(a, b, eta) * exp(-eta/b)`` for eta < 0."""
    if _is_narrow(a, b, eta):
        return _gl_scaled(a, b, eta)[0]
    shift = math.exp(eta / a - eta / b)
    return b - a * shift + eta * _ei_diff_scaled(a, b, eta)


def _log_ratio(a, b):
    return math.log1p((b - a) / a)


def ei_difference(a, b, eta):
    """``Ei(eta/a) - Ei(eta/b) = int_a^b exp(eta/x) / x dx``.

    The eta = 0 value is the limit ``ln(b) - ln(a)``.
    """
    _check_interval(a, b)
    if eta > 0.0:
        raise DomainError(f"eta must be <= 0, got {eta}")
    if eta == 0.0:
        return _log_ratio(a, b)
    return math.exp(eta / b) * _ei_diff_scaled(a, b, eta)


def log_ei_difference(a, b, eta):
    """Natural log of :func:`ei_difference`, safe against underflow."""
    _check_interval(a, b)
    if eta > 0.0:
        raise DomainError(f"eta must be <= 0, got {eta}")
    if eta == 0.0:
        return math.log(_log_ratio(a, b))
    return eta / b + math.log(_ei_diff_scaled(a, b, eta))


def ih_integral(a, b, eta):
    """Closed form of ``int_a^b exp(eta / x) dx`` for ``0 < a < b``, ``eta <= 0``."""
    _check_interval(a, b)
    if eta > 0.0:
        raise DomainError(f"eta must be <= 0, got {eta}")
    if eta == 0.0:
        return b - a
    return math.exp(eta / b) * _ih_scaled(a, b, eta)


def log_ih_integral(a, b, eta):
    """Natural log of :func:`ih_integral` without underflow for very negative eta."""
    _check_interval(a, b)
    if eta > 0.0:
        raise DomainError(f"eta must be <= 0, got {eta}")
    if eta == 0.0:
        return math.log(b - a)
    return eta / b + math.log(_ih_scaled(a, b, eta))


def gh_auxiliary(a, b, eta):
    """Ratio ``int_a^b e^{eta/x} dx / int_a^b e^{eta/x} / x dx``.

    Decreases monotonically from ``b`` (eta -> -inf) to
    ``(b - a) / (ln b - ln a)`` at eta = 0. The max-entropy dual variable is
    the root of ``gh_auxiliary(a, b, eta) = 1 / varsigma``.
    """
    _check_interval(a, b)
    if eta > 0.0:
        raise DomainError(f"eta must be <= 0, got {eta}")
    if eta == 0.0:
        return (b - a) / _log_ratio(a, b)
    if _is_narrow(a, b, eta):
        ih, ed = _gl_scaled(a, b, eta)
        return ih / ed
    shift = math.exp(eta / a - eta / b)
    return (b - a * shift) / _ei_diff_scaled(a, b, eta) + eta
