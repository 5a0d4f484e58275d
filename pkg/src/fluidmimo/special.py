"""Bessel functions of the first kind (orders 0 and 1), zeros of J0 and the
digamma function at positive integers.

Small arguments use the power series, large arguments the Hankel
amplitude-phase expansion.  The crossover at 12 keeps both branches below
1e-12 absolute error: the series loses digits to cancellation as x grows,
and the asymptotic series cannot reach 1e-10 much below x = 10.
"""

import math

import numpy as np

from .errors import InvalidArgumentError

__all__ = ["bessel_j0", "bessel_j1", "j0_zero", "digamma_int", "EULER_GAMMA"]

EULER_GAMMA = 0.57721566490153286060651209008240243

_CROSSOVER = 12.0
_SERIES_TERMS = 48
_ASYMPTOTIC_TERMS = 24
_MAX_ZERO_INDEX = 20


def _as_checked_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("Bessel argument must be finite")
    return arr


def _series(x, order):
    # sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!)
    q = -0.25 * x * x
    term = np.ones_like(x) if order == 0 else 0.5 * x
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
    return total


def _asymptotic(x, order):
    mu = 4.0 * order * order
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    coef = 1.0
    inv = 1.0 / x
    power = np.ones_like(x)
    for k in range(_ASYMPTOTIC_TERMS):
        if k > 0:
            coef *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
            power = power * inv
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * coef * power
        else:
            q += sign * coef * power
    phase = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(phase) - q * np.sin(phase))


def _bessel(x, order):
    arr = _as_checked_array(x)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax < _CROSSOVER
    if np.any(small):
        out[small] = _series(ax[small], order)
    if not np.all(small):
        out[~small] = _asymptotic(ax[~small], order)
    if order == 1:
        out = np.where(arr < 0, -out, out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def bessel_j0(x):
    """Bessel function of the first kind of order zero.

    Parameters
    ----------
    x : float or array_like
        Finite argument(s).  ``J0`` is even, so negative values are accepted.

    Returns
    -------
    float or ndarray
        ``J0(x)`` with the same shape as `x`.

    Raises
    ------
    InvalidArgumentError
        If any element of `x` is NaN or infinite.
    """
    return _bessel(x, 0)


def bessel_j1(x):
    """Bessel function of the first kind of order one (``J0' = -J1``)."""
    return _bessel(x, 1)


def j0_zero(k):
    """Return the `k`-th positive zero of ``J0``.

    Newton iteration on ``J0`` with derivative ``-J1``, started from the
    McMahon estimate ``(k - 1/4) pi``.  Supported for ``1 <= k <= 20``.
    """
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= _MAX_ZERO_INDEX:
        raise InvalidArgumentError(
            f"zero index must be an integer in [1, {_MAX_ZERO_INDEX}], got {k!r}"
        )
    x = (int(k) - 0.25) * math.pi
    for _ in range(50):
        step = bessel_j0(x) / -bessel_j1(x)
        x -= step
        if abs(step) < 1e-15 * x:
            break
    return x


def digamma_int(m):
    """Digamma function at a positive integer, ``-gamma_E + sum_{j<m} 1/j``."""
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise InvalidArgumentError(f"digamma_int needs a positive integer, got {m!r}")
    return -EULER_GAMMA + math.fsum(1.0 / j for j in range(1, int(m)))
