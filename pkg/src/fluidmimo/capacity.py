"""Monte-Carlo ergodic capacity and the closed-form capacity expressions.

SNR convention: every function takes the per-stream SNR
``gamma = P / (N sigma^2)``; ``SnrSpec.from_db`` reads decibels as
``10 log10(gamma)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import kronecker_channel
from .correlation import build_correlation, log_det2, matrix_sqrt
from .errors import InvalidArgumentError, UnsupportedConfigurationError
from .special import digamma_int

__all__ = [
    "SnrSpec",
    "CapacityEstimate",
    "as_gamma",
    "instantaneous_mi",
    "mi_with_fixed_side",
    "ergodic_capacity",
    "iid_capacity",
    "wishart_constant",
    "high_snr_capacity",
    "low_snr_capacity",
    "capacity_loss",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SnrSpec:
    """Per-stream SNR ``gamma = P / (N sigma^2)`` (linear, > 0)."""

    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidArgumentError(f"gamma must be positive and finite, got {self.gamma}")
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def from_db(cls, db):
        return cls(10.0 ** (db / 10.0))

    @property
    def db(self):
        return 10.0 * math.log10(self.gamma)


def as_gamma(snr):
    if isinstance(snr, SnrSpec):
        return snr.gamma
    return SnrSpec(snr).gamma


@dataclass(frozen=True)
class CapacityEstimate:
    mean_bps_hz: float
    mc_std_error: float
    sample_count: int

    @classmethod
    def from_values(cls, values):
        values = np.asarray(values, dtype=float)
        S = values.size
        se = float(np.std(values, ddof=1) / math.sqrt(S)) if S > 1 else 0.0
        return cls(float(np.mean(values)), se, S)


def _hermitian_logdet2(K):
    L = np.linalg.cholesky(K)
    diag = np.real(np.diagonal(L, axis1=-2, axis2=-1))
    return 2.0 * np.sum(np.log(diag), axis=-1) / LN2


def instantaneous_mi(H, gamma):
    """``log2 det(I + gamma H H^H)`` for one matrix or a batch ``(..., M, N)``.

    The Gram matrix is formed on the smaller side (Sylvester's identity) and
    factored by Cholesky.
    """
    gamma = as_gamma(gamma)
    H = np.asarray(H)
    M, N = H.shape[-2:]
    Hh = np.conj(np.swapaxes(H, -1, -2))
    gram = H @ Hh if M <= N else Hh @ H
    K = np.eye(min(M, N)) + gamma * gram
    out = _hermitian_logdet2(K)
    return float(out) if np.ndim(out) == 0 else out


def mi_with_fixed_side(F, R, gamma):
    """Per-sample ``log2 det(I + gamma F R F^H)``.

    With ``F_s = sqrt(R_R) G_s`` and ``R = R_T`` this is the mutual
    information of the Kronecker channel without taking the square root of
    the candidate correlation; the receive side uses
    ``F_s = (G_s sqrt(R_T))^H`` and ``R = R_R``.
    """
    F = np.asarray(F)
    K = F @ np.asarray(R) @ np.conj(np.swapaxes(F, -1, -2))
    K = np.eye(F.shape[-2]) + as_gamma(gamma) * K
    return _hermitian_logdet2(K)


def _correlation_entries(p):
    return build_correlation(p).entries


def _check_dims(samples, N, M):
    if samples.shape != (M, N):
        raise InvalidArgumentError(
            f"sample shape {samples.shape} does not match (M, N) = ({M}, {N})"
        )


def _capacity_from_roots(sqrtRR, sqrtRT, samples, gamma):
    H = kronecker_channel(sqrtRR, sqrtRT, samples.samples)
    return CapacityEstimate.from_values(instantaneous_mi(H, gamma))


def ergodic_capacity(t, r, snr, samples):
    """Monte-Carlo ergodic capacity at TX positions `t`, RX positions `r`.

    Returns
    -------
    CapacityEstimate
        Mean of ``instantaneous_mi`` over the sample set and its standard
        error ``std / sqrt(S)``.
    """
    sqrtRT = matrix_sqrt(build_correlation(t))
    sqrtRR = matrix_sqrt(build_correlation(r))
    _check_dims(samples, sqrtRT.shape[0], sqrtRR.shape[0])
    return _capacity_from_roots(sqrtRR, sqrtRT, samples, as_gamma(snr))


def iid_capacity(N, M, snr, samples):
    _check_dims(samples, N, M)
    return _capacity_from_roots(np.eye(M), np.eye(N), samples, as_gamma(snr))


def wishart_constant(N):
    """``(1/ln 2) sum_{m=1}^N psi(m)``: the mean of ``log2 det(G G^H)`` for
    square ``N x N`` ``G`` with i.i.d. ``CN(0, 1)`` entries."""
    return math.fsum(digamma_int(m) for m in range(1, N + 1)) / LN2


def high_snr_capacity(t, r, snr):
    """High-SNR approximation ``N log2 gamma + log2 det R_T + log2 det R_R
    + wishart_constant(N)``; only defined for ``N == M``."""
    RT = build_correlation(t)
    RR = build_correlation(r)
    N, M = RT.size, RR.size
    if N != M:
        raise UnsupportedConfigurationError(
            f"high-SNR approximation needs N == M, got N={N}, M={M}"
        )
    return N * math.log2(as_gamma(snr)) + log_det2(RT) + log_det2(RR) + wishart_constant(N)


def low_snr_capacity(N, M, snr):
    return N * M * as_gamma(snr) / LN2


def capacity_loss(t, r):
    """High-SNR loss against the i.i.d. channel, ``-log2 det R_T - log2 det R_R``."""
    return -log_det2(build_correlation(t)) - log_det2(build_correlation(r))
