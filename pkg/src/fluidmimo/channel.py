"""Seeded Gaussian sample sets, Kronecker channels and the physical
multipath model used to check the Bessel correlation law."""

import warnings
from dataclasses import dataclass

import numpy as np

from .correlation import PositionVector
from .errors import DegenerateSampleWarning, InvalidArgumentError

__all__ = [
    "ChannelSampleSet",
    "PathParameters",
    "derive_seed",
    "keyed_rng",
    "sample_gaussian_set",
    "kronecker_channel",
    "draw_paths",
    "physical_channel",
    "empirical_correlation",
]

# samples are generated in blocks, each from its own stream keyed by
# (seed, block index), so any block can be produced independently
_BLOCK = 256


def derive_seed(*keys):
    """Collapse a tuple of nonnegative integer keys into one 64-bit seed."""
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def keyed_rng(seed, *keys):
    """Generator seeded from ``(seed, *keys)``; all entries must be
    nonnegative integers."""
    return np.random.default_rng([int(seed), *(int(k) for k in keys)])


@dataclass(frozen=True)
class ChannelSampleSet:
    """Batch of i.i.d. ``CN(0, gain)`` matrices shared across candidates.

    ``samples`` has shape ``(S, M, N)``.
    """

    samples: np.ndarray
    seed: int
    gain: float = 1.0

    def __len__(self):
        return self.samples.shape[0]

    @property
    def shape(self):
        return self.samples.shape[1:]


def _positive_int(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def sample_gaussian_set(M, N, S, seed, gain=1.0):
    """Draw ``S`` matrices of shape ``(M, N)`` with i.i.d. ``CN(0, gain)``
    entries; the batch is a pure function of ``(M, N, S, seed, gain)``."""
    M, N, S = (_positive_int(n, v) for n, v in (("M", M), ("N", N), ("S", S)))
    if not gain > 0:
        raise InvalidArgumentError("gain must be positive")
    out = np.empty((S, M, N), dtype=complex)
    scale = np.sqrt(gain / 2.0)
    for block, start in enumerate(range(0, S, _BLOCK)):
        stop = min(start + _BLOCK, S)
        rng = keyed_rng(seed, M, N, block)
        z = rng.standard_normal((_BLOCK, M, N, 2))[: stop - start]
        out[start:stop] = scale * (z[..., 0] + 1j * z[..., 1])
    out.setflags(write=False)
    return ChannelSampleSet(out, int(seed), float(gain))


def kronecker_channel(sqrtRR, sqrtRT, G):
    """``H = sqrtRR @ G @ sqrtRT``; `G` may carry leading batch axes."""
    sqrtRR = np.asarray(sqrtRR)
    sqrtRT = np.asarray(sqrtRT)
    G = np.asarray(G)
    if G.ndim < 2:
        raise InvalidArgumentError("G must be at least two-dimensional")
    M, N = G.shape[-2:]
    if sqrtRR.shape != (M, M) or sqrtRT.shape != (N, N):
        raise InvalidArgumentError(
            f"shape mismatch: sqrtRR {sqrtRR.shape}, G {G.shape}, sqrtRT {sqrtRT.shape}"
        )
    return sqrtRR @ G @ sqrtRT


@dataclass(frozen=True)
class PathParameters:
    """Angles of departure/arrival (uniform on ``[0, pi]``) and ``CN(0, 1)``
    gains for ``L`` scattering paths."""

    aod: np.ndarray
    aoa: np.ndarray
    gains: np.ndarray
    seed: int = 0

    @property
    def L(self):
        return self.gains.size


def draw_paths(L, seed):
    L = _positive_int("L", L)
    rng = np.random.default_rng(seed)
    aod = rng.uniform(0.0, np.pi, L)
    aoa = rng.uniform(0.0, np.pi, L)
    gains = (rng.standard_normal(L) + 1j * rng.standard_normal(L)) / np.sqrt(2.0)
    return PathParameters(aod, aoa, gains, seed)


def _coords(p):
    return p.coords if isinstance(p, PositionVector) else np.ravel(np.asarray(p, float))


def physical_channel(t, r, paths, gain=1.0):
    """Multipath channel ``sqrt(gain/L) sum_l g_l b(aoa_l, r) a(aod_l, t)^H``
    with unit-modulus field responses ``exp(j 2 pi x cos(angle))``."""
    if paths.L == 0:
        raise InvalidArgumentError("at least one path is required")
    a = np.exp(1j * 2.0 * np.pi * np.outer(_coords(t), np.cos(paths.aod)))  # N x L
    b = np.exp(1j * 2.0 * np.pi * np.outer(_coords(r), np.cos(paths.aoa)))  # M x L
    return np.sqrt(gain / paths.L) * (b * paths.gains) @ a.conj().T


def empirical_correlation(channel_samples, side):
    """Normalized second-moment correlation on one side of the link.

    Parameters
    ----------
    channel_samples : sequence of (M, N) complex arrays or (S, M, N) array
    side : {"TX", "RX"}
        ``"TX"`` correlates columns (transmit elements) averaged over receive
        elements and samples; ``"RX"`` correlates rows.

    Returns
    -------
    ndarray
        Real part of the normalized correlation, unit diagonal.
    """
    H = np.asarray(channel_samples)
    if H.size == 0:
        raise InvalidArgumentError("no channel samples given")
    if H.ndim == 2:
        H = H[None]
    side = side.upper()
    if side == "TX":
        cov = np.einsum("sji,sjk->ik", H, H.conj()) / (H.shape[0] * H.shape[1])
    elif side == "RX":
        cov = np.einsum("sij,skj->ik", H, H.conj()) / (H.shape[0] * H.shape[2])
    else:
        raise InvalidArgumentError(f"side must be 'TX' or 'RX', got {side!r}")
    if H.shape[0] < 2 or np.all(H == H[0]):
        warnings.warn(
            "correlation estimated from a single distinct sample", DegenerateSampleWarning
        )
    power = np.real(np.diag(cov))
    dead = power <= 0
    if np.any(dead):
        warnings.warn("zero-power element in channel samples", DegenerateSampleWarning)
        power = np.where(dead, 1.0, power)
    norm = np.sqrt(power)
    out = np.real(cov) / np.outer(norm, norm)
    out[dead, :] = 0.0
    out[:, dead] = 0.0
    np.fill_diagonal(out, 1.0)
    return out
