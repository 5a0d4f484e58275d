"""Position-dependent spatial correlation matrices.

All lengths are in wavelengths, so the correlation between two elements a
distance ``d`` apart is ``J0(2 pi d)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvariantViolationError
from .special import bessel_j0

__all__ = [
    "PositionVector",
    "CorrelationMatrix",
    "SINGULARITY_FLOOR",
    "SPACING_SLACK",
    "build_correlation",
    "log_det2",
    "log_det2_flagged",
    "matrix_sqrt",
    "spectrum",
    "inverse_and_log_det2",
]

SINGULARITY_FLOOR = 1e-12
SPACING_SLACK = 1e-12


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PositionVector:
    """Ascending antenna coordinates inside one aperture.

    Parameters
    ----------
    coords : array_like
        Coordinates in wavelengths.  Must be strictly ascending, lie in
        ``[0, aperture]`` and keep consecutive gaps of at least ``d_min``.
    aperture : float
        Aperture length in wavelengths.
    d_min : float
        Minimum spacing in wavelengths.
    """

    coords: np.ndarray
    aperture: float
    d_min: float = 0.0

    def __post_init__(self):
        coords = _frozen(np.ravel(self.coords))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "aperture", float(self.aperture))
        object.__setattr__(self, "d_min", float(self.d_min))
        if not self.aperture > 0:
            raise InvariantViolationError("aperture must be positive")
        if self.d_min < 0:
            raise InvariantViolationError("d_min must be nonnegative")
        if coords.size == 0 or not np.all(np.isfinite(coords)):
            raise InvariantViolationError("coords must be a non-empty finite vector")
        if coords[0] < -SPACING_SLACK or coords[-1] > self.aperture + SPACING_SLACK:
            raise InvariantViolationError(
                f"coords {coords} leave the aperture [0, {self.aperture}]"
            )
        gaps = np.diff(coords)
        if np.any(gaps <= 0):
            raise InvariantViolationError(f"coords {coords} are not strictly ascending")
        if np.any(gaps < self.d_min - SPACING_SLACK):
            raise InvariantViolationError(
                f"coords {coords} violate the minimum spacing {self.d_min}"
            )

    def __len__(self):
        return self.coords.size

    @property
    def count(self):
        return self.coords.size

    def shifted(self, offset):
        return PositionVector(self.coords + offset, self.aperture, self.d_min)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Real symmetric unit-diagonal correlation matrix.

    ``source_positions`` is kept for provenance when the matrix was built
    from a :class:`PositionVector`; it is ``None`` for raw matrices.
    """

    entries: np.ndarray
    source_positions: PositionVector = field(default=None, compare=False)

    def __post_init__(self):
        entries = _frozen(self.entries)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvariantViolationError("correlation matrix must be square")
        if not np.all(np.isfinite(entries)):
            raise InvariantViolationError("correlation matrix has non-finite entries")
        if np.max(np.abs(entries - entries.T), initial=0.0) > 1e-14:
            raise InvariantViolationError("correlation matrix is not symmetric")
        if np.max(np.abs(np.diag(entries) - 1.0), initial=0.0) > 1e-14:
            raise InvariantViolationError("correlation matrix must have unit diagonal")

    @property
    def size(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def _coords_of(p):
    if isinstance(p, PositionVector):
        return p.coords
    coords = np.ravel(np.asarray(p, dtype=float))
    if coords.size == 0 or not np.all(np.isfinite(coords)):
        raise InvalidArgumentError("coordinates must be a non-empty finite vector")
    return coords


def correlation_entries(coords):
    """Raw ``J0(2 pi |c_i - c_j|)`` matrix as a writable ndarray."""
    coords = _coords_of(coords)
    lag = np.abs(coords[:, None] - coords[None, :])
    out = bessel_j0(2.0 * np.pi * lag)
    np.fill_diagonal(out, 1.0)
    return out


def build_correlation(p):
    """Build the correlation matrix of a set of antenna positions.

    Accepts a :class:`PositionVector` or raw coordinates (the latter lets
    callers probe coincident or unordered placements).
    """
    source = p if isinstance(p, PositionVector) else None
    return CorrelationMatrix(correlation_entries(p), source)


def _as_correlation(R):
    if isinstance(R, CorrelationMatrix):
        return R
    return CorrelationMatrix(np.asarray(R, dtype=float))


def log_det2_flagged(R):
    """Base-2 log determinant and a flag telling whether the floor was hit.

    Eigenvalues below ``SINGULARITY_FLOOR`` are clamped to the floor, so the
    value stays finite and keeps ordering candidates during a search.
    """
    R = _as_correlation(R)
    eig = np.linalg.eigvalsh(R.entries)
    clamped = bool(eig[0] < SINGULARITY_FLOOR)
    eig = np.maximum(eig, SINGULARITY_FLOOR)
    return float(np.sum(np.log2(eig))), clamped


def log_det2(R):
    """Base-2 log determinant of a correlation matrix (floored, see above)."""
    return log_det2_flagged(R)[0]


def inverse_and_log_det2(R):
    """Inverse, base-2 log determinant and smallest eigenvalue from one
    eigendecomposition."""
    entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, float)
    eig, vec = np.linalg.eigh(entries)
    inv = (vec / np.maximum(eig, SINGULARITY_FLOOR)) @ vec.T
    logdet = float(np.sum(np.log2(np.maximum(eig, SINGULARITY_FLOOR))))
    return inv, logdet, float(eig[0])


def matrix_sqrt(R):
    """Symmetric PSD square root via eigendecomposition, negative
    eigenvalues clamped to zero."""
    entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, float)
    eig, vec = np.linalg.eigh(entries)
    root = (vec * np.sqrt(np.maximum(eig, 0.0))) @ vec.T
    return 0.5 * (root + root.T)


def spectrum(R):
    """Eigenvalues in descending order and the condition number.

    The condition number divides by ``max(mu_min, SINGULARITY_FLOOR)``, so a
    rank-deficient matrix reports a large finite sentinel.
    """
    R = _as_correlation(R)
    eig = np.linalg.eigvalsh(R.entries)[::-1]
    return eig, float(eig[0] / max(eig[-1], SINGULARITY_FLOOR))
