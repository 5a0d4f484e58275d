"""Feasible-set predicates, initializers and the feasibility restoration
operator shared by both optimizers."""

from dataclasses import dataclass

import numpy as np

from .correlation import SPACING_SLACK, PositionVector
from .errors import InvalidArgumentError

__all__ = [
    "ApertureSpec",
    "is_feasible",
    "project",
    "uniform_init",
    "sorted_uniform_random_init",
]


@dataclass(frozen=True)
class ApertureSpec:
    """One side of the link: aperture length, minimum spacing, element count.

    Construction fails unless ``length >= (count - 1) * d_min``.
    """

    length: float
    d_min: float
    count: int

    def __post_init__(self):
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise InvalidArgumentError(f"count must be a positive integer, got {self.count!r}")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "d_min", float(self.d_min))
        if not self.length > 0 or not np.isfinite(self.length):
            raise InvalidArgumentError("aperture length must be positive and finite")
        if not self.d_min >= 0:
            raise InvalidArgumentError("d_min must be nonnegative")
        if self.length < (self.count - 1) * self.d_min - SPACING_SLACK:
            raise InvalidArgumentError(
                f"infeasible aperture: {self.count} elements at spacing {self.d_min} "
                f"need {(self.count - 1) * self.d_min} > {self.length}"
            )

    def positions(self, coords):
        return PositionVector(coords, self.length, self.d_min)


def is_feasible(coords, spec):
    coords = np.sort(np.ravel(np.asarray(coords, dtype=float)))
    if coords.size != spec.count or not np.all(np.isfinite(coords)):
        return False
    if coords[0] < -SPACING_SLACK or coords[-1] > spec.length + SPACING_SLACK:
        return False
    gaps = np.diff(coords)
    return bool(np.all(gaps > 0) and np.all(gaps >= spec.d_min - SPACING_SLACK))


def _restore(raw, length, d_min):
    x = np.sort(np.clip(raw, 0.0, length))
    n = x.size
    for i in range(1, n):
        # same difference form as the feasibility check, so rounding agrees
        if x[i] - x[i - 1] < d_min - SPACING_SLACK:
            x[i] = x[i - 1] + d_min
    if x[-1] > length:
        x[-1] = length
        for i in range(n - 2, -1, -1):
            x[i] = max(min(x[i], x[i + 1] - d_min), 0.0)
    return x


def project(raw, spec):
    """Map an arbitrary vector into the feasible set.

    Clip to ``[0, length]``, sort, then push elements apart with a forward
    pass; if the last element overshoots, pin it to ``length`` and run a
    backward pass.  This is a cheap feasibility restoration rather than the
    Euclidean projection; it leaves feasible (sorted) inputs untouched and
    is idempotent.

    Raises
    ------
    InvalidArgumentError
        If `raw` does not have ``spec.count`` finite entries.
    """
    raw = np.ravel(np.asarray(raw, dtype=float))
    if raw.size != spec.count:
        raise InvalidArgumentError(f"expected {spec.count} coordinates, got {raw.size}")
    if not np.all(np.isfinite(raw)):
        raise InvalidArgumentError("cannot project non-finite coordinates")
    x = _restore(raw, spec.length, spec.d_min)
    if spec.d_min == 0.0:
        # coincident elements are not representable; nudge them apart by one ulp
        for i in range(1, x.size):
            if x[i] <= x[i - 1]:
                x[i] = np.nextafter(x[i - 1], np.inf)
    return spec.positions(x)


def uniform_init(spec):
    if spec.count == 1:
        return spec.positions([spec.length / 2.0])
    return spec.positions(np.linspace(0.0, spec.length, spec.count))


def sorted_uniform_random_init(spec, seed):
    """Sorted uniform draws on ``[0, length]``, restored by :func:`project`
    when the draw violates the spacing constraint."""
    rng = np.random.default_rng(seed)
    draw = np.sort(rng.uniform(0.0, spec.length, spec.count))
    if is_feasible(draw, spec):
        return spec.positions(draw)
    return project(draw, spec)
