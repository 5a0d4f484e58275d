"""Projected gradient ascent on ``f(t) = log2 det R(t)``.

Each inner step maximizes the first-order model of ``f`` around the
current iterate through a projected gradient step, with backtracking to
guarantee ascent.
"""

import math
from dataclasses import dataclass

import numpy as np

from .correlation import (
    SINGULARITY_FLOOR,
    PositionVector,
    correlation_entries,
    inverse_and_log_det2,
    log_det2,
    build_correlation,
)
from .errors import InvalidArgumentError, SingularityError
from .feasibility import project
from .special import bessel_j1

__all__ = ["ScaConfig", "logdet_objective", "logdet_gradient", "pga_solve", "PgaResult"]


@dataclass(frozen=True)
class ScaConfig:
    inner_iterations: int = 50
    eta0: float = 0.02
    shrink: float = 0.5
    max_backtracks: int = 20

    def __post_init__(self):
        if self.inner_iterations < 1:
            raise InvalidArgumentError("inner_iterations must be >= 1")
        if not self.eta0 > 0:
            raise InvalidArgumentError("eta0 must be positive")
        if not 0 < self.shrink < 1:
            raise InvalidArgumentError("shrink must lie in (0, 1)")
        if self.max_backtracks < 0:
            raise InvalidArgumentError("max_backtracks must be >= 0")


def logdet_objective(p):
    return log_det2(build_correlation(p))


def _coords(p):
    return p.coords if isinstance(p, PositionVector) else np.ravel(np.asarray(p, float))


def logdet_gradient(p):
    """Gradient of ``log2 det R(p)`` with respect to the coordinates.

    Component ``n`` is
    ``-(4 pi / ln 2) sum_{j != n} [R^-1]_nj J1(2 pi |p_n - p_j|) sgn(p_n - p_j)``
    (lengths in wavelengths; ``sgn(0) = 0``).

    Raises
    ------
    SingularityError
        If the smallest eigenvalue of ``R(p)`` is below the floor.
    """
    coords = _coords(p)
    R = correlation_entries(coords)
    inv, _, min_eig = inverse_and_log_det2(R)
    if min_eig < SINGULARITY_FLOOR:
        raise SingularityError(
            f"correlation matrix is numerically singular (min eigenvalue {min_eig:.3e})",
            min_eig,
        )
    diff = coords[:, None] - coords[None, :]
    dR = bessel_j1(2.0 * np.pi * np.abs(diff)) * np.sign(diff)
    return -(4.0 * np.pi / math.log(2.0)) * np.sum(inv * dR, axis=1)


@dataclass
class PgaResult:
    position: PositionVector
    trace: list
    evaluations: int

    def __iter__(self):
        return iter((self.position, self.trace))


def pga_solve(p0, spec, cfg):
    """Projected gradient ascent with backtracking from feasible `p0`.

    Every inner iteration restarts the step at ``cfg.eta0`` and halves it
    (factor ``cfg.shrink``) until the projected step strictly increases the
    objective; if no step within ``cfg.max_backtracks`` succeeds, the loop
    stops.  ``trace`` lists the objective at `p0` followed by every accepted
    value.  ``evaluations`` counts log-determinant factorizations (objective
    and gradient alike).

    Returns
    -------
    PgaResult
        Unpacks as ``(position, trace)``.
    """
    current = p0 if isinstance(p0, PositionVector) else spec.positions(p0)
    f_cur = logdet_objective(current)
    trace = [f_cur]
    evaluations = 1
    for _ in range(cfg.inner_iterations):
        grad = logdet_gradient(current)
        evaluations += 1
        if not np.any(np.abs(grad) > 1e-13):
            break
        eta = cfg.eta0
        accepted = False
        for _ in range(cfg.max_backtracks + 1):
            candidate = project(current.coords + eta * grad, spec)
            f_new = logdet_objective(candidate)
            evaluations += 1
            if f_new > f_cur:
                current, f_cur = candidate, f_new
                trace.append(f_cur)
                accepted = True
                break
            eta *= cfg.shrink
        if not accepted:
            break
    return PgaResult(current, trace, evaluations)
