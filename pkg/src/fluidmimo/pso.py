"""Particle swarm solver for one side's position subproblem."""

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import keyed_rng
from .errors import InvalidArgumentError
from .feasibility import project, sorted_uniform_random_init

__all__ = ["SwarmConfig", "Particle", "PsoResult", "inertia_weight", "pso_solve"]


@dataclass(frozen=True)
class SwarmConfig:
    swarm_size: int = 20
    iterations: int = 60
    w_max: float = 0.9
    w_min: float = 0.4
    c1: float = 1.5
    c2: float = 1.5
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 1:
            raise InvalidArgumentError("swarm_size must be >= 1")
        if self.iterations < 0:
            raise InvalidArgumentError("iterations must be >= 0")
        if not self.w_max >= self.w_min >= 0:
            raise InvalidArgumentError("need w_max >= w_min >= 0")
        if self.c1 < 0 or self.c2 < 0:
            raise InvalidArgumentError("learning factors must be nonnegative")


@dataclass
class Particle:
    position: object
    velocity: np.ndarray
    best_position: object
    best_fitness: float


@dataclass
class PsoResult:
    """Outcome of :func:`pso_solve`.

    ``history`` holds the global-best fitness after initialization and
    after every iteration; ``evaluations`` counts fitness calls.
    """

    position: object
    fitness: float
    history: list = field(default_factory=list)
    evaluations: int = 0


def inertia_weight(cfg, iteration):
    return cfg.w_max - (cfg.w_max - cfg.w_min) * iteration / cfg.iterations


def _score(fitness, position):
    value = float(fitness(position))
    return value if math.isfinite(value) else -math.inf


def pso_solve(fitness, spec, cfg, warm_start=None):
    """Maximize `fitness` over the feasible set of `spec`.

    Parameters
    ----------
    fitness : callable
        Maps a :class:`~fluidmimo.correlation.PositionVector` to a real
        value; non-finite values rank below everything else.
    spec : ApertureSpec
    cfg : SwarmConfig
    warm_start : PositionVector, optional
        Replaces the initial position of particle 0, so the returned fitness
        is never below ``fitness(warm_start)``.

    Returns
    -------
    PsoResult
    """
    swarm = []
    for z in range(cfg.swarm_size):
        if z == 0 and warm_start is not None:
            pos = project(warm_start.coords, spec)
        else:
            pos = sorted_uniform_random_init(spec, [cfg.seed, 0, z])
        f = _score(fitness, pos)
        swarm.append(Particle(pos, np.zeros(spec.count), pos, f))
    evaluations = cfg.swarm_size

    best = max(range(cfg.swarm_size), key=lambda z: (swarm[z].best_fitness, -z))
    g_pos, g_fit = swarm[best].best_position, swarm[best].best_fitness
    history = [g_fit]

    for it in range(cfg.iterations):
        w = inertia_weight(cfg, it)
        eps = keyed_rng(cfg.seed, 1, it).uniform(size=(cfg.swarm_size, 2, spec.count))
        for z, particle in enumerate(swarm):
            x = particle.position.coords
            particle.velocity = (
                w * particle.velocity
                + cfg.c1 * eps[z, 0] * (particle.best_position.coords - x)
                + cfg.c2 * eps[z, 1] * (g_pos.coords - x)
            )
            particle.position = project(x + particle.velocity, spec)
            f = _score(fitness, particle.position)
            if f > particle.best_fitness:
                particle.best_position, particle.best_fitness = particle.position, f
        evaluations += cfg.swarm_size
        for particle in swarm:
            if particle.best_fitness > g_fit:
                g_pos, g_fit = particle.best_position, particle.best_fitness
        history.append(g_fit)

    return PsoResult(g_pos, g_fit, history, evaluations)
