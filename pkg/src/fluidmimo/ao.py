"""Alternating optimization of TX and RX positions.

Both backends alternate a TX half-step (RX fixed) and an RX half-step
(TX fixed).  The PSO backend maximizes the Monte-Carlo capacity on a
sample set shared by both half-steps of an outer iteration; the SCA backend
maximizes ``log2 det R_T + log2 det R_R``, which does not depend on SNR.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .capacity import SnrSpec, as_gamma, ergodic_capacity, mi_with_fixed_side
from .channel import derive_seed, sample_gaussian_set
from .correlation import build_correlation, correlation_entries, log_det2, matrix_sqrt
from .errors import InvalidArgumentError
from .feasibility import ApertureSpec, sorted_uniform_random_init, uniform_init
from .pso import SwarmConfig, pso_solve
from .sca import ScaConfig, pga_solve

__all__ = [
    "AoConfig",
    "AoRecord",
    "OptimizationTrace",
    "capacity_fitness",
    "ao_optimize",
    "evaluate_final",
]

# key tags for derived seeds
_TAG_OPT_SAMPLES, _TAG_EVAL_SAMPLES, _TAG_SWARM, _TAG_INIT = range(4)


@dataclass(frozen=True)
class AoConfig:
    """Outer-loop settings.

    ``refresh_samples`` draws a new optimization sample set every outer
    iteration (PSO only); otherwise one set is reused throughout.
    ``init`` is ``"uniform"`` or ``"random"`` (seeded by ``master_seed``).
    """

    max_outer: int = 12
    tolerance: float = 1e-3
    solver: str = "pso"
    snr: SnrSpec = SnrSpec(1000.0)
    sample_count: int = 200
    eval_sample_count: int = 1500
    master_seed: int = 0
    swarm: SwarmConfig = SwarmConfig()
    sca: ScaConfig = ScaConfig()
    refresh_samples: bool = True
    track_heldout: bool = True
    init: str = "uniform"

    def __post_init__(self):
        if self.max_outer < 1:
            raise InvalidArgumentError("max_outer must be >= 1")
        if not self.tolerance > 0:
            raise InvalidArgumentError("tolerance must be positive")
        if self.solver not in ("pso", "sca"):
            raise InvalidArgumentError(f"solver must be 'pso' or 'sca', got {self.solver!r}")
        if self.sample_count < 1 or self.eval_sample_count < 1:
            raise InvalidArgumentError("sample counts must be >= 1")
        if self.init not in ("uniform", "random"):
            raise InvalidArgumentError(f"init must be 'uniform' or 'random', got {self.init!r}")
        if not isinstance(self.snr, SnrSpec):
            object.__setattr__(self, "snr", SnrSpec(self.snr))


@dataclass
class AoRecord:
    """State after outer iteration ``k`` (``k = 0`` is the initial point).

    ``objective`` is solver-native: the capacity on the iteration's shared
    samples (PSO) or ``log2 det R_T + log2 det R_R`` (SCA).  For PSO,
    ``objective_start`` and ``objective_tx`` are the values at the start of
    the iteration and after the TX half-step on the same samples.
    """

    k: int
    t: object
    r: object
    objective: float
    det_RT: float
    det_RR: float
    objective_start: float = math.nan
    objective_tx: float = math.nan
    heldout: float = math.nan


@dataclass
class OptimizationTrace:
    solver: str
    records: list = field(default_factory=list)
    converged: bool = False
    kernel_evaluations: int = 0

    @property
    def t(self):
        return self.records[-1].t

    @property
    def r(self):
        return self.records[-1].r

    @property
    def outer_iterations(self):
        return len(self.records) - 1

    @property
    def objectives(self):
        return [rec.objective for rec in self.records]

    @property
    def heldout(self):
        return [rec.heldout for rec in self.records]


class _Counter:
    def __init__(self):
        self.count = 0


def capacity_fitness(fixed, samples, gamma, side, counter=None):
    """Fitness for one half-step: MC capacity as a function of the free
    side's positions, with the other side fixed at `fixed`.

    ``side="TX"`` optimizes transmit positions (`fixed` are RX positions);
    ``side="RX"`` the reverse.  Each call adds ``len(samples)`` to
    ``counter.count``.
    """
    G = samples.samples
    root = matrix_sqrt(build_correlation(fixed))
    if side == "TX":
        F = root @ G
    elif side == "RX":
        F = np.conj(np.swapaxes(G @ root, -1, -2))
    else:
        raise InvalidArgumentError(f"side must be 'TX' or 'RX', got {side!r}")
    F = np.ascontiguousarray(F)

    def fitness(p):
        if counter is not None:
            counter.count += F.shape[0]
        return float(np.mean(mi_with_fixed_side(F, correlation_entries(p), gamma)))

    return fitness


def _det(p):
    return 2.0 ** log_det2(build_correlation(p))


def evaluate_final(t, r, snr, S_eval, seed):
    """Capacity at `t`, `r` on a fresh sample set of size `S_eval`."""
    samples = sample_gaussian_set(len(r), len(t), S_eval, seed)
    return ergodic_capacity(t, r, snr, samples)


def _initial(spec, cfg, side):
    if cfg.init == "random":
        return sorted_uniform_random_init(spec, [cfg.master_seed, _TAG_INIT, side])
    return uniform_init(spec)


def ao_optimize(tx_spec, rx_spec, cfg, *, fixed_rx=None):
    """Alternating optimization of TX and RX positions.

    Parameters
    ----------
    tx_spec, rx_spec : ApertureSpec
    cfg : AoConfig
    fixed_rx : PositionVector, optional
        Pin the receive positions and run TX half-steps only.

    Returns
    -------
    OptimizationTrace
        One record per outer iteration plus the initial point.  The loop
        stops when the stopping objective (held-out capacity for PSO,
        ``log2 det`` sum for SCA) changes by at most ``cfg.tolerance``.
    """
    for spec in (tx_spec, rx_spec):
        if not isinstance(spec, ApertureSpec):
            raise InvalidArgumentError("tx_spec and rx_spec must be ApertureSpec instances")
    N, M = tx_spec.count, rx_spec.count
    if fixed_rx is not None and len(fixed_rx) != M:
        raise InvalidArgumentError("fixed_rx does not match rx_spec.count")
    gamma = as_gamma(cfg.snr)
    counter = _Counter()
    heldout_on = cfg.solver == "pso" or cfg.track_heldout
    eval_set = None
    if heldout_on:
        eval_set = sample_gaussian_set(
            M, N, cfg.eval_sample_count, derive_seed(cfg.master_seed, _TAG_EVAL_SAMPLES)
        )

    def heldout(t, r):
        if eval_set is None:
            return math.nan
        return ergodic_capacity(t, r, cfg.snr, eval_set).mean_bps_hz

    def opt_samples(k):
        key = k if cfg.refresh_samples else 0
        seed = derive_seed(cfg.master_seed, _TAG_OPT_SAMPLES, key)
        return sample_gaussian_set(M, N, cfg.sample_count, seed)

    t = _initial(tx_spec, cfg, 0)
    r = fixed_rx if fixed_rx is not None else _initial(rx_spec, cfg, 1)
    trace = OptimizationTrace(cfg.solver)

    if cfg.solver == "sca":
        objective = log_det2(build_correlation(t)) + log_det2(build_correlation(r))
    else:
        objective = ergodic_capacity(t, r, cfg.snr, opt_samples(1)).mean_bps_hz
    trace.records.append(AoRecord(0, t, r, objective, _det(t), _det(r), heldout=heldout(t, r)))

    for k in range(1, cfg.max_outer + 1):
        prev = trace.records[-1]
        if cfg.solver == "sca":
            tx = pga_solve(t, tx_spec, cfg.sca)
            counter.count += tx.evaluations
            t = tx.position
            f_t = tx.trace[-1]
            if fixed_rx is None:
                rx = pga_solve(r, rx_spec, cfg.sca)
                counter.count += rx.evaluations
                r = rx.position
                f_r = rx.trace[-1]
            else:
                f_r = log_det2(build_correlation(r))
            record = AoRecord(
                k, t, r, f_t + f_r, _det(t), _det(r),
                objective_start=prev.objective,
                objective_tx=f_t + log_det2(build_correlation(prev.r)),
            )
            stop_value, prev_stop = record.objective, prev.objective
        else:
            samples = opt_samples(k)
            fit_tx = capacity_fitness(r, samples, gamma, "TX", counter)
            swarm_tx = replace(cfg.swarm, seed=derive_seed(cfg.master_seed, _TAG_SWARM, k, 0))
            start = capacity_fitness(r, samples, gamma, "TX")(t)
            res_tx = pso_solve(fit_tx, tx_spec, swarm_tx, warm_start=t)
            t = res_tx.position
            objective = res_tx.fitness
            if fixed_rx is None:
                fit_rx = capacity_fitness(t, samples, gamma, "RX", counter)
                swarm_rx = replace(
                    cfg.swarm, seed=derive_seed(cfg.master_seed, _TAG_SWARM, k, 1)
                )
                res_rx = pso_solve(fit_rx, rx_spec, swarm_rx, warm_start=r)
                r = res_rx.position
                objective = res_rx.fitness
            record = AoRecord(
                k, t, r, objective, _det(t), _det(r),
                objective_start=start, objective_tx=res_tx.fitness,
            )
            stop_value, prev_stop = None, prev.heldout
        record.heldout = heldout(t, r)
        if stop_value is None:
            stop_value = record.heldout
        trace.records.append(record)
        if abs(stop_value - prev_stop) <= cfg.tolerance:
            trace.converged = True
            break

    trace.kernel_evaluations = counter.count
    return trace
