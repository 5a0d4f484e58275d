"""Antenna position optimization for fluid MIMO links under Bessel (Jakes)
spatial correlation."""

from .ao import AoConfig, OptimizationTrace, ao_optimize, evaluate_final
from .capacity import (
    CapacityEstimate,
    SnrSpec,
    capacity_loss,
    ergodic_capacity,
    high_snr_capacity,
    iid_capacity,
    instantaneous_mi,
    low_snr_capacity,
)
from .channel import (
    ChannelSampleSet,
    empirical_correlation,
    kronecker_channel,
    physical_channel,
    sample_gaussian_set,
)
from .correlation import (
    CorrelationMatrix,
    PositionVector,
    build_correlation,
    log_det2,
    matrix_sqrt,
    spectrum,
)
from .errors import (
    InvalidArgumentError,
    InvariantViolationError,
    SingularityError,
    UnsupportedConfigurationError,
)
from .feasibility import ApertureSpec, is_feasible, project, sorted_uniform_random_init, uniform_init
from .pso import SwarmConfig, pso_solve
from .sca import ScaConfig, logdet_gradient, pga_solve
from .special import bessel_j0, bessel_j1, digamma_int, j0_zero

__version__ = "0.1.0"
