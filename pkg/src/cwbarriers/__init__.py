"""Barriers for rectangular matrix multiplication via upper support functionals."""
from .barriers import (
    BarrierQuery,
    BarrierResult,
    MixedFactor,
    MixedSequence,
    SearchConfig,
    alpha_consistency_check,
    barrier_alpha,
    barrier_curve,
    barrier_mixed,
    barrier_omega,
    barrier_omega_at_theta,
    omega_from_alpha,
)
from .entropy import (
    EntropyReport,
    SolverError,
    SupportDistribution,
    Theta,
    brute_force_max,
    marginals,
    maximize_entropy,
    objective,
    objective_gradient,
)
from .functionals import (
    FunctionalValue,
    quasi_value,
    zeta_matmul_closed,
    zeta_min_over_presentations,
    zeta_upper,
)
from .symmetry import (
    OrbitPartition,
    SupportAction,
    axis_swap_symmetric,
    cw_standard_action,
    orbits,
)
from .tensors import (
    Tensor,
    TensorSupport,
    builtin_tensor,
    direct_sum,
    kronecker,
    make_cw_big,
    make_cw_small,
    make_diagonal,
    make_matmul,
    parse_tensor,
    serialize_tensor,
)

__version__ = "0.1.0"
