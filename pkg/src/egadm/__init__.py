"""Extragradient-based alternating-direction solvers for two-block convex
programs ``min f(x) + g(y) s.t. A x + B y = b`` where f has a cheap
structured prox and g is smooth with a known gradient Lipschitz bound."""

from .linalg import (
    NotPositiveDefiniteError,
    SpdFactorization,
    SpectralNormError,
    spd_factorize,
    spd_solve,
    spectral_norm_sq,
)
from .operators import AffineProjector, MetricH, shrink, solve_l1_subproblem
from .problem import (
    Coupling,
    ProxBlock,
    SmoothBlock,
    TwoBlockProblem,
    augmented_lagrangian,
    kkt_lipschitz_bound,
    kkt_map,
    lagrangian,
)
from .solver import (
    DivergenceError,
    IterateState,
    SolveReport,
    SolverConfig,
    VariantKind,
    ergodic_averages,
    ergodic_checkpoints,
    extragradient_certificate,
    gap_surrogate,
    initial_state,
    resolve_gamma,
    solve,
    step,
)

__all__ = [
    "AffineProjector",
    "Coupling",
    "DivergenceError",
    "IterateState",
    "MetricH",
    "NotPositiveDefiniteError",
    "ProxBlock",
    "SmoothBlock",
    "SolveReport",
    "SolverConfig",
    "SpdFactorization",
    "SpectralNormError",
    "TwoBlockProblem",
    "VariantKind",
    "augmented_lagrangian",
    "ergodic_averages",
    "ergodic_checkpoints",
    "extragradient_certificate",
    "gap_surrogate",
    "initial_state",
    "kkt_lipschitz_bound",
    "kkt_map",
    "lagrangian",
    "resolve_gamma",
    "shrink",
    "solve",
    "solve_l1_subproblem",
    "spd_factorize",
    "spd_solve",
    "spectral_norm_sq",
    "step",
]

__version__ = "0.1.0"
