"""Exact best approximation of affine functionals through surjective affine maps of polytopes."""

from .approx import (
    BestApproximation,
    best_approximation,
    chebyshev_distance,
    norm_of_difference,
    sandwich_affine,
    verify_solution,
)
from .envelope import (
    EnvelopeValue,
    GapCertificate,
    fiber_oscillation,
    gap_constant,
    lower_envelope,
    upper_envelope,
)
from .errors import (
    DimensionError,
    EmptyFiberError,
    InternalInconsistencyError,
    MalformedProgramError,
    NotSurjectiveError,
)
from .geometry import (
    AffineFunctional,
    AffineMap,
    Polytope,
    check_surjective,
    eval_functional,
    eval_map,
    image_polytope,
    membership,
    polytope_equal,
)
from .lp import Infeasible, LinearProgram, Optimal, Unbounded, solve_lp, verify_certificate

__version__ = "0.1.0"
