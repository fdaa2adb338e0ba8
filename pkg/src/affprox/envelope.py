"""Fiber envelopes of an affine functional under an affine map.

For ``phi: C -> D`` and ``f`` affine on ``C``, the lower envelope at ``y``
is the minimum of ``f`` over the fiber ``phi^-1(y)``, the upper envelope is
the maximum, and their difference is the oscillation of ``f`` on the
fiber.  The gap constant is the largest oscillation over all of ``D``.

Each query is one LP over convex multipliers of ``C``'s generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionError, EmptyFiberError, InternalInconsistencyError
from .geometry import (
    AffineFunctional,
    AffineMap,
    Point,
    Polytope,
    combine,
    eval_functional,
    eval_map,
    to_point,
)
from .lp import LinearProgram, Optimal, solve_lp


@dataclass(frozen=True)
class EnvelopeValue:
    value: Fraction
    witness: Point
    multipliers: tuple


@dataclass(frozen=True)
class GapCertificate:
    """``f(x) - f(x_prime) = c`` with ``phi(x) = phi(x_prime) = y``.

    ``x_multipliers`` / ``x_prime_multipliers`` express the two points as
    convex combinations of ``C``'s generators, so membership in ``C`` can be
    re-checked without solving anything.
    """

    c: Fraction
    x: Point
    x_prime: Point
    y: Point
    x_multipliers: Optional[tuple] = None
    x_prime_multipliers: Optional[tuple] = None


def _check_instance(C: Polytope, phi: AffineMap, f: AffineFunctional) -> None:
    if phi.domain_dim != C.dim:
        raise DimensionError(f"map expects dimension {phi.domain_dim}, C has {C.dim}")
    if f.dim != C.dim:
        raise DimensionError(f"functional expects dimension {f.dim}, C has {C.dim}")


def _fiber_extreme(C, phi, f, y, sense) -> EnvelopeValue:
    _check_instance(C, phi, f)
    y = to_point(y)
    if len(y) != phi.codomain_dim:
        raise DimensionError(f"query point has dimension {len(y)}, D has {phi.codomain_dim}")
    gens = C.generators
    n = len(gens)
    images = [eval_map(phi, v) for v in gens]
    values = [eval_functional(f, v) for v in gens]
    constraints = [
        (tuple(img[k] for img in images), "=", y[k]) for k in range(phi.codomain_dim)
    ]
    constraints.append(((1,) * n, "=", 1))
    outcome = solve_lp(LinearProgram(values, constraints, sense=sense, lower=(0,) * n))
    if not isinstance(outcome, Optimal):
        # bounded because the multipliers live in a simplex; so this is infeasibility
        raise EmptyFiberError(f"no point of C maps to {tuple(str(v) for v in y)}")
    lam = outcome.x
    return EnvelopeValue(outcome.value, combine(lam, gens), lam)


def lower_envelope(C: Polytope, phi: AffineMap, f: AffineFunctional, y) -> EnvelopeValue:
    """Minimum of ``f`` over the fiber of ``y``, with an attaining point."""
    return _fiber_extreme(C, phi, f, y, "min")


def upper_envelope(C: Polytope, phi: AffineMap, f: AffineFunctional, y) -> EnvelopeValue:
    """Maximum of ``f`` over the fiber of ``y``, with an attaining point."""
    return _fiber_extreme(C, phi, f, y, "max")


def fiber_oscillation(C: Polytope, phi: AffineMap, f: AffineFunctional, y) -> Fraction:
    return upper_envelope(C, phi, f, y).value - lower_envelope(C, phi, f, y).value


def gap_constant(C: Polytope, phi: AffineMap, f: AffineFunctional) -> GapCertificate:
    """Largest fiber oscillation, as one coupled LP over pairs of points of C.

    Maximises ``f(x) - f(x')`` over ``x = sum lam_i v_i``, ``x' = sum mu_i v_i``
    (both convex combinations) subject to ``phi(x) = phi(x')``.  This equals
    the supremum over ``y`` of the oscillation because every pair in a common
    fiber is feasible and vice versa.
    """
    _check_instance(C, phi, f)
    gens = C.generators
    n = len(gens)
    images = [eval_map(phi, v) for v in gens]
    values = [eval_functional(f, v) for v in gens]
    zeros = (0,) * n
    ones = (1,) * n
    constraints = [
        (tuple(img[k] for img in images) + tuple(-img[k] for img in images), "=", 0)
        for k in range(phi.codomain_dim)
    ]
    constraints.append((ones + zeros, "=", 1))
    constraints.append((zeros + ones, "=", 1))
    objective = tuple(values) + tuple(-v for v in values)
    outcome = solve_lp(LinearProgram(objective, constraints, sense="max", lower=(0,) * (2 * n)))
    if not isinstance(outcome, Optimal):
        raise InternalInconsistencyError(f"gap LP must be feasible and bounded, got {outcome!r}")
    lam, mu = outcome.x[:n], outcome.x[n:]
    x, x_prime = combine(lam, gens), combine(mu, gens)
    return GapCertificate(outcome.value, x, x_prime, eval_map(phi, x), lam, mu)
