"""Best approximation of an affine functional by functionals factoring through a map.

Given ``phi: C -> D`` onto and ``f`` affine on ``C``, the distance from ``f``
to ``{h o phi : h affine on D}`` in the supremum norm over ``C`` equals half
the gap constant, and it is attained.

Every supremum over ``C`` below is taken over the generators only.  This is
exact: ``f - h o phi`` is affine in ``x``, and an affine function on
``conv(V)`` attains its max and min on ``V``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .envelope import GapCertificate, _check_instance, gap_constant
from .errors import DimensionError, InternalInconsistencyError, NotSurjectiveError
from .geometry import (
    AffineFunctional,
    AffineMap,
    Polytope,
    check_surjective,
    combine,
    eval_functional,
    eval_map,
)
from .lp import Infeasible, LinearProgram, Optimal, solve_lp


@dataclass(frozen=True)
class BestApproximation:
    h0: AffineFunctional
    d: Fraction
    c: Fraction
    gap_witness: GapCertificate
    residuals: tuple  # ((generator, f(v) - h0(phi(v))), ...)


def _data(C, phi, f):
    _check_instance(C, phi, f)
    images = [eval_map(phi, v) for v in C.generators]
    values = [eval_functional(f, v) for v in C.generators]
    return images, values


def norm_of_difference(
    C: Polytope, phi: AffineMap, f: AffineFunctional, h: AffineFunctional
) -> Fraction:
    """sup over C of ``|f - h o phi|``."""
    _check_instance(C, phi, f)
    if h.dim != phi.codomain_dim:
        raise DimensionError(f"h expects dimension {h.dim}, D has {phi.codomain_dim}")
    return max(
        abs(eval_functional(f, v) - eval_functional(h, eval_map(phi, v))) for v in C.generators
    )


def chebyshev_distance(C: Polytope, phi: AffineMap, f: AffineFunctional):
    """Return ``(d, h)`` minimising ``max_v |f(v) - h(phi(v))|``.

    Variables are the coefficients ``a`` of ``h``, its constant ``b`` and the
    level ``t``; all free except ``t >= 0``.
    """
    images, values = _data(C, phi, f)
    m = phi.codomain_dim
    constraints = []
    for img, fv in zip(images, values):
        constraints.append((img + (1, 1), ">=", fv))
        constraints.append((img + (1, -1), "<=", fv))
    objective = (0,) * (m + 1) + (1,)
    lower = (None,) * (m + 1) + (0,)
    outcome = solve_lp(LinearProgram(objective, constraints, lower=lower))
    if not isinstance(outcome, Optimal):
        raise InternalInconsistencyError(f"Chebyshev LP must have an optimum, got {outcome!r}")
    x = outcome.x
    return outcome.value, AffineFunctional(x[:m], x[m])


def sandwich_affine(
    C: Polytope, phi: AffineMap, f: AffineFunctional, c
) -> AffineFunctional:
    """An affine ``h0`` with ``f(v) - c/2 <= h0(phi(v)) <= f(v) + c/2`` on generators.

    Under surjectivity this is the same as squeezing ``h0`` between the upper
    envelope minus ``c/2`` and the lower envelope plus ``c/2`` on all of D.
    """
    images, values = _data(C, phi, f)
    half = Fraction(c) / 2
    m = phi.codomain_dim
    constraints = []
    for img, fv in zip(images, values):
        constraints.append((img + (1,), ">=", fv - half))
        constraints.append((img + (1,), "<=", fv + half))
    outcome = solve_lp(LinearProgram((0,) * (m + 1), constraints))
    if isinstance(outcome, Infeasible):
        raise InternalInconsistencyError(
            f"no affine function fits in the band of half-width {half}; wrong gap constant?"
        )
    if not isinstance(outcome, Optimal):
        raise InternalInconsistencyError(f"feasibility LP returned {outcome!r}")
    return AffineFunctional(outcome.x[:m], outcome.x[m])


def best_approximation(
    C: Polytope, phi: AffineMap, f: AffineFunctional, D: Optional[Polytope] = None
) -> BestApproximation:
    """Solve the best-approximation problem and cross-check it exactly.

    When ``D`` is given the map must send ``C`` onto it; otherwise ``D`` is
    taken to be the image of ``C``.  The sandwiched ``h0`` and the
    Chebyshev LP are computed independently and must agree.
    """
    if D is not None:
        result = check_surjective(phi, C, D)
        if not result:
            raise NotSurjectiveError(result.describe(), result)
    gap = gap_constant(C, phi, f)
    h0 = sandwich_affine(C, phi, f, gap.c)
    d, _ = chebyshev_distance(C, phi, f)
    if d * 2 != gap.c:
        raise InternalInconsistencyError(f"distance {d} is not half the gap constant {gap.c}")
    residuals = tuple(
        (v, eval_functional(f, v) - eval_functional(h0, eval_map(phi, v))) for v in C.generators
    )
    if max(abs(r) for _, r in residuals) != d:
        raise InternalInconsistencyError("sandwiched h0 does not attain the distance")
    return BestApproximation(h0, d, gap.c, gap, residuals)


def verify_solution(
    C: Polytope, phi: AffineMap, f: AffineFunctional, result: BestApproximation
) -> bool:
    """Check ``result`` by evaluation alone.

    Upper bound: the largest residual of ``h0`` equals ``d``.  Lower bound:
    the witness pair shares an image and ``f`` differs by ``c`` on it, so no
    ``h`` can do better than ``c/2``.  Finally ``d = c/2``.
    """
    try:
        norm = norm_of_difference(C, phi, f, result.h0)
        if norm != result.d or result.d * 2 != result.c:
            return False
        w = result.gap_witness
        if w.c != result.c:
            return False
        for pt, lam in ((w.x, w.x_multipliers), (w.x_prime, w.x_prime_multipliers)):
            if lam is not None:
                if len(lam) != len(C) or any(a < 0 for a in lam) or sum(lam) != 1:
                    return False
                if combine(lam, C.generators) != tuple(pt):
                    return False
        y = eval_map(phi, w.x)
        if y != eval_map(phi, w.x_prime) or y != tuple(w.y):
            return False
        return eval_functional(f, w.x) - eval_functional(f, w.x_prime) == result.c
    except (DimensionError, TypeError, ValueError):
        return False
