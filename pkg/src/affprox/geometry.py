"""V-represented polytopes, affine maps and affine functionals over the rationals.

Points are plain tuples of :class:`~fractions.Fraction`.  Nothing here ever
computes facets; questions about a polytope are answered with LPs over
convex multipliers of its generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import DimensionError
from .lp import Infeasible, LinearProgram, Optimal, solve_lp

Point = Tuple[Fraction, ...]
_ZERO = Fraction(0)


def to_scalar(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions; refuse floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float)):
        raise TypeError(f"refusing inexact or boolean scalar {value!r}")
    return Fraction(value)


def to_point(values) -> Point:
    return tuple(to_scalar(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), _ZERO)


def combine(weights: Sequence[Fraction], points: Sequence[Point]) -> Point:
    """The linear combination ``sum w_i p_i``."""
    dim = len(points[0])
    out = [_ZERO] * dim
    for w, p in zip(weights, points):
        if w:
            for k in range(dim):
                out[k] += w * p[k]
    return tuple(out)


@dataclass(frozen=True)
class Polytope:
    """conv(generators).  Redundant or repeated generators are allowed."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(to_point(g) for g in self.generators)
        if not gens:
            raise ValueError("a polytope needs at least one generator")
        dim = len(gens[0])
        if dim == 0:
            raise DimensionError("ambient dimension must be positive")
        for i, g in enumerate(gens):
            if len(g) != dim:
                raise DimensionError(f"generator {i} has dimension {len(g)}, expected {dim}")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def __len__(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + offset, with ``matrix`` of shape codomain_dim x domain_dim."""

    matrix: tuple
    offset: tuple

    def __post_init__(self):
        matrix = tuple(to_point(row) for row in self.matrix)
        offset = to_point(self.offset)
        if not matrix or len(matrix) != len(offset):
            raise DimensionError("matrix row count must equal the offset length (>= 1)")
        n = len(matrix[0])
        if n == 0 or any(len(row) != n for row in matrix):
            raise DimensionError("matrix rows must be nonempty and of equal length")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    @property
    def domain_dim(self) -> int:
        return len(self.matrix[0])

    @property
    def codomain_dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(
            tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)),
            (0,) * dim,
        )

    def __call__(self, x) -> Point:
        return eval_map(self, x)


@dataclass(frozen=True)
class AffineFunctional:
    """x -> coeffs . x + constant."""

    coeffs: tuple
    constant: Fraction = _ZERO

    def __post_init__(self):
        coeffs = to_point(self.coeffs)
        if not coeffs:
            raise DimensionError("an affine functional needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "constant", to_scalar(self.constant))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x) -> Fraction:
        return eval_functional(self, x)

    def __neg__(self) -> "AffineFunctional":
        return AffineFunctional(tuple(-a for a in self.coeffs), -self.constant)

    def __add__(self, other: "AffineFunctional") -> "AffineFunctional":
        if other.dim != self.dim:
            raise DimensionError("cannot add functionals on different spaces")
        return AffineFunctional(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.constant + other.constant,
        )

    def scale(self, alpha) -> "AffineFunctional":
        alpha = to_scalar(alpha)
        return AffineFunctional(tuple(alpha * a for a in self.coeffs), alpha * self.constant)

    def compose(self, phi: AffineMap) -> "AffineFunctional":
        """The functional ``self o phi`` on phi's domain."""
        if phi.codomain_dim != self.dim:
            raise DimensionError("functional and map codomain disagree")
        coeffs = tuple(
            sum((self.coeffs[i] * phi.matrix[i][j] for i in range(self.dim)), _ZERO)
            for j in range(phi.domain_dim)
        )
        return AffineFunctional(coeffs, self.constant + dot(self.coeffs, phi.offset))


def eval_map(phi: AffineMap, x) -> Point:
    x = to_point(x)
    if len(x) != phi.domain_dim:
        raise DimensionError(f"point has dimension {len(x)}, map expects {phi.domain_dim}")
    return tuple(dot(row, x) + b for row, b in zip(phi.matrix, phi.offset))


def eval_functional(f: AffineFunctional, x) -> Fraction:
    x = to_point(x)
    if len(x) != f.dim:
        raise DimensionError(f"point has dimension {len(x)}, functional expects {f.dim}")
    return dot(f.coeffs, x) + f.constant


def image_polytope(phi: AffineMap, C: Polytope) -> Polytope:
    if phi.domain_dim != C.dim:
        raise DimensionError(f"map expects dimension {phi.domain_dim}, polytope has {C.dim}")
    return Polytope(tuple(eval_map(phi, v) for v in C.generators))


@dataclass(frozen=True)
class Membership:
    """Answer to ``y in P`` with its proof.

    Inside: ``multipliers`` is a convex combination of the generators equal
    to ``y``.  Outside: ``separator`` is an affine functional that is positive
    at ``y`` and nonpositive on every generator.
    """

    inside: bool
    multipliers: Optional[tuple] = None
    separator: Optional[AffineFunctional] = None

    def __bool__(self) -> bool:
        return self.inside


def membership(P: Polytope, y) -> Membership:
    y = to_point(y)
    if len(y) != P.dim:
        raise DimensionError(f"point has dimension {len(y)}, polytope has {P.dim}")
    n = len(P)
    constraints = [(tuple(v[k] for v in P.generators), "=", y[k]) for k in range(P.dim)]
    constraints.append(((1,) * n, "=", 1))
    lp = LinearProgram((0,) * n, constraints, lower=(0,) * n)
    outcome = solve_lp(lp)
    if isinstance(outcome, Optimal):
        return Membership(True, multipliers=outcome.x)
    assert isinstance(outcome, Infeasible)
    # Farkas: u . v_i + s <= 0 for every generator, u . y + s > 0.
    u = outcome.farkas[: P.dim]
    s = outcome.farkas[P.dim]
    g = AffineFunctional(u, s)
    return Membership(False, separator=g.scale(1 / g(y)))


def polytope_equal(P: Polytope, Q: Polytope) -> bool:
    if P.dim != Q.dim:
        raise DimensionError(f"dimensions differ: {P.dim} vs {Q.dim}")
    return all(membership(Q, v) for v in P.generators) and all(
        membership(P, w) for w in Q.generators
    )


@dataclass(frozen=True)
class SurjectivityResult:
    ok: bool
    # "image_not_in_D": image generator outside D; "D_not_in_image": D generator not hit
    direction: Optional[str] = None
    index: Optional[int] = None
    witness: Optional[Point] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "map is surjective onto D"
        pt = "(" + ", ".join(str(v) for v in self.witness) + ")"
        if self.direction == "D_not_in_image":
            return f"D generator {self.index} = {pt} lies outside the image of C"
        return f"image of C generator {self.index} = {pt} lies outside D"


def check_surjective(phi: AffineMap, C: Polytope, D: Polytope) -> SurjectivityResult:
    """Does ``phi`` map conv(C) onto conv(D)?  Failure is a result, not an error."""
    image = image_polytope(phi, C)
    if image.dim != D.dim:
        raise DimensionError(f"map lands in dimension {image.dim}, D has {D.dim}")
    for i, v in enumerate(image.generators):
        if not membership(D, v):
            return SurjectivityResult(False, "image_not_in_D", i, v)
    for i, w in enumerate(D.generators):
        if not membership(image, w):
            return SurjectivityResult(False, "D_not_in_image", i, w)
    return SurjectivityResult(True)
