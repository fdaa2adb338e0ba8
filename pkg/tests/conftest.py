import random
from fractions import Fraction

import pytest

from affprox.geometry import AffineFunctional, AffineMap, Polytope, combine, eval_map
from affprox.generate import random_instance

F = Fraction


def square():
    return Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])


def projection():
    return AffineMap([(1, 0)], [0])


def triangle():
    return Polytope([(0, 0), (2, 0), (0, 2)])


def coordinate_sum():
    return AffineMap([(1, 1)], [0])


GOLDEN = {
    # name: (C, phi, f, exact d, exact c)
    "square-projection": (square(), projection(), AffineFunctional((0, 1)), F(1, 2), F(1)),
    "identity-segment": (
        Polytope([(0,), (1,)]), AffineMap.identity(1), AffineFunctional((3,), -1), F(0), F(0),
    ),
    "triangle": (triangle(), coordinate_sum(), AffineFunctional((1, 0)), F(1), F(2)),
}


@pytest.fixture(params=sorted(GOLDEN))
def golden(request):
    return GOLDEN[request.param]


def instance_params(seed):
    """dim_C <= 4, dim_D <= 2, at most 12 generators, spread over seeds."""
    dim_c = 1 + (seed - 1) % 4
    dim_d = 1 + (seed // 4) % min(2, dim_c)
    n_vertices = dim_c + 1 + seed % (12 - dim_c)
    return dim_c, dim_d, n_vertices


def seeded_instance(seed):
    return random_instance(seed, *instance_params(seed))


def random_point_of(P, rng, max_weight=4):
    """A random convex combination of P's generators with small denominators."""
    weights = [rng.randint(0, max_weight) for _ in P.generators]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return combine([F(w, total) for w in weights], P.generators)


def random_affine(dim, rng, lo=-5, hi=5):
    return AffineFunctional(
        tuple(F(rng.randint(lo * 4, hi * 4), 4) for _ in range(dim)),
        F(rng.randint(lo * 4, hi * 4), 4),
    )


def fiber_extremes_1d(C, phi, f, y):
    """Extremes of f on the fiber over y when D is one-dimensional.

    Every extreme point of a hyperplane section of conv(V) lies on a segment
    between two generators, so scanning all generator pairs is exact.
    """
    (y,) = y
    vals = []
    gens = C.generators
    imgs = [eval_map(phi, v)[0] for v in gens]
    for i, u in enumerate(gens):
        if imgs[i] == y:
            vals.append(f(u))
        for j in range(i + 1, len(gens)):
            a, b = imgs[i], imgs[j]
            if a != b and min(a, b) <= y <= max(a, b):
                t = (y - a) / (b - a)
                pt = tuple(p + t * (q - p) for p, q in zip(u, gens[j]))
                vals.append(f(pt))
    return min(vals), max(vals)


def gap_constant_1d(C, phi, f):
    """Brute-force gap constant for one-dimensional D.

    The oscillation is concave and piecewise linear with breaks only at
    images of generators, so its maximum sits at one of them.
    """
    best = F(0)
    for v in C.generators:
        lo, hi = fiber_extremes_1d(C, phi, f, eval_map(phi, v))
        best = max(best, hi - lo)
    return best


@pytest.fixture
def rng():
    return random.Random(20261018)
