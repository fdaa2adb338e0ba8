"""Seeded random instances with small integer data."""

from __future__ import annotations

import random

from .geometry import AffineFunctional, AffineMap, Polytope, image_polytope
from .instance import Instance

LOW, HIGH = -5, 5


def random_instance(seed: int, dim_c: int, dim_d: int, n_vertices: int) -> Instance:
    """Generators in [-5, 5]^dim_c, integer map and functional, D = image of C."""
    if dim_c < 1 or dim_d < 1:
        raise ValueError("dimensions must be positive")
    if dim_d > dim_c:
        raise ValueError(f"dim_D ({dim_d}) may not exceed dim_C ({dim_c})")
    if n_vertices < dim_c + 1:
        raise ValueError(f"need at least dim_C + 1 = {dim_c + 1} vertices, got {n_vertices}")
    rng = random.Random(seed)

    def ints(k):
        return tuple(rng.randint(LOW, HIGH) for _ in range(k))

    C = Polytope(tuple(ints(dim_c) for _ in range(n_vertices)))
    phi = AffineMap(tuple(ints(dim_c) for _ in range(dim_d)), ints(dim_d))
    f = AffineFunctional(ints(dim_c), rng.randint(LOW, HIGH))
    return Instance(C, phi, f, image_polytope(phi, C), D_explicit=False)
