import random
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affprox.approx import (
    best_approximation,
    chebyshev_distance,
    norm_of_difference,
    sandwich_affine,
    verify_solution,
)
from affprox.envelope import gap_constant, lower_envelope, upper_envelope
from affprox.errors import InternalInconsistencyError, NotSurjectiveError
from affprox.geometry import AffineFunctional, AffineMap, Polytope

from conftest import (
    GOLDEN,
    coordinate_sum,
    projection,
    random_affine,
    random_point_of,
    seeded_instance,
    square,
    triangle,
)

X1 = AffineFunctional((1, 0))
X2 = AffineFunctional((0, 1))


def grid_min_max(C, phi, f, a_range, b_range):
    """min over a rational grid of (a, b) of max_v |f(v) - a*phi(v) - b|, for 1-d D."""
    best = None
    for a in a_range:
        for b in b_range:
            val = max(abs(f(v) - a * phi(v)[0] - b) for v in C.generators)
            best = val if best is None else min(best, val)
    return best


def test_triangle_grid_oracle_confirms_distance():
    grid = [F(k, 4) for k in range(-12, 13)]
    assert grid_min_max(triangle(), coordinate_sum(), X1, grid, grid) == 1
    # and no grid point beats the witness lower bound c/2
    assert gap_constant(triangle(), coordinate_sum(), X1).c / 2 == 1


def test_chebyshev_examples():
    d, h = chebyshev_distance(square(), projection(), X2)
    assert d == F(1, 2)
    assert h == AffineFunctional((0,), F(1, 2))

    f = AffineFunctional((2, -1), 4)
    d, h = chebyshev_distance(square(), AffineMap.identity(2), f)
    assert d == 0 and h == f

    d, h = chebyshev_distance(triangle(), coordinate_sum(), X1)
    assert d == 1
    assert h((2,)) == 1 and -1 <= h((0,)) <= 1


def test_sandwich_examples():
    assert sandwich_affine(square(), projection(), X2, 1) == AffineFunctional((0,), F(1, 2))
    f = AffineFunctional((2, -1), 4)
    assert sandwich_affine(square(), AffineMap.identity(2), f, 0) == f
    h0 = sandwich_affine(triangle(), coordinate_sum(), X1, 2)
    assert h0((2,)) == 1 and -1 <= h0((0,)) <= 1


def test_triangle_sandwich_holds_at_sampled_points():
    C, phi = triangle(), coordinate_sum()
    h0 = sandwich_affine(C, phi, X1, 2)
    rng = random.Random(1)
    D = Polytope([(0,), (2,)])
    for _ in range(100):
        y = random_point_of(D, rng, max_weight=20)
        assert upper_envelope(C, phi, X1, y).value - 1 <= h0(y) <= lower_envelope(C, phi, X1, y).value + 1


def test_sandwich_with_too_small_gap_is_internal_error():
    with pytest.raises(InternalInconsistencyError):
        sandwich_affine(square(), projection(), X2, F(1, 2))


def test_norm_of_difference_examples():
    h0 = AffineFunctional((0,), F(1, 2))
    assert norm_of_difference(square(), projection(), X2, h0) == F(1, 2)
    assert norm_of_difference(square(), projection(), X2, AffineFunctional((0,), 0)) == 1
    half = AffineFunctional((F(1, 2),), 0)
    assert norm_of_difference(triangle(), coordinate_sum(), X1, half) == 1


def test_best_approximation_golden(golden):
    C, phi, f, d, c = golden
    res = best_approximation(C, phi, f)
    assert (res.d, res.c) == (d, c)
    assert verify_solution(C, phi, f, res)


def test_best_approximation_square_values():
    res = best_approximation(square(), projection(), X2, Polytope([(0,), (1,)]))
    assert res.h0 == AffineFunctional((0,), F(1, 2))
    assert [r for _, r in res.residuals] == [F(-1, 2), F(-1, 2), F(1, 2), F(1, 2)]


def test_identity_reproduces_f():
    f = AffineFunctional((3, F(-1, 2)), 7)
    res = best_approximation(triangle(), AffineMap.identity(2), f)
    assert res.d == res.c == 0 and res.h0 == f


def test_non_surjective_rejected():
    with pytest.raises(NotSurjectiveError) as err:
        best_approximation(square(), projection(), X2, Polytope([(0,), (2,)]))
    assert err.value.result.witness == (2,)


def test_verify_solution_rejects_tampering():
    C, phi, f = square(), projection(), X2
    res = best_approximation(C, phi, f)
    shifted = AffineFunctional(res.h0.coeffs, res.h0.constant + F(1, 1000))
    assert not verify_solution(C, phi, f, replace(res, h0=shifted))
    w = res.gap_witness
    forged = replace(w, x=(F(1, 2), 1), x_multipliers=None)
    assert not verify_solution(C, phi, f, replace(res, gap_witness=forged))
    assert not verify_solution(C, phi, f, replace(res, d=F(1), c=F(2)))


@pytest.mark.parametrize("seed", range(1, 31))
def test_theorem_on_generated_instances(seed):
    inst = seeded_instance(seed)
    C, phi, f = inst.C, inst.phi, inst.f
    res = best_approximation(C, phi, f)
    assert res.d * 2 == res.c
    assert verify_solution(C, phi, f, res)
    rng = random.Random(seed)
    for _ in range(5):
        h = random_affine(inst.dim_D, rng)
        assert norm_of_difference(C, phi, f, h) >= res.c / 2


@pytest.mark.parametrize("seed", [2, 9, 17])
def test_quotient_invariance_and_scaling(seed):
    inst = seeded_instance(seed)
    C, phi, f = inst.C, inst.phi, inst.f
    base = best_approximation(C, phi, f)
    g = random_affine(inst.dim_D, random.Random(seed))
    moved = best_approximation(C, phi, f + g.compose(phi))
    assert (moved.c, moved.d) == (base.c, base.d)
    for alpha in (2, -3, F(1, 2)):
        scaled = best_approximation(C, phi, f.scale(alpha))
        assert scaled.c == abs(alpha) * base.c and scaled.d == abs(alpha) * base.d


def test_factoring_functional_has_zero_distance():
    inst = seeded_instance(6)
    g = random_affine(inst.dim_D, random.Random(0))
    f = g.compose(inst.phi)
    res = best_approximation(inst.C, inst.phi, f)
    assert res.d == 0
    assert all(r == 0 for _, r in res.residuals)


def test_single_generator_instance():
    C = Polytope([(2, -1)])
    phi = AffineMap([(1, 0)], [0])
    f = AffineFunctional((1, 1), 3)
    res = best_approximation(C, phi, f)
    assert res.c == res.d == 0
    assert res.h0(phi((2, -1))) == f((2, -1))


small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def instances(draw):
    dim_c = draw(st.integers(1, 3))
    dim_d = draw(st.integers(1, 2))
    gens = draw(st.lists(st.tuples(*[small] * dim_c), min_size=1, max_size=6))
    matrix = draw(st.tuples(*[st.tuples(*[small] * dim_c)] * dim_d))
    offset = draw(st.tuples(*[small] * dim_d))
    f = AffineFunctional(draw(st.tuples(*[small] * dim_c)), draw(small))
    return Polytope(gens), AffineMap(matrix, offset), f


@settings(max_examples=60, deadline=None)
@given(instances(), st.tuples(small, small, small))
def test_distance_is_half_gap_on_arbitrary_instances(inst, hdata):
    C, phi, f = inst
    res = best_approximation(C, phi, f)
    assert res.d * 2 == res.c
    assert verify_solution(C, phi, f, res)
    h = AffineFunctional(hdata[: phi.codomain_dim], hdata[2])
    assert norm_of_difference(C, phi, f, h) >= res.d
