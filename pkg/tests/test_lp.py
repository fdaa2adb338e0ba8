import random
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affprox.errors import MalformedProgramError
from affprox.lp import (
    Infeasible,
    LinearProgram,
    Optimal,
    Unbounded,
    solve_lp,
    trace,
    verify_certificate,
)

import lp_recipes

EXAMPLES = [
    LinearProgram([1], [([1], ">=", 3)]),
    LinearProgram([0], [([1], "<=", 0), ([1], ">=", 1)]),
    LinearProgram([1, 1], [], sense="max", lower=[0, 0], upper=[1, 1]),
]


def test_min_with_lower_row():
    out = solve_lp(EXAMPLES[0])
    assert isinstance(out, Optimal)
    assert out.x == (3,) and out.value == 3


def test_contradictory_rows_give_farkas():
    out = solve_lp(EXAMPLES[1])
    assert isinstance(out, Infeasible)
    # the two rows aggregate to 0 >= positive
    y = out.farkas
    assert y[0] < 0 < y[1] and y[0] + y[1] == 0


def test_box_maximum():
    out = solve_lp(EXAMPLES[2])
    assert isinstance(out, Optimal) and out.value == 2


@pytest.mark.parametrize("lp", EXAMPLES)
def test_examples_verify(lp):
    assert verify_certificate(lp, solve_lp(lp))


def test_perturbed_optimum_fails_verification():
    lp = EXAMPLES[0]
    out = solve_lp(lp)
    bad = replace(out, x=(out.x[0] + F(1, 1000),))
    assert not verify_certificate(lp, bad)
    bad = replace(out, x=(out.x[0] - F(1, 1000),))
    assert not verify_certificate(lp, bad)


def test_tampered_certificates_fail():
    out = solve_lp(EXAMPLES[1])
    assert not verify_certificate(EXAMPLES[1], replace(out, farkas=(F(0), F(0))))
    lp = LinearProgram([1], [], lower=[None], upper=[5])
    ray = solve_lp(lp)
    assert isinstance(ray, Unbounded)
    assert verify_certificate(lp, ray)
    assert not verify_certificate(lp, replace(ray, ray=(F(1),)))
    # an outcome of the wrong kind never verifies
    assert not verify_certificate(EXAMPLES[0], Infeasible((F(1),), (F(0),), (F(0),)))


def test_malformed_programs():
    with pytest.raises(MalformedProgramError):
        LinearProgram([])
    with pytest.raises(MalformedProgramError):
        LinearProgram([1, 2], [([1], "<=", 0)])
    with pytest.raises(MalformedProgramError):
        LinearProgram([1], [([1], "<", 0)])


def test_empty_bound_interval_is_infeasible():
    lp = LinearProgram([1], lower=[2], upper=[1])
    out = solve_lp(lp)
    assert isinstance(out, Infeasible) and verify_certificate(lp, out)


def test_degenerate_program_terminates():
    # classic cycling example for Dantzig's rule; Bland's rule must terminate
    lp = LinearProgram(
        [F(-3, 4), 150, F(-1, 50), 6],
        [
            ([F(1, 4), -60, F(-1, 25), 9], "<=", 0),
            ([F(1, 2), -90, F(-1, 50), 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1),
        ],
        lower=[0, 0, 0, 0],
    )
    out = solve_lp(lp)
    assert isinstance(out, Optimal)
    assert out.value == F(-1, 20)
    assert verify_certificate(lp, out)


def test_trace_records_solves():
    with trace() as log:
        for lp in EXAMPLES:
            solve_lp(lp)
    assert [p for p, _ in log] == EXAMPLES
    solve_lp(EXAMPLES[0])
    assert len(log) == 3


@pytest.mark.parametrize(
    "recipe, kind, seed",
    [
        (lp_recipes.feasible_bounded, Optimal, 11),
        (lp_recipes.infeasible, Infeasible, 12),
        (lp_recipes.unbounded, Unbounded, 13),
    ],
)
def test_recipes_classified_with_valid_certificates(recipe, kind, seed):
    rng = random.Random(seed)
    for _ in range(40):
        lp = recipe(rng)
        out = solve_lp(lp)
        assert isinstance(out, kind), (lp, out)
        assert verify_certificate(lp, out)
        assert solve_lp(lp) == out


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_two_variable_optimum_matches_vertex_enumeration(seed):
    rng = random.Random(seed)
    lp = lp_recipes.feasible_bounded(rng)
    lp = LinearProgram(
        lp.objective[:2] + (0,) * max(0, 2 - lp.n_vars),
        [(c.row[:2] + (0,) * max(0, 2 - lp.n_vars), c.relation, c.rhs) for c in lp.constraints
         if lp.n_vars <= 2],
        sense=lp.sense,
        lower=(lp.lower + (-3, -3))[:2],
        upper=(lp.upper + (3, 3))[:2],
    )
    out = solve_lp(lp)
    expected = lp_recipes.brute_force_2d(lp)
    if expected is None:
        assert isinstance(out, Infeasible)
    else:
        assert isinstance(out, Optimal) and out.value == expected
    assert verify_certificate(lp, out)
