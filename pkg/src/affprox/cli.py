"""Command-line front end.

Exit codes: 0 success, 2 invalid or non-surjective instance, 3 parse
error, 4 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import approx, envelope
from .errors import EmptyFiberError, InternalInconsistencyError
from .generate import random_instance
from .geometry import AffineFunctional, to_point
from .instance import (
    InstanceError,
    InstanceParseError,
    dumps,
    format_rational,
    functional_to_dict,
    parse_instance,
    parse_rational,
    serialize_instance,
    solution_report,
)
from .oracle import grid_oracle

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_VERIFY = 4


def _vec(v):
    return [format_rational(a) for a in v]


def _parse_vector(text: str, what: str) -> tuple:
    parts = [t for t in text.replace(",", " ").split() if t]
    if not parts:
        raise InstanceParseError(f"{what}: empty vector")
    return tuple(parse_rational(t, f"{what}[{k}]") for k, t in enumerate(parts))


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def cmd_solve(args) -> tuple:
    inst = _load(args.file)
    t0 = time.perf_counter()
    result = approx.best_approximation(inst.C, inst.phi, inst.f)
    ok = approx.verify_solution(inst.C, inst.phi, inst.f, result)
    report = solution_report(result, ok, time.perf_counter() - t0)
    return report, EXIT_OK if ok else EXIT_VERIFY


def cmd_gap(args) -> tuple:
    inst = _load(args.file)
    g = envelope.gap_constant(inst.C, inst.phi, inst.f)
    report = {
        "c": format_rational(g.c),
        "gap_witness": {"x": _vec(g.x), "x_prime": _vec(g.x_prime), "y": _vec(g.y)},
    }
    return report, EXIT_OK


def cmd_envelope(args) -> tuple:
    inst = _load(args.file)
    y = _parse_vector(args.at, "--at")
    if len(y) != inst.dim_D:
        raise InstanceError(f"--at: expected {inst.dim_D} coordinates, got {len(y)}")
    lo = envelope.lower_envelope(inst.C, inst.phi, inst.f, y)
    hi = envelope.upper_envelope(inst.C, inst.phi, inst.f, y)
    report = {
        "y": _vec(y),
        "lower": {"value": format_rational(lo.value), "witness": _vec(lo.witness)},
        "upper": {"value": format_rational(hi.value), "witness": _vec(hi.witness)},
        "oscillation": format_rational(hi.value - lo.value),
    }
    return report, EXIT_OK


def cmd_check(args) -> tuple:
    inst = _load(args.file)
    coeffs_text, const_text = args.h
    coeffs = _parse_vector(coeffs_text, "--h coeffs")
    if len(coeffs) != inst.dim_D:
        raise InstanceError(f"--h: expected {inst.dim_D} coefficients, got {len(coeffs)}")
    h = AffineFunctional(coeffs, parse_rational(const_text, "--h constant"))
    norm = approx.norm_of_difference(inst.C, inst.phi, inst.f, h)
    c = envelope.gap_constant(inst.C, inst.phi, inst.f).c
    report = {
        "h": functional_to_dict(h),
        "norm": format_rational(norm),
        "lower_bound": format_rational(c / 2),
        "bound_holds": norm >= c / 2,
        "optimal": norm == c / 2,
    }
    return report, EXIT_OK if norm >= c / 2 else EXIT_VERIFY


def cmd_gen(args) -> tuple:
    try:
        inst = random_instance(args.seed, args.dim_c, args.dim_d, args.vertices)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    return serialize_instance(inst), EXIT_OK


def cmd_oracle(args) -> tuple:
    inst = _load(args.file)
    try:
        res = grid_oracle(inst.C, inst.phi, inst.f, args.depth)
    except ValueError as exc:
        raise InstanceError(str(exc)) from exc
    report = {
        "depth": args.depth,
        "upper_bound": format_rational(res.value),
        "approx": float(res.value),
        "anchors": [_vec(a) for a in res.anchors],
        "anchor_values": _vec(res.anchor_values),
    }
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affprox",
        description="Exact best approximation of affine functionals through affine maps of polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, with_file=True):
        p = sub.add_parser(name, help=help_)
        if with_file:
            p.add_argument("file", help="instance JSON file")
        p.add_argument("--output", "-o", help="also write the report to this path")
        p.set_defaults(func=func)
        return p

    add("solve", cmd_solve, "compute d, c and an optimal h0, then verify")
    add("gap", cmd_gap, "compute the gap constant c with a witness pair")
    p = add("envelope", cmd_envelope, "lower/upper envelope and oscillation at a point of D")
    p.add_argument("--at", required=True, help="point of D, e.g. '1/2' or '1/2,3'")
    p = add("check", cmd_check, "norm of f - h o phi for a candidate h, against c/2")
    p.add_argument("--h", nargs=2, required=True, metavar=("COEFFS", "CONST"),
                   help="coefficients (comma separated) and constant of h")
    p = add("gen", cmd_gen, "write a seeded random instance", with_file=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dim-c", type=int, required=True)
    p.add_argument("--dim-d", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p = add("oracle", cmd_oracle, "brute-force grid upper bound on d (dim_D <= 2)")
    p.add_argument("--depth", type=int, default=5)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = args.func(args)
    except InstanceParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InstanceError, EmptyFiberError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalInconsistencyError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    text = payload if isinstance(payload, str) else dumps(payload)
    sys.stdout.write(text)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
