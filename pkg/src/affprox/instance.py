"""JSON instance files and solution reports.

Numbers are read as JSON integers or strings ``"p/q"`` / ``"p"`` and always
written as canonical strings.  JSON floats are rejected outright.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionError
from .geometry import AffineFunctional, AffineMap, Polytope, check_surjective, image_polytope

_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")


class InstanceParseError(ValueError):
    """Text that is not valid JSON, or a number that is not an exact rational."""

    exit_code = 3


class InstanceError(ValueError):
    """Well-formed numbers arranged into an invalid instance."""

    exit_code = 2


def parse_rational(token, where: str = "value") -> Fraction:
    if isinstance(token, bool) or isinstance(token, float):
        raise InstanceParseError(f"{where}: {token!r} is not an exact rational")
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, str):
        m = _RATIONAL.fullmatch(token)
        if m:
            num, den = m.group(1), m.group(2)
            if den is not None and int(den) == 0:
                raise InstanceParseError(f"{where}: zero denominator in {token!r}")
            return Fraction(int(num), int(den) if den is not None else 1)
    raise InstanceParseError(f"{where}: malformed rational {token!r}")


def format_rational(value) -> str:
    """Canonical ``"p/q"``, or ``"p"`` for integers."""
    return str(Fraction(value))


def _vector(raw, where: str, dim: Optional[int] = None) -> tuple:
    if not isinstance(raw, list):
        raise InstanceError(f"{where}: expected a list")
    vec = tuple(parse_rational(t, f"{where}[{k}]") for k, t in enumerate(raw))
    if dim is not None and len(vec) != dim:
        raise InstanceError(f"{where}: expected length {dim}, got {len(vec)}")
    return vec


def _vectors(raw, where: str, dim: int) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise InstanceError(f"{where}: expected a nonempty list of vectors")
    return tuple(_vector(v, f"{where}[{i}]", dim) for i, v in enumerate(raw))


def _positive_int(raw, where: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 1:
        raise InstanceError(f"{where}: expected a positive integer, got {raw!r}")
    return raw


@dataclass(frozen=True)
class Instance:
    C: Polytope
    phi: AffineMap
    f: AffineFunctional
    D: Polytope
    D_explicit: bool = False

    @property
    def dim_C(self) -> int:
        return self.C.dim

    @property
    def dim_D(self) -> int:
        return self.phi.codomain_dim


def _require(obj: dict, key: str):
    if key not in obj:
        raise InstanceError(f"{key}: missing field")
    return obj[key]


def instance_from_dict(data, check: bool = True) -> Instance:
    """Validate a decoded instance.  With ``check``, explicit D must be the image."""
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    dim_c = _positive_int(_require(data, "dim_C"), "dim_C")
    dim_d = _positive_int(_require(data, "dim_D"), "dim_D")
    C = Polytope(_vectors(_require(data, "C_vertices"), "C_vertices", dim_c))
    raw_map = _require(data, "map")
    if not isinstance(raw_map, dict):
        raise InstanceError("map: expected an object with matrix and offset")
    matrix = _require(raw_map, "matrix")
    if not isinstance(matrix, list) or len(matrix) != dim_d:
        raise InstanceError(f"map.matrix: expected {dim_d} rows")
    rows = tuple(_vector(r, f"map.matrix[{i}]", dim_c) for i, r in enumerate(matrix))
    offset = _vector(_require(raw_map, "offset"), "map.offset", dim_d)
    phi = AffineMap(rows, offset)
    raw_f = _require(data, "f")
    if not isinstance(raw_f, dict):
        raise InstanceError("f: expected an object with coeffs and constant")
    f = AffineFunctional(
        _vector(_require(raw_f, "coeffs"), "f.coeffs", dim_c),
        parse_rational(_require(raw_f, "constant"), "f.constant"),
    )
    if data.get("D_vertices") is None:
        return Instance(C, phi, f, image_polytope(phi, C), False)
    D = Polytope(_vectors(data["D_vertices"], "D_vertices", dim_d))
    if check:
        result = check_surjective(phi, C, D)
        if not result:
            raise InstanceError(f"D_vertices: map is not surjective: {result.describe()}")
    return Instance(C, phi, f, D, True)


def parse_instance(text: str, check: bool = True) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"invalid JSON: {exc}") from exc
    try:
        return instance_from_dict(data, check=check)
    except DimensionError as exc:
        raise InstanceError(str(exc)) from exc


def _vec_out(v) -> list:
    return [format_rational(a) for a in v]


def instance_to_dict(inst: Instance) -> dict:
    out = {
        "dim_C": inst.dim_C,
        "dim_D": inst.dim_D,
        "C_vertices": [_vec_out(v) for v in inst.C.generators],
        "map": {
            "matrix": [_vec_out(r) for r in inst.phi.matrix],
            "offset": _vec_out(inst.phi.offset),
        },
    }
    if inst.D_explicit:
        out["D_vertices"] = [_vec_out(v) for v in inst.D.generators]
    out["f"] = {"coeffs": _vec_out(inst.f.coeffs), "constant": format_rational(inst.f.constant)}
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def serialize_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def functional_to_dict(h: AffineFunctional) -> dict:
    return {"coeffs": _vec_out(h.coeffs), "constant": format_rational(h.constant)}


def solution_report(result, verified: bool, seconds: float) -> dict:
    w = result.gap_witness
    return {
        "status": "optimal" if verified else "verification_failed",
        "d": format_rational(result.d),
        "c": format_rational(result.c),
        "h0": functional_to_dict(result.h0),
        "gap_witness": {"x": _vec_out(w.x), "x_prime": _vec_out(w.x_prime), "y": _vec_out(w.y)},
        "residuals": [
            {"generator": _vec_out(v), "residual": format_rational(r)} for v, r in result.residuals
        ],
        "timing": {"seconds": round(seconds, 6)},
    }
