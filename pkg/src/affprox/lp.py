"""Exact rational linear programming with checkable certificates.

Programs are stated in general form::

    minimize (or maximize)  c . x
    subject to              a_i . x  (<= | = | >=)  b_i
                            lower_j <= x_j <= upper_j   (either side optional)

and solved by a dense two-phase simplex over :class:`fractions.Fraction`
with Bland's least-index rule.  Every outcome carries a certificate that
:func:`verify_certificate` checks using the original program data only.

Certificate conventions (for ``sense="min"``; for ``"max"`` every sign
condition flips and the stationarity equation keeps its shape):

* ``dual`` holds one multiplier ``y_i`` per constraint, ``y_i >= 0`` on
  ``>=`` rows, ``y_i <= 0`` on ``<=`` rows, free on ``=`` rows.
* ``lower_duals[j] >= 0`` may be nonzero only where ``lower_j`` is finite,
  ``upper_duals[j] <= 0`` only where ``upper_j`` is finite.
* Stationarity: ``c = sum_i y_i a_i + lower_duals + upper_duals``.
* Dual value: ``b . y + lower . lower_duals + upper . upper_duals``.

A Farkas certificate uses the same sign conventions with ``c = 0`` and a
strictly positive dual value, which no feasible point can satisfy.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .errors import MalformedProgramError

RELATIONS = ("<=", "=", ">=")
_ZERO = Fraction(0)


def _scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact or boolean scalar {value!r}")
    return Fraction(value)


def _opt_scalar(value) -> Optional[Fraction]:
    return None if value is None else _scalar(value)


@dataclass(frozen=True)
class Constraint:
    row: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "row", tuple(_scalar(a) for a in self.row))
        object.__setattr__(self, "rhs", _scalar(self.rhs))
        if self.relation not in RELATIONS:
            raise MalformedProgramError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearProgram:
    """An immutable LP.  ``lower``/``upper`` default to all-``None`` (free)."""

    objective: tuple
    constraints: tuple = ()
    sense: str = "min"
    lower: Optional[tuple] = None
    upper: Optional[tuple] = None

    def __post_init__(self):
        objective = tuple(_scalar(c) for c in self.objective)
        n = len(objective)
        if n == 0:
            raise MalformedProgramError("a linear program needs at least one variable")
        if self.sense not in ("min", "max"):
            raise MalformedProgramError(f"unknown sense {self.sense!r}")
        constraints = tuple(
            c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints
        )
        for i, con in enumerate(constraints):
            if len(con.row) != n:
                raise MalformedProgramError(
                    f"constraint {i} has {len(con.row)} coefficients, expected {n}"
                )
        lower = (None,) * n if self.lower is None else tuple(map(_opt_scalar, self.lower))
        upper = (None,) * n if self.upper is None else tuple(map(_opt_scalar, self.upper))
        if len(lower) != n or len(upper) != n:
            raise MalformedProgramError("bound vectors must match the number of variables")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class Optimal:
    x: tuple
    value: Fraction
    dual: tuple
    lower_duals: tuple
    upper_duals: tuple


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple
    lower_duals: tuple
    upper_duals: tuple


@dataclass(frozen=True)
class Unbounded:
    ray: tuple
    point: tuple


LpOutcome = Union[Optimal, Infeasible, Unbounded]


# --------------------------------------------------------------------------
# tracing

_TRACE: contextvars.ContextVar = contextvars.ContextVar("affprox_lp_trace", default=None)


@contextlib.contextmanager
def trace() -> Iterator[list]:
    """Collect every ``(program, outcome)`` pair solved inside the block."""
    log: list = []
    token = _TRACE.set(log)
    try:
        yield log
    finally:
        _TRACE.reset(token)


# --------------------------------------------------------------------------
# solver


@dataclass
class _Column:
    var: int  # original variable, or -1 for slacks
    sign: int  # x_var gets sign * value of this column
    kind: str  # "lower", "upper", "free+", "free-", "slack"


@dataclass
class _StandardForm:
    """min cost . z  s.t.  rows z = rhs, z >= 0, rhs >= 0."""

    cost: list
    rows: list
    rhs: list
    flips: list  # +1/-1 applied to each row to make rhs nonnegative
    columns: list
    shifts: list  # x_j = shift_j + sum(sign * z_col)
    row_origin: list  # ("con", i) or ("bound", j)
    objective_sign: int = 1


def _standard_form(lp: LinearProgram) -> _StandardForm:
    n = lp.n_vars
    objective_sign = -1 if lp.sense == "max" else 1
    c = [objective_sign * v for v in lp.objective]

    columns: list = []
    shifts: list = []
    var_cols: list = []
    bound_rows: list = []
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if lo is not None:
            shifts.append(lo)
            var_cols.append([len(columns)])
            columns.append(_Column(j, 1, "lower"))
            if hi is not None:
                bound_rows.append((j, len(columns) - 1, hi - lo))
        elif hi is not None:
            shifts.append(hi)
            var_cols.append([len(columns)])
            columns.append(_Column(j, -1, "upper"))
        else:
            shifts.append(_ZERO)
            var_cols.append([len(columns), len(columns) + 1])
            columns.append(_Column(j, 1, "free+"))
            columns.append(_Column(j, -1, "free-"))

    n_struct = len(columns)
    raw_rows: list = []
    raw_rhs: list = []
    row_origin: list = []
    slack_specs: list = []
    for i, con in enumerate(lp.constraints):
        row = [_ZERO] * n_struct
        rhs = con.rhs
        for j, a in enumerate(con.row):
            if a:
                rhs -= a * shifts[j]
                for col in var_cols[j]:
                    row[col] += a * columns[col].sign
        raw_rows.append(row)
        raw_rhs.append(rhs)
        row_origin.append(("con", i))
        if con.relation == "<=":
            slack_specs.append((len(raw_rows) - 1, 1))
        elif con.relation == ">=":
            slack_specs.append((len(raw_rows) - 1, -1))
    for j, col, width in bound_rows:
        row = [_ZERO] * n_struct
        row[col] = Fraction(1)
        raw_rows.append(row)
        raw_rhs.append(width)
        row_origin.append(("bound", j))
        slack_specs.append((len(raw_rows) - 1, 1))

    for r, coef in slack_specs:
        for k, row in enumerate(raw_rows):
            row.append(Fraction(coef) if k == r else _ZERO)
        columns.append(_Column(-1, 0, "slack"))

    cost = [_ZERO] * len(columns)
    for j in range(n):
        for col in var_cols[j]:
            cost[col] = c[j] * columns[col].sign

    flips = []
    for k in range(len(raw_rows)):
        if raw_rhs[k] < 0:
            raw_rows[k] = [-a for a in raw_rows[k]]
            raw_rhs[k] = -raw_rhs[k]
            flips.append(-1)
        else:
            flips.append(1)
    return _StandardForm(cost, raw_rows, raw_rhs, flips, columns, shifts, row_origin, objective_sign)


class _Tableau:
    """Dense tableau with one artificial column per row kept for dual readout."""

    def __init__(self, sf: _StandardForm):
        self.m = len(sf.rows)
        self.n = len(sf.columns)
        m, n = self.m, self.n
        self.T = []
        for k in range(m):
            art = [_ZERO] * m
            art[k] = Fraction(1)
            self.T.append(list(sf.rows[k]) + art + [sf.rhs[k]])
        self.basis = [n + k for k in range(m)]
        self.width = n + m

    def pivot(self, r: int, col: int) -> None:
        T = self.T
        prow = T[r]
        p = prow[col]
        if p != 1:
            prow[:] = [a / p for a in prow]
        nz = [k for k, a in enumerate(prow) if a]
        for i, row in enumerate(T):
            if i == r:
                continue
            factor = row[col]
            if factor:
                for k in nz:
                    row[k] -= factor * prow[k]
        obj = self.obj
        factor = obj[col]
        if factor:
            for k in nz:
                obj[k] -= factor * prow[k]
        self.basis[r] = col

    def set_costs(self, cost: Sequence[Fraction]) -> None:
        """Reduced-cost row ``cost - c_B B^-1 A``; last entry is ``-c_B B^-1 b``."""
        obj = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.T[i]
                for k, a in enumerate(row):
                    if a:
                        obj[k] -= cb * a
        self.obj = obj

    def run(self, allowed: int) -> Optional[int]:
        """Bland iterations over columns ``< allowed``.

        Returns None at optimality, else the entering column of an
        unbounded direction.
        """
        while True:
            obj = self.obj
            entering = next((j for j in range(allowed) if obj[j] < 0), None)
            if entering is None:
                return None
            best = None
            for i, row in enumerate(self.T):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return entering
            self.pivot(best[1], entering)

    def values(self) -> list:
        z = [_ZERO] * self.width
        for i, b in enumerate(self.basis):
            z[b] = self.T[i][-1]
        return z


def _to_original_point(sf: _StandardForm, z: Sequence[Fraction], with_shift: bool = True) -> tuple:
    x = list(sf.shifts) if with_shift else [_ZERO] * len(sf.shifts)
    for col, spec in enumerate(sf.columns):
        if spec.var >= 0 and z[col]:
            x[spec.var] += spec.sign * z[col]
    return tuple(x)


def _read_duals(lp: LinearProgram, sf: _StandardForm, tab: _Tableau, art_cost: Fraction):
    """Map standard-form multipliers back onto original rows and bounds."""
    n_std = len(sf.columns)
    pi = [art_cost - tab.obj[n_std + k] for k in range(tab.m)]
    n = lp.n_vars
    y = [_ZERO] * len(lp.constraints)
    lower = [_ZERO] * n
    upper = [_ZERO] * n
    for k, (kind, idx) in enumerate(sf.row_origin):
        mult = pi[k] * sf.flips[k]
        if kind == "con":
            y[idx] = mult
        else:
            upper[idx] += mult
    for col, spec in enumerate(sf.columns):
        r = tab.obj[col]
        if spec.kind == "lower":
            lower[spec.var] += r
        elif spec.kind == "upper":
            upper[spec.var] -= r
    return y, lower, upper


def solve_lp(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly.  Deterministic; never cycles (Bland's rule)."""
    if not isinstance(lp, LinearProgram):
        raise MalformedProgramError("solve_lp expects a LinearProgram")
    sf = _standard_form(lp)
    tab = _Tableau(sf)
    n_std = len(sf.columns)

    # phase 1: minimise the sum of artificials
    tab.set_costs([_ZERO] * n_std + [Fraction(1)] * tab.m)
    tab.run(tab.width)
    if tab.obj[-1] != 0:
        y, lo, hi = _read_duals(lp, sf, tab, Fraction(1))
        # c = 0 in the feasibility problem, so reduced costs carry the full bound duals
        outcome: LpOutcome = Infeasible(tuple(y), tuple(lo), tuple(hi))
        _record(lp, outcome)
        return outcome

    for i in range(tab.m):
        if tab.basis[i] >= n_std:
            row = tab.T[i]
            col = next((k for k in range(n_std) if row[k] != 0), None)
            if col is not None:
                tab.pivot(i, col)

    # phase 2
    tab.set_costs(list(sf.cost) + [_ZERO] * tab.m)
    entering = tab.run(n_std)
    z = tab.values()
    point = _to_original_point(sf, z)
    if entering is not None:
        d = [_ZERO] * tab.width
        d[entering] = Fraction(1)
        for i, b in enumerate(tab.basis):
            d[b] = -tab.T[i][entering]
        ray = _to_original_point(sf, d, with_shift=False)
        outcome = Unbounded(ray, point)
    else:
        y, lo, hi = _read_duals(lp, sf, tab, _ZERO)
        s = sf.objective_sign
        value = sum((c * v for c, v in zip(lp.objective, point)), _ZERO)
        outcome = Optimal(
            point,
            value,
            tuple(s * v for v in y),
            tuple(s * v for v in lo),
            tuple(s * v for v in hi),
        )
    _record(lp, outcome)
    return outcome


def _record(lp: LinearProgram, outcome: LpOutcome) -> None:
    log = _TRACE.get()
    if log is not None:
        log.append((lp, outcome))


# --------------------------------------------------------------------------
# independent certificate checks


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), _ZERO)


def is_feasible(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.n_vars:
        return False
    for j, v in enumerate(x):
        if lp.lower[j] is not None and v < lp.lower[j]:
            return False
        if lp.upper[j] is not None and v > lp.upper[j]:
            return False
    for con in lp.constraints:
        lhs = _dot(con.row, x)
        if con.relation == "<=" and lhs > con.rhs:
            return False
        if con.relation == ">=" and lhs < con.rhs:
            return False
        if con.relation == "=" and lhs != con.rhs:
            return False
    return True


def _dual_value(lp, y, lower_duals, upper_duals, c, orient) -> Optional[Fraction]:
    """Check sign/stationarity conditions; return the dual value or None.

    ``orient`` is +1 for minimisation, -1 for maximisation; all multipliers
    are multiplied by it before applying the minimisation sign rules.
    """
    n = lp.n_vars
    if len(y) != len(lp.constraints) or len(lower_duals) != n or len(upper_duals) != n:
        return None
    for con, yi in zip(lp.constraints, y):
        s = orient * yi
        if con.relation == ">=" and s < 0:
            return None
        if con.relation == "<=" and s > 0:
            return None
    value = _dot((con.rhs for con in lp.constraints), y)
    for j in range(n):
        lo, hi = orient * lower_duals[j], orient * upper_duals[j]
        if lo:
            if lp.lower[j] is None or lo < 0:
                return None
            value += lower_duals[j] * lp.lower[j]
        if hi:
            if lp.upper[j] is None or hi > 0:
                return None
            value += upper_duals[j] * lp.upper[j]
        grad = sum((con.row[j] * yi for con, yi in zip(lp.constraints, y)), _ZERO)
        if grad + lower_duals[j] + upper_duals[j] != c[j]:
            return None
    return value


def verify_certificate(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-check ``outcome`` against ``lp`` in exact arithmetic."""
    try:
        if isinstance(outcome, Optimal):
            if not is_feasible(lp, outcome.x):
                return False
            primal = _dot(lp.objective, outcome.x)
            orient = 1 if lp.sense == "min" else -1
            dual = _dual_value(
                lp, outcome.dual, outcome.lower_duals, outcome.upper_duals, lp.objective, orient
            )
            return dual is not None and primal == outcome.value == dual
        if isinstance(outcome, Infeasible):
            zeros = (_ZERO,) * lp.n_vars
            value = _dual_value(lp, outcome.farkas, outcome.lower_duals, outcome.upper_duals, zeros, 1)
            return value is not None and value > 0
        if isinstance(outcome, Unbounded):
            if not is_feasible(lp, outcome.point) or len(outcome.ray) != lp.n_vars:
                return False
            r = outcome.ray
            for j, v in enumerate(r):
                if lp.lower[j] is not None and v < 0:
                    return False
                if lp.upper[j] is not None and v > 0:
                    return False
            for con in lp.constraints:
                lhs = _dot(con.row, r)
                if (con.relation == "<=" and lhs > 0) or (con.relation == ">=" and lhs < 0):
                    return False
                if con.relation == "=" and lhs != 0:
                    return False
            slope = _dot(lp.objective, r)
            return slope < 0 if lp.sense == "min" else slope > 0
    except (TypeError, AttributeError):
        return False
    return False
