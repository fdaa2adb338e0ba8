"""Brute-force grid oracle for the best-approximation distance.

Deliberately unrelated to the LP path: an affine ``h`` on ``D`` is described
by its values at affinely independent anchor points of ``D`` rather than by
coefficients, and the min-max residual is searched on nested grids.  The
returned value is the exact residual of a genuine affine ``h``, hence always
an upper bound on the true distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .geometry import eval_functional, eval_map

MAX_DIM_D = 2
# each refinement keeps this fraction of the box half-width around the incumbent
SHRINK = 0.2


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    anchors: tuple
    anchor_values: tuple


def _reduce(rows):
    """Row-echelon form over the rationals; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][col]
        rows[r] = [a / p for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                k = rows[i][col]
                rows[i] = [a - k * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows, pivots


def _rank(vectors) -> int:
    if not vectors:
        return 0
    return len(_reduce(vectors)[1])


def _pick_anchors(points):
    """Greedy, farthest first: well-spread anchors keep the grid well conditioned."""
    start = min(points)
    anchors = [start]
    diffs = []
    ranked = sorted(points, key=lambda p: -sum((a - b) ** 2 for a, b in zip(p, start)))
    for p in ranked:
        d = [a - b for a, b in zip(p, start)]
        if _rank(diffs + [d]) > len(diffs):
            diffs.append(d)
            anchors.append(p)
    return anchors


def _affine_coords(anchors, p):
    """Weights beta with sum beta = 1 and sum beta_j anchors_j = p."""
    q0 = anchors[0]
    k = len(anchors) - 1
    if k == 0:
        return [Fraction(1)]
    dim = len(p)
    # columns: anchors_j - q0 for j >= 1; augmented with p - q0
    aug = [[anchors[j][i] - q0[i] for j in range(1, k + 1)] + [p[i] - q0[i]] for i in range(dim)]
    rows, pivots = _reduce(aug)
    beta = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        if col == k:
            raise ValueError("point is outside the affine hull of the anchors")
        beta[col] = rows[r][k]
    return [1 - sum(beta)] + beta


def grid_oracle(C, phi, f, depth: int, points_per_axis: int = 21) -> OracleResult:
    """Upper bound on the distance, tightened by ``depth`` nested grid refinements."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if phi.codomain_dim > MAX_DIM_D:
        raise ValueError(f"grid oracle supports dim_D <= {MAX_DIM_D}, got {phi.codomain_dim}")
    images = [eval_map(phi, v) for v in C.generators]
    values = [eval_functional(f, v) for v in C.generators]
    anchors = _pick_anchors(images)
    coords = [_affine_coords(anchors, p) for p in images]

    B = np.array([[float(b) for b in row] for row in coords])
    fv = np.array([float(v) for v in values])
    lo, hi = float(min(values)) - 1.0, float(max(values)) + 1.0
    k = len(anchors)
    center = np.full(k, (lo + hi) / 2)
    half = np.full(k, (hi - lo) / 2)
    ticks = np.linspace(-1.0, 1.0, points_per_axis)
    offsets = np.array(list(product(ticks, repeat=k)))
    best = None
    for _ in range(depth + 1):
        cand = center + offsets * half
        scores = np.abs(fv[None, :] - cand @ B.T).max(axis=1)
        i = int(np.argmin(scores))
        best = cand[i]
        center = best
        half = half * SHRINK

    exact = tuple(Fraction(float(v)) for v in best)
    residual = max(abs(fv_ - sum((b * a for b, a in zip(row, exact)), Fraction(0)))
                   for fv_, row in zip(values, coords))
    return OracleResult(residual, tuple(anchors), exact)
