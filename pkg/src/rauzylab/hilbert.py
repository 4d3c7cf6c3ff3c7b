"""Hilbert projective metric on the positive cone and Birkhoff-type contraction.

Cross-ratios are kept exact (``Fraction``); only the final ``-log`` is a float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._rational import as_fraction, log_fraction


def _vec(x):
    return [as_fraction(v) for v in x]


def gamma(x, y) -> Fraction:
    """``min x_j y_i / (x_i y_j)`` over index pairs with ``x_i, y_j != 0``; equals 1 iff x ~ y."""
    x, y = _vec(x), _vec(y)
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    if any(v < 0 for v in x + y):
        raise ValueError("coordinates must be nonnegative")
    if not any(x) or not any(y):
        raise ValueError("zero vector has no projective class")
    best = None
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            r = x[j] * y[i] / (xi * yj)
            if best is None or r < best:
                best = r
    return best


def distance(x, y) -> float:
    x, y = _vec(x), _vec(y)
    if any(v <= 0 for v in x + y):
        raise ValueError("Hilbert distance needs strictly positive coordinates")
    return -log_fraction(gamma(x, y))


def _positive_matrix(L):
    L = [[as_fraction(v) for v in row] for row in np.asarray(L, dtype=object).tolist()]
    if any(v <= 0 for row in L for v in row):
        raise ValueError("matrix must have all entries > 0")
    return L


def delta(L) -> Fraction:
    """``min L_ir L_js / (L_is L_jr)``: the smallest cross-ratio of a positive matrix.

    For a fixed row pair the minimum over columns is ``min(q)/max(q)`` with
    ``q_r = L_ir / L_jr``.
    """
    L = _positive_matrix(L)
    best = Fraction(1)
    for i, j in combinations(range(len(L)), 2):
        q = [a / b for a, b in zip(L[i], L[j])]
        best = min(best, min(q) / max(q))
    return best


@dataclass(frozen=True)
class CellDiameter:
    diameter: float      # -log delta(M), the projective diameter of M(simplex)
    lower_bound: float   # largest distance between images of the simplex vertices


def cell_diameter(M) -> CellDiameter:
    M = np.asarray(M, dtype=object)
    if any(v == 0 for v in M.flat):
        return CellDiameter(math.inf, math.inf)
    diam = -log_fraction(delta(M))
    cols = [M[:, k].tolist() for k in range(M.shape[1])]
    lower = max((distance(u, v) for u, v in combinations(cols, 2)), default=0.0)
    # both come from exact cross-ratios; allow for rounding in the two logs
    assert lower <= diam + 1e-12 * max(1.0, diam), (lower, diam)
    return CellDiameter(diam, lower)


@dataclass(frozen=True)
class ContractionReport:
    delta: Fraction
    gamma_before: Fraction
    gamma_after: Fraction
    gamma_bound: Fraction
    exact_ok: bool
    d_before: float
    d_after: float
    d_bound: float
    float_ok: bool

    @property
    def ok(self) -> bool:
        return self.exact_ok and self.float_ok

    @property
    def gamma_margin(self) -> Fraction:
        return self.gamma_after - self.gamma_bound

    @property
    def d_margin(self) -> float:
        return self.d_bound - self.d_after


def apply(L, x) -> list[Fraction]:
    L = np.asarray(L, dtype=object)
    return [sum((as_fraction(a) * as_fraction(b) for a, b in zip(row, x)), Fraction(0))
            for row in L.tolist()]


def contraction_check(L, x, y, rtol: float = 1e-12) -> ContractionReport:
    """Check both contraction estimates for one positive matrix and one point pair."""
    x, y = _vec(x), _vec(y)
    if any(v <= 0 for v in x + y):
        raise ValueError("points must be strictly positive")
    dl = delta(L)
    g0 = gamma(x, y)
    Lx, Ly = apply(L, x), apply(L, y)
    g1 = gamma(Lx, Ly)
    bound = (dl + g0) / (1 + dl * g0)
    d0 = -log_fraction(g0)
    d1 = -log_fraction(g1)
    d_bound = (1 - float(dl)) * d0
    float_ok = d1 <= d_bound + rtol * max(d0, 1e-300)
    return ContractionReport(dl, g0, g1, bound, g1 >= bound, d0, d1, d_bound, float_ok)
