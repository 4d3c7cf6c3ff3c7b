"""Rauzy induction on lengths and the expansion matrices it produces.

Length vectors here are indexed by interval *name*: ``lam[name-1]``.
Matrices are ``numpy`` arrays of dtype ``object`` holding Python ints, so
products stay exact however large the entries get.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rational import as_fraction
from .perm import MarkedPermutation, op_a, op_b


class InductionTieError(ValueError):
    """The two competing last intervals have equal length; induction is undefined."""


def identity(m: int) -> np.ndarray:
    out = np.zeros((m, m), dtype=object)
    for i in range(m):
        out[i, i] = 1
    return out


def as_matrix(rows) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def elementary(m: int, row: int, col: int) -> np.ndarray:
    """Identity plus a single 1 at (row, col), 1-based names."""
    e = identity(m)
    e[row - 1, col - 1] = 1
    return e


def elementary_for(mp: MarkedPermutation, label: str) -> np.ndarray:
    last0, last1 = mp.nu0[-1], mp.nu1[-1]
    if label == "a":
        return elementary(mp.m, last1, last0)
    if label == "b":
        return elementary(mp.m, last0, last1)
    raise ValueError(f"label must be 'a' or 'b', got {label!r}")


def determinant(M) -> int:
    import sympy

    return int(sympy.Matrix(M.tolist()).det(method="bareiss"))


def matvec(M, v) -> tuple:
    return tuple(M.dot(np.array(list(v), dtype=object)).tolist())


def matrix_to_json(M) -> list[list[str]]:
    return [[str(int(x)) for x in row] for row in M.tolist()]


def matrix_from_json(rows) -> np.ndarray:
    return as_matrix([[int(x) for x in row] for row in rows])


@dataclass(frozen=True)
class Step:
    matrix: np.ndarray
    label: str
    lengths: tuple[Fraction, ...]
    perm: MarkedPermutation


def induction_step(lam, mp: MarkedPermutation):
    """One Rauzy step. Returns ``(lam', mp', A, label)`` with ``lam = A @ lam'``."""
    lam = tuple(as_fraction(x) for x in lam)
    top, bottom = mp.nu0[-1], mp.nu1[-1]
    lt, lb = lam[top - 1], lam[bottom - 1]
    if lt == lb:
        raise InductionTieError(f"outside induction domain: lambda({top}) == lambda({bottom}) == {lt}")
    new = list(lam)
    if lb > lt:
        new[bottom - 1] = lb - lt
        return tuple(new), op_a(mp), elementary(mp.m, bottom, top), "a"
    new[top - 1] = lt - lb
    return tuple(new), op_b(mp), elementary(mp.m, top, bottom), "b"


def word_matrix(start: MarkedPermutation, word: str):
    """Follow ``word`` from ``start``; return the end vertex and the product of step matrices."""
    M = identity(start.m)
    mp = start
    for letter in word:
        M = M.dot(elementary_for(mp, letter))
        mp = op_a(mp) if letter == "a" else op_b(mp)
    return mp, M


@dataclass
class Expansion:
    steps: list[Step]
    error: str | None = None

    @property
    def word(self) -> str:
        return "".join(s.label for s in self.steps)

    def product(self, m: int | None = None) -> np.ndarray:
        if m is None:
            m = self.steps[0].matrix.shape[0]
        M = identity(m)
        for s in self.steps:
            M = M.dot(s.matrix)
        return M

    def __len__(self):
        return len(self.steps)


def expansion(lam, mp: MarkedPermutation, k: int) -> Expansion:
    """Run ``k`` induction steps; stop early (with ``error`` set) on a tie."""
    steps = []
    for _ in range(k):
        try:
            lam, mp, A, label = induction_step(lam, mp)
        except InductionTieError as exc:
            return Expansion(steps, str(exc))
        steps.append(Step(A, label, lam, mp))
    return Expansion(steps)
