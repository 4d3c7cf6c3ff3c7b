"""The explicit 4-interval example built from blocks ``bab^n ab^2 aba^n ba^2``.

Everything here is exact. ``Construction`` fixes a horizon: the limit length
vector is approximated by ``H_K (1,1,1,1)`` with ``K = N + W``, which makes
``lam = H_n lam_n`` hold exactly for every ``n <= N`` with one consistent
scaling, and heights start from ``symmetric_datum()`` scaled to unit area.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import hilbert, rauzy, zipper
from ._rational import log_fraction, to_float
from .perm import MarkedPermutation

PI0 = MarkedPermutation.standard(4)
H0 = (1, 3, 3, 2)
A0 = (2, 2, 2, 1)
BARYCENTER = (1, 1, 1, 1)
DEFAULT_WINDOW = 10


class ConstructionError(RuntimeError):
    pass


class FitFailure(ValueError):
    pass


def block_words(n: int) -> tuple[str, str]:
    if n < 1:
        raise ValueError("block index starts at 1")
    return "ba" + "b" * n + "a" + "bb", "ab" + "a" * n + "b" + "aa"


def block_word(n: int) -> str:
    return "".join(block_words(n))


@lru_cache(maxsize=None)
def _block_matrices(n: int):
    wa, wb = block_words(n)
    end_a, A = rauzy.word_matrix(PI0, wa)
    end_b, B = rauzy.word_matrix(PI0, wb)
    for word, end in ((wa, end_a), (wb, end_b)):
        if end != PI0:
            raise ConstructionError(f"path <pi0; {word}> ends at {end}, not {PI0}")
    return A, B, A.dot(B)


def a_matrix(n: int) -> np.ndarray:
    return _block_matrices(n)[0].copy()


def b_matrix(n: int) -> np.ndarray:
    return _block_matrices(n)[1].copy()


def c_matrix(n: int) -> np.ndarray:
    return _block_matrices(n)[2].copy()


_H_CACHE: list = []


def h_product(N: int) -> np.ndarray:
    """``C_1 C_2 ... C_N``, built incrementally and cached."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not _H_CACHE:
        _H_CACHE.append(c_matrix(1))
    while len(_H_CACHE) < N:
        _H_CACHE.append(_H_CACHE[-1].dot(_block_matrices(len(_H_CACHE) + 1)[2]))
    return _H_CACHE[N - 1].copy()


def tail_product(n: int, W: int) -> np.ndarray:
    M = rauzy.identity(4)
    for j in range(n + 1, n + W + 1):
        M = M.dot(_block_matrices(j)[2])
    return M


def lambda_enclosure(N: int) -> list[tuple[Fraction, Fraction]]:
    """Coordinatewise [min, max] of the normalised vertex images ``H_N e_k``."""
    H = h_product(N)
    cols = [H[:, k].tolist() for k in range(4)]
    pts = [[Fraction(v, sum(c)) for v in c] for c in cols]
    return [(min(p[i] for p in pts), max(p[i] for p in pts)) for i in range(4)]


# -- polynomial fits ---------------------------------------------------------

def leading_term_fit(series, max_degree: int = 4) -> tuple[int, Fraction]:
    """Degree and leading coefficient of an integer sequence sampled at n = 1..k.

    Uses exact forward differences. The zero sequence reports degree -1.
    """
    row = [Fraction(v) for v in series]
    diffs = [row]
    for d in range(max_degree + 2):
        if all(v == 0 for v in diffs[-1]):
            if d == 0:
                return -1, Fraction(0)
            if len(diffs[-1]) < 1:
                break
            deg = d - 1
            return deg, diffs[deg][0] / math.factorial(deg)
        if len(diffs[-1]) < 2:
            break
        cur = diffs[-1]
        diffs.append([b - a for a, b in zip(cur, cur[1:])])
    raise FitFailure(f"not a polynomial of degree <= {max_degree} on {len(row)} samples")


def exact_polynomial(series):
    """The interpolating polynomial (sympy expression in ``n``) of values at n = 1..k."""
    import sympy

    n = sympy.Symbol("n")
    return sympy.expand(sympy.interpolate([(i + 1, int(v)) for i, v in enumerate(series)], n))


C_LEADING = (
    ((0, 1), (0, 1), (0, 1), (0, 1)),
    ((0, 1), (1, 2), (1, 2), (0, 1)),
    ((1, 1), (2, 1), (2, 1), None),
    ((0, 2), (1, 1), (1, 1), (0, 2)),
)
"""(degree, coefficient) of each displayed leading term of ``C_n``; ``None`` where 0 is shown."""

CC_LEADING = (
    ((1, 1), (2, 1), (2, 1), (0, 4)),
    ((2, 2), (3, 2), (3, 2), (1, 2)),
    ((3, 1), (4, 1), (4, 1), (2, 1)),
    ((2, 1), (3, 1), (3, 1), (1, 1)),
)


def entry_series(kind: str, i: int, j: int, k: int = 30) -> list[int]:
    """Entry (i, j) (0-based) of ``C_n`` or ``C_n C_{n+1}`` for n = 1..k."""
    if kind == "C":
        return [int(_block_matrices(n)[2][i, j]) for n in range(1, k + 1)]
    if kind == "CC":
        return [int(_block_matrices(n)[2].dot(_block_matrices(n + 1)[2])[i, j]) for n in range(1, k + 1)]
    raise ValueError(kind)


@dataclass(frozen=True)
class FitResult:
    kind: str
    i: int
    j: int
    expected: tuple[int, int] | None
    degree: int
    coefficient: Fraction

    @property
    def ok(self) -> bool:
        return self.expected is None or (self.degree, self.coefficient) == self.expected


def leading_term_table(k: int = 30) -> list[FitResult]:
    out = []
    for kind, table in (("C", C_LEADING), ("CC", CC_LEADING)):
        for i in range(4):
            for j in range(4):
                deg, coef = leading_term_fit(entry_series(kind, i, j, k))
                exp = table[i][j]
                out.append(FitResult(kind, i + 1, j + 1, exp, deg, coef))
    return out


# -- the construction --------------------------------------------------------

@dataclass(frozen=True)
class ConstructionState:
    n: int
    C: np.ndarray
    H: np.ndarray
    lam: tuple[Fraction, ...]
    h: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    word_offset: int


class Construction:
    """Exact lengths ``lam_n`` and heights ``h_n`` for blocks ``0..N``."""

    def __init__(self, N: int, W: int = DEFAULT_WINDOW):
        if N < 1 or W < 1:
            raise ValueError("need N >= 1 and W >= 1")
        self.N = N
        self.W = W
        K = N + W
        # integer representatives: lam_n = Lam[n] / S, h_n = Hint[n] * S / area
        Lam = [None] * (K + 1)
        Lam[K] = BARYCENTER
        for n in range(K, 0, -1):
            Lam[n - 1] = tuple(rauzy.matvec(_block_matrices(n)[2], Lam[n]))
        self._Lam = Lam[: N + 1]
        Hint = [H0]
        for n in range(1, N + 1):
            Hint.append(tuple(rauzy.matvec(_block_matrices(n)[2].T, Hint[-1])))
        self._Hint = Hint
        self._S = sum(Lam[0])
        self._area = sum(x * y for x, y in zip(Lam[0], H0))
        self._h_scale = Fraction(self._S, self._area)

    def lam(self, n: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._S) for x in self._Lam[n])

    def h(self, n: int) -> tuple[Fraction, ...]:
        return tuple(x * self._h_scale for x in self._Hint[n])

    @property
    def lambda0(self) -> tuple[Fraction, ...]:
        return self.lam(0)

    def initial_zipper(self) -> zipper.ZipperedRectangles:
        return zipper.ZipperedRectangles(PI0, self.lam(0), self.h(0),
                                         tuple(x * self._h_scale for x in A0))

    def area(self, n: int) -> Fraction:
        return sum((x * y for x, y in zip(self.lam(n), self.h(n))), Fraction(0))

    def lam_log(self, n: int, i: int) -> float:
        """``log lam_n(i)`` (name i, 1-based) without leaving exact arithmetic first."""
        return math.log(self._Lam[n][i - 1]) - math.log(self._S)

    def h_log(self, n: int, i: int) -> float:
        return math.log(self._Hint[n][i - 1]) + log_fraction(self._h_scale)

    def lambda_tail(self, n: int, W: int):
        """Tail estimate of ``lam_n`` from ``C_{n+1}...C_{n+W}`` applied to the barycenter.

        Returns ``(lengths, bound)``: lengths scaled so ``<lam_n, h_n> = 1``, and the
        Hilbert diameter of the tail cell, which bounds the distance to the true ``lam_n``.
        """
        M = tail_product(n, W)
        v = rauzy.matvec(M, BARYCENTER)
        h = self.h(n)
        s = sum((Fraction(x) * y for x, y in zip(v, h)), Fraction(0))
        return tuple(Fraction(x) / s for x in v), hilbert.cell_diameter(M).diameter

    def state(self, n: int) -> ConstructionState:
        H = h_product(n) if n >= 1 else rauzy.identity(4)
        C = _block_matrices(n)[2] if n >= 1 else rauzy.identity(4)
        offset = sum(len(block_word(j)) for j in range(1, n + 1))
        a = self.heights_sequence(n)[-1][1] if n else self.initial_zipper().a
        return ConstructionState(n, C, H, self.lam(n), self.h(n), a, offset)

    def heights_sequence(self, N: int | None = None, check_every_step: bool = False):
        """``(h_n, a_n)`` for n = 0..N by running Rauzy induction with heights step by step.

        At every block boundary this checks: the induced labels spell the block
        word, the permutation is back at ``pi0``, lengths equal ``lam_n``,
        heights equal the block recursion, the zipper constraints hold and the
        area is exactly 1.
        """
        N = self.N if N is None else N
        if N > self.N:
            raise ValueError(f"construction only holds {self.N} blocks")
        # run on integer representatives; constraints are homogeneous in (h, a)
        z = zipper.ZipperedRectangles(PI0, self._Lam[0], H0, A0)
        out = [(self.h(0), tuple(x * self._h_scale for x in A0))]
        for n in range(1, N + 1):
            word = block_word(n)
            for pos, letter in enumerate(word):
                try:
                    z, _, label = zipper.induct_with_heights(z)
                except Exception as exc:
                    raise ConstructionError(f"block {n}, step {pos}: {exc}") from exc
                if label != letter:
                    raise ConstructionError(f"block {n}, step {pos}: induction chose {label}, word has {letter}")
                if check_every_step:
                    bad = zipper.validate(z)
                    if bad:
                        raise ConstructionError(f"block {n}, step {pos}: {bad[0].message}")
            if z.mp != PI0:
                raise ConstructionError(f"block {n} ends at {z.mp}")
            if z.lam != tuple(Fraction(x) for x in self._Lam[n]):
                raise ConstructionError(f"block {n}: induced lengths differ from lam_{n}")
            if z.h != tuple(Fraction(x) for x in self._Hint[n]):
                raise ConstructionError(f"block {n}: stepwise heights differ from C_n^t h_(n-1)")
            if n >= 2:
                CC = _block_matrices(n - 1)[2].dot(_block_matrices(n)[2])
                if tuple(rauzy.matvec(CC.T, self._Hint[n - 2])) != self._Hint[n]:
                    raise ConstructionError(f"block {n}: h_n != (C_(n-1) C_n)^t h_(n-2)")
            bad = zipper.validate(z)
            if bad:
                raise ConstructionError(f"block {n}: {bad[0].message}")
            if zipper.area(z) != self._area:
                raise ConstructionError(f"block {n}: area changed")
            out.append((self.h(n), tuple(x * self._h_scale for x in z.a)))
        return out

    def zipper_at(self, n: int) -> zipper.ZipperedRectangles:
        h, a = self.heights_sequence(n)[-1]
        return zipper.ZipperedRectangles(PI0, self.lam(n), h, a)


# -- asymptotics -------------------------------------------------------------

CSV_FIELDS = ("n", "delta_cc", "lam1_over_lam3", "lam2_over_lam3", "lam4_over_lam3",
              "h1_over_h3", "h2_over_h3", "h4_over_h3", "lam3h3", "n3_lam4h4", "cell_diam")


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    delta_cc: float
    lam1_over_lam3: float
    lam2_over_lam3: float
    lam4_over_lam3: float
    h1_over_h3: float
    h2_over_h3: float
    h4_over_h3: float
    lam3h3: float
    n3_lam4h4: float
    cell_diam: float

    def as_tuple(self):
        return tuple(getattr(self, f) for f in CSV_FIELDS)


def delta_cc(n: int) -> Fraction:
    return hilbert.delta(_block_matrices(n)[2].dot(_block_matrices(n + 1)[2]))


def asymptotics_report(maxN: int, construction: Construction | None = None) -> list[AsymptoticRow]:
    if maxN < 5:
        raise ValueError("maxN must be >= 5")
    con = construction or Construction(maxN)
    rows = []
    for n in range(1, maxN + 1):
        lam, h = con.lam(n), con.h(n)
        rows.append(AsymptoticRow(
            n=n,
            delta_cc=to_float(delta_cc(n)),
            lam1_over_lam3=to_float(lam[0] / lam[2]),
            lam2_over_lam3=to_float(lam[1] / lam[2]),
            lam4_over_lam3=to_float(lam[3] / lam[2]),
            h1_over_h3=to_float(h[0] / h[2]),
            h2_over_h3=to_float(h[1] / h[2]),
            h4_over_h3=to_float(h[3] / h[2]),
            lam3h3=to_float(lam[2] * h[2]),
            n3_lam4h4=to_float(n ** 3 * lam[3] * h[3]),
            cell_diam=hilbert.cell_diameter(h_product(n)).diameter,
        ))
    return rows


def median_bound(values, factor: float = 2.0) -> tuple[bool, float, float]:
    """``(max <= factor * median, max, median)`` for a finite sample."""
    vals = list(values)
    med = statistics.median(vals)
    top = max(vals)
    return top <= factor * med, top, med


def normalized_quantities(con: Construction, lo: int = 5, hi: int = 100) -> dict[str, list[float]]:
    """The rescaled quantities whose boundedness expresses the O-estimates."""
    out: dict[str, list[float]] = {}
    ns = range(lo, hi + 1)
    for i in (1, 2, 4):
        out[f"n*lam{i}/lam3"] = [to_float(n * con.lam(n)[i - 1] / con.lam(n)[2]) for n in ns]
    for i in (1, 2, 4):
        out[f"h{i}/h3"] = [to_float(con.h(n)[i - 1] / con.h(n)[2]) for n in ns]
    out["n*|lam3h3-1|"] = [to_float(n * abs(con.lam(n)[2] * con.h(n)[2] - 1)) for n in ns]
    out["n^3*lam4h4"] = [to_float(n ** 3 * con.lam(n)[3] * con.h(n)[3]) for n in ns]
    out["n^2*lam4(n+1)/lam4(n)"] = [to_float(n ** 2 * con.lam(n + 1)[3] / con.lam(n)[3]) for n in ns]
    return out


def flag_rows(rows: list[AsymptoticRow], lo: int = 5, hi: int = 100) -> dict[int, list[str]]:
    """Rows in ``[lo, hi]`` whose rescaled columns exceed twice the column median."""
    sel = [r for r in rows if lo <= r.n <= hi]
    if not sel:
        return {}
    cols = {
        "n*|delta_cc-1/16|": [r.n * abs(r.delta_cc - 1 / 16) for r in sel],
        "n*lam1/lam3": [r.n * r.lam1_over_lam3 for r in sel],
        "n*lam2/lam3": [r.n * r.lam2_over_lam3 for r in sel],
        "n*lam4/lam3": [r.n * r.lam4_over_lam3 for r in sel],
        "h1/h3": [r.h1_over_h3 for r in sel],
        "h2/h3": [r.h2_over_h3 for r in sel],
        "h4/h3": [r.h4_over_h3 for r in sel],
        "n*|lam3h3-1|": [r.n * abs(r.lam3h3 - 1) for r in sel],
        "n3_lam4h4": [r.n3_lam4h4 for r in sel],
    }
    flags: dict[int, list[str]] = {}
    for name, vals in cols.items():
        med = statistics.median(vals)
        for r, v in zip(sel, vals):
            if v > 2 * med:
                flags.setdefault(r.n, []).append(name)
    return flags
