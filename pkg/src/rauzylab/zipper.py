"""Veech's zippered rectangles over a marked interval exchange.

Storage convention: ``lam`` and ``h`` are indexed by interval name
(``h[name-1]``), matching the expansion matrices; ``a`` is indexed by
position (``a[j-1]`` is the zipper height between rectangles ``j`` and
``j+1``, and ``a[m-1]`` sits on the right side of the last rectangle).
Rectangle numbers in constraints and glue records are positions.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import rauzy
from ._rational import as_fraction, to_pq
from .perm import MarkedPermutation, derived_permutation, inverse


class InvalidZipperError(ValueError):
    pass


class ZipperConsistencyError(RuntimeError):
    """Induction produced data that violates the zipper constraints."""


def sigma(mp: MarkedPermutation) -> tuple[int, ...]:
    """The permutation of ``{0..m}`` pairing zipper heights; ``result[j] = sigma(j)``."""
    pi = derived_permutation(mp)
    pinv = inverse(pi)
    m = mp.m
    out = [0] * (m + 1)
    out[0] = pinv[0] - 1
    for j in range(1, m + 1):
        if j == pinv[m - 1]:
            out[j] = m
        else:
            out[j] = pinv[pi[j - 1]] - 1  # pinv(pi(j) + 1) - 1
    return tuple(out)


@dataclass(frozen=True)
class ZipperedRectangles:
    mp: MarkedPermutation
    lam: tuple[Fraction, ...]
    h: tuple[Fraction, ...]
    a: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("lam", "h", "a"):
            vals = tuple(as_fraction(x) for x in getattr(self, name))
            if len(vals) != self.mp.m:
                raise ValueError(f"{name} has {len(vals)} entries, expected {self.mp.m}")
            object.__setattr__(self, name, vals)

    @property
    def m(self) -> int:
        return self.mp.m

    @classmethod
    def from_positions(cls, mp, lam_pos, h_pos, a) -> "ZipperedRectangles":
        """Build from position-ordered lengths and heights."""
        lam = [None] * mp.m
        h = [None] * mp.m
        for j, name in enumerate(mp.nu0):
            lam[name - 1] = lam_pos[j]
            h[name - 1] = h_pos[j]
        return cls(mp, tuple(lam), tuple(h), tuple(a))

    def lam_pos(self) -> tuple[Fraction, ...]:
        return tuple(self.lam[name - 1] for name in self.mp.nu0)

    def h_pos(self) -> tuple[Fraction, ...]:
        return tuple(self.h[name - 1] for name in self.mp.nu0)

    def breakpoints(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)]
        for x in self.lam_pos():
            out.append(out[-1] + x)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "nu0": list(self.mp.nu0),
            "nu1": list(self.mp.nu1),
            "lambda": [to_pq(x) for x in self.lam],
            "h": [to_pq(x) for x in self.h],
            "a": [to_pq(x) for x in self.a],
        }

    @classmethod
    def from_json(cls, d: dict) -> "ZipperedRectangles":
        mp = MarkedPermutation(d["nu0"], d["nu1"])
        return cls(mp, tuple(d["lambda"]), tuple(d["h"]), tuple(d["a"]))


@dataclass(frozen=True)
class Violation:
    equation: int
    index: int
    message: str


def validate(z: ZipperedRectangles) -> list[Violation]:
    """Every violated height/zipper constraint; an empty list means the datum is valid."""
    m = z.m
    pi = derived_permutation(z.mp)
    p = inverse(pi)[m - 1]
    H = (Fraction(0),) + z.h_pos() + (Fraction(0),)  # H[0] = H[m+1] = 0
    A = (Fraction(0),) + z.a
    out = []
    for name, x in enumerate(z.lam, start=1):
        if x <= 0:
            out.append(Violation(0, name, f"length of {name} is {x}, must be > 0"))
    for j in range(1, m + 1):
        if not H[j] > 0:
            out.append(Violation(1, j, f"h_{j} = {H[j]} must be > 0"))
    for j in range(1, m):
        if j == p:
            continue
        if not (0 < A[j] <= min(H[j], H[j + 1])):
            out.append(Violation(2, j, f"a_{j} = {A[j]} not in (0, min(h_{j}, h_{j+1})] = (0, {min(H[j], H[j + 1])}]"))
    if not (0 < A[p] <= H[p + 1]):
        out.append(Violation(3, p, f"a_{p} = {A[p]} not in (0, h_{p+1}] = (0, {H[p + 1]}]"))
    if not (-H[p] <= A[m] <= H[m]):
        out.append(Violation(4, m, f"a_{m} = {A[m]} not in [-h_{p}, h_{m}] = [{-H[p]}, {H[m]}]"))
    s = sigma(z.mp)
    for j in range(0, m + 1):
        lhs = H[j] - A[j]
        rhs = H[s[j] + 1] - A[s[j]]
        if lhs != rhs:
            out.append(Violation(5, j, f"h_{j} - a_{j} = {lhs} != h_{s[j]+1} - a_{s[j]} = {rhs}"))
    return out


def is_valid(z: ZipperedRectangles) -> bool:
    return not validate(z)


def _require_valid(z):
    bad = validate(z)
    if bad:
        raise InvalidZipperError("; ".join(v.message for v in bad))


@dataclass(frozen=True)
class GlueRecord:
    """One identification. ``right-to-left`` ranges are heights; ``top-to-base`` ranges are
    horizontal, with target ``0`` standing for the base interval."""
    kind: str
    source: int
    source_range: tuple[Fraction, Fraction]
    target: int
    target_range: tuple[Fraction, Fraction]

    @property
    def length(self) -> Fraction:
        return self.source_range[1] - self.source_range[0]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "source": self.source,
            "source_range": [to_pq(x) for x in self.source_range],
            "target": self.target,
            "target_range": [to_pq(x) for x in self.target_range],
        }


def glue_records(z: ZipperedRectangles) -> list[GlueRecord]:
    """All side identifications of the surface, for whichever sign ``a_m`` has.

    The generic right-side rule at ``j = pi^-1(m)`` would point at a
    nonexistent rectangle ``m+1``; it is dropped, and the sign-dependent
    replacement rules cover that stretch instead.
    """
    _require_valid(z)
    m = z.m
    pi = derived_permutation(z.mp)
    p = inverse(pi)[m - 1]
    H = (Fraction(0),) + z.h_pos() + (Fraction(0),)
    A = (Fraction(0),) + z.a
    s = sigma(z.mp)
    beta = z.breakpoints()
    lam_pos = z.lam_pos()

    def side(src, lo, hi, dst, lo2, hi2):
        return GlueRecord("right-to-left", src, (lo, hi), dst, (lo2, hi2))

    out = []
    # (1) tops onto the base: position j lands at image slot pi(j)
    order = sorted(range(1, m + 1), key=lambda j: pi[j - 1])
    start = {}
    acc = Fraction(0)
    for j in order:
        start[j] = acc
        acc += lam_pos[j - 1]
    for j in range(1, m + 1):
        out.append(GlueRecord("top-to-base", j, (beta[j - 1], beta[j]), 0,
                              (start[j], start[j] + lam_pos[j - 1])))
    # (2) lower parts of the zippers
    for j in range(1, m):
        if A[m] > 0 and j == p:
            out.append(side(p, Fraction(0), H[p], p + 1, Fraction(0), H[p]))
            out.append(side(m, Fraction(0), A[m], p + 1, H[p], A[p]))
        else:
            out.append(side(j, Fraction(0), A[j], j + 1, Fraction(0), A[j]))
    # (3) upper parts
    for j in range(1, m + 1):
        if j == p:
            continue
        if A[m] < 0 and j == m:
            t = s[m] + 1
            out.append(side(p, A[p], H[p], t, A[s[m]], H[t] - H[m]))
            out.append(side(m, Fraction(0), H[m], t, H[t] - H[m], H[t]))
        else:
            out.append(side(j, A[j], H[j], s[j] + 1, A[s[j]], H[s[j] + 1]))
    return [r for r in out if r.length != 0]


def coverage_defects(z: ZipperedRectangles, records) -> list[str]:
    """Exact check that records tile every vertical side and the base, with matched lengths."""
    m = z.m
    H = z.h_pos()
    total = z.breakpoints()[-1]
    problems = []
    right = {j: [] for j in range(1, m + 1)}
    left = {j: [] for j in range(1, m + 1)}
    base = []
    for r in records:
        if r.source_range[1] - r.source_range[0] != r.target_range[1] - r.target_range[0]:
            problems.append(f"length mismatch in {r}")
        if r.kind == "top-to-base":
            base.append(r.target_range)
        else:
            right[r.source].append(r.source_range)
            left[r.target].append(r.target_range)

    def tiles(segs, top):
        segs = sorted(segs)
        cur = Fraction(0)
        for lo, hi in segs:
            if lo != cur or hi <= lo:
                return False
            cur = hi
        return cur == top

    for j in range(1, m + 1):
        if not tiles(right[j], H[j - 1]):
            problems.append(f"right side of R_{j} not tiled: {sorted(right[j])}")
        if not tiles(left[j], H[j - 1]):
            problems.append(f"left side of R_{j} not tiled: {sorted(left[j])}")
    if not tiles(base, total):
        problems.append("base not tiled by the tops")
    return problems


@dataclass(frozen=True)
class ZeroReport:
    points: tuple[tuple[Fraction, Fraction], ...]
    right_side_zero: tuple[bool, ...]  # indexed by position - 1


def zero_positions(z: ZipperedRectangles) -> ZeroReport:
    _require_valid(z)
    m = z.m
    p = inverse(derived_permutation(z.mp))[m - 1]
    beta = z.breakpoints()
    am = z.a[-1]
    pts = ((Fraction(0), Fraction(0)),) + tuple((beta[j], z.a[j - 1]) for j in range(1, m + 1))
    flags = tuple(not ((j == m and am < 0) or (j == p and am > 0)) for j in range(1, m + 1))
    return ZeroReport(pts, flags)


def induct_with_heights(z: ZipperedRectangles):
    """One Rauzy step on the full datum. Returns ``(z', A, label)``; ``h' = A^t h``."""
    m = z.m
    p = inverse(derived_permutation(z.mp))[m - 1]
    lam2, mp2, A, label = rauzy.induction_step(z.lam, z.mp)
    h2 = tuple(rauzy.matvec(A.T, z.h))
    hp = z.h_pos()[p - 1]
    a = (Fraction(0),) + z.a  # a[0] = 0
    if label == "a":
        a2 = [a[j] if j < p else (hp + a[m - 1] if j == p else a[j - 1]) for j in range(1, m + 1)]
    else:
        a2 = list(z.a[:-1]) + [-(hp - a[p - 1])]
    out = ZipperedRectangles(mp2, lam2, h2, tuple(a2))
    bad = validate(out)
    if bad:
        raise ZipperConsistencyError(f"step {label} from {z.mp} broke: " + "; ".join(v.message for v in bad))
    return out, A, label


def area(z: ZipperedRectangles) -> Fraction:
    return sum((x * y for x, y in zip(z.lam, z.h)), Fraction(0))


def normalize_area(z: ZipperedRectangles) -> ZipperedRectangles:
    s = area(z)
    if s == 1:
        return z
    return replace(z, h=tuple(x / s for x in z.h), a=tuple(x / s for x in z.a))


def symmetric_datum(lam=(1, 1, 1, 1), second: bool = False) -> ZipperedRectangles:
    """The two valid height/zipper data over the symmetric 4-permutation."""
    mp = MarkedPermutation.standard(4)
    if second:
        return ZipperedRectangles(mp, tuple(lam), (2, 3, 3, 1), (1, 1, 1, -1))
    return ZipperedRectangles(mp, tuple(lam), (1, 3, 3, 2), (2, 2, 2, 1))


def from_suspension(mp: MarkedPermutation, lam, tau) -> ZipperedRectangles:
    """Heights and zippers from a suspension vector ``tau`` (position-indexed).

    Zeros sit at the partial sums of ``lam + i*tau``, so ``a_j = tau_1 + ... + tau_j``,
    and ``h = -Omega tau`` with ``Omega`` the signed inversion matrix of ``pi``.
    The result is not validated.
    """
    pi = derived_permutation(mp)
    m = mp.m
    tau = [as_fraction(t) for t in tau]
    h_pos = []
    for i in range(m):
        s = Fraction(0)
        for j in range(m):
            if i < j and pi[i] > pi[j]:
                s -= tau[j]
            elif i > j and pi[i] < pi[j]:
                s += tau[j]
        h_pos.append(s)
    a = []
    acc = Fraction(0)
    for t in tau:
        acc += t
        a.append(acc)
    lam_pos = [lam[name - 1] for name in mp.nu0]
    return ZipperedRectangles.from_positions(mp, lam_pos, h_pos, a)
