"""Interval exchange maps with exact rational data.

The map sends ``x`` in the j-th interval ``[beta_{j-1}, beta_j)`` to
``x - beta_{j-1} + sum(lengths[k] for k with pi(k) < pi(j))``, so the
interval at position ``j`` lands at position ``pi(j)``.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

import numpy as np

from . import _kernels
from ._rational import as_fraction
from .perm import MarkedPermutation, derived_permutation, inverse


class DomainError(ValueError):
    pass


class NonReturnError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntervalExchange:
    lengths: tuple[Fraction, ...]
    pi: tuple[int, ...]
    breakpoints: tuple[Fraction, ...] = field(init=False)
    _image_starts: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lengths = tuple(as_fraction(x) for x in self.lengths)
        pi = tuple(int(p) for p in self.pi)
        if len(lengths) != len(pi) or sorted(pi) != list(range(1, len(pi) + 1)):
            raise ValueError("pi must be a permutation of 1..m matching the lengths")
        if any(x <= 0 for x in lengths):
            raise ValueError("lengths must be positive")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "breakpoints", (Fraction(0),) + tuple(accumulate(lengths)))
        pinv = inverse(pi)
        # image of interval j starts after the images of everything placed before pi(j)
        by_target = [lengths[pinv[t] - 1] for t in range(len(pi))]
        target_starts = (Fraction(0),) + tuple(accumulate(by_target))
        object.__setattr__(self, "_image_starts", tuple(target_starts[p - 1] for p in pi))

    @classmethod
    def from_marked(cls, lengths_by_name, mp: MarkedPermutation) -> "IntervalExchange":
        """Build from name-indexed lengths (``lengths_by_name[name-1]``) and a marked permutation."""
        return cls(tuple(lengths_by_name[name - 1] for name in mp.nu0), derived_permutation(mp))

    @property
    def m(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> Fraction:
        return self.breakpoints[-1]

    def interval_of(self, x) -> int:
        """1-based index of the interval containing ``x``."""
        x = as_fraction(x)
        if not 0 <= x < self.total:
            raise DomainError(f"{x} outside [0, {self.total})")
        return bisect_right(self.breakpoints, x)

    def translation(self, j: int) -> Fraction:
        return self._image_starts[j - 1] - self.breakpoints[j - 1]

    def image_interval(self, j: int) -> tuple[Fraction, Fraction]:
        start = self._image_starts[j - 1]
        return start, start + self.lengths[j - 1]

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)


def evaluate(T: IntervalExchange, x) -> Fraction:
    x = as_fraction(x)
    return x + T.translation(T.interval_of(x))


def orbit(T: IntervalExchange, x, steps: int) -> list[Fraction]:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [as_fraction(x)]
    for _ in range(steps):
        out.append(evaluate(T, out[-1]))
    return out


def first_return(T: IntervalExchange, cut, max_iter: int = 10**6) -> IntervalExchange:
    """Induced map of ``T`` on ``[0, cut)``, found by pushing pieces forward until they return.

    Pieces are split wherever their image crosses a breakpoint of ``T`` or the
    cut itself. Pieces that are adjacent in the domain and share an itinerary
    form one interval of the induced exchange.
    """
    cut = as_fraction(cut)
    if not 0 < cut <= T.total:
        raise DomainError(f"cut {cut} outside (0, {T.total}]")

    # a piece is (domain_start, length, current_position, itinerary)
    active = []
    for j in range(1, T.m + 1):
        lo, hi = T.breakpoints[j - 1], T.breakpoints[j]
        if lo < cut:
            active.append((lo, min(hi, cut) - lo, lo, ()))
    done = []
    for _ in range(max_iter):
        if not active:
            break
        nxt = []
        for start, length, pos, itin in active:
            for s, ln, p, j in _split_by_intervals(T, start, length, pos):
                img = p + T.translation(j)
                itin_j = itin + (j,)
                if img + ln <= cut:
                    done.append((s, ln, img, itin_j))
                elif img >= cut:
                    nxt.append((s, ln, img, itin_j))
                else:
                    head = cut - img
                    done.append((s, head, img, itin_j))
                    nxt.append((s + head, ln - head, cut, itin_j))
        active = nxt
    else:
        if active:
            raise NonReturnError(f"non-return within bound ({max_iter} iterations)")

    done.sort()
    merged = []
    for s, ln, img, itin in done:
        if merged and merged[-1][3] == itin and merged[-1][0] + merged[-1][1] == s:
            ps, pl, pimg, _ = merged[-1]
            merged[-1] = (ps, pl + ln, pimg, itin)
        else:
            merged.append((s, ln, img, itin))
    order = sorted(range(len(merged)), key=lambda i: merged[i][2])
    pi = [0] * len(merged)
    for rank, i in enumerate(order, start=1):
        pi[i] = rank
    return IntervalExchange(tuple(p[1] for p in merged), tuple(pi))


def _split_by_intervals(T, start, length, pos):
    """Cut the piece at ``[pos, pos+length)`` along the breakpoints of ``T``."""
    end = pos + length
    while pos < end:
        j = T.interval_of(pos)
        stop = min(end, T.breakpoints[j])
        yield start, stop - pos, pos, j
        start += stop - pos
        pos = stop


def float_tables(T: IntervalExchange) -> tuple[np.ndarray, np.ndarray]:
    """Interior breakpoints and per-interval translations as float arrays."""
    total = T.total
    breaks = np.array([float(b / total) for b in T.breakpoints[1:-1]], dtype=np.float64)
    shifts = np.array([float(T.translation(j) / total) for j in range(1, T.m + 1)], dtype=np.float64)
    return breaks, shifts


def discrepancy(T: IntervalExchange, x, steps: int, bins: int) -> float:
    """Largest gap between visit frequency and Lebesgue mass over ``bins`` equal cells.

    The orbit ``x, T x, ..., T^(steps-1) x`` is run in double precision on the
    rescaled unit interval.
    """
    if steps < 1 or bins < 1:
        raise ValueError("steps and bins must be positive")
    breaks, shifts = float_tables(T)
    x0 = float(as_fraction(x) / T.total)
    counts = _kernels.orbit_histogram(breaks, shifts, x0, steps, bins)
    return float(np.max(np.abs(counts / steps - 1.0 / bins)))
