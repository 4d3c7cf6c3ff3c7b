"""Teichmüller flow on holonomy vectors and the short-saddle-connection windows.

Flow times reach the thousands along the construction, so every quantity
that would overflow a double is carried as a logarithm until the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from ._rational import log_fraction
from .construction import Construction, block_word


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class Holonomy:
    horizontal: Fraction
    vertical: Fraction
    exact_vertical: bool = True

    def __post_init__(self):
        if not (self.horizontal > 0 and self.vertical > 0):
            raise ValueError("holonomy components must be positive")

    @property
    def log_horizontal(self) -> float:
        return log_fraction(self.horizontal)

    @property
    def log_vertical(self) -> float:
        return log_fraction(self.vertical)


def flow(hol: Holonomy, t: float) -> tuple[float, float]:
    """Holonomy after time ``t``: horizontal scaled by ``e^t``, vertical by ``e^-t``."""
    return math.exp(hol.log_horizontal + t), math.exp(hol.log_vertical - t)


def flowed_lengths(hol: Holonomy, t: float) -> tuple[float, float]:
    """(component sum, Euclidean norm) of the flowed holonomy vector."""
    x, y = flow(hol, t)
    return x + y, math.hypot(x, y)


def gamma_n(con: Construction, n: int) -> Holonomy:
    """The saddle connection on the right side of the fourth rectangle after block ``n``.

    Horizontal part is ``lam_n(4)``; the vertical part is only known to be at
    most ``h_n(4)``, which is what is stored.
    """
    if not block_word(n).endswith("a"):
        raise RuntimeError(f"block word {n} does not end with 'a'; no zero on the last right side")
    return Holonomy(con.lam(n)[3], con.h(n)[3], exact_vertical=False)


@dataclass(frozen=True)
class TimeWindow:
    n: int
    s: float
    t: float

    @property
    def length(self) -> float:
        return self.t - self.s

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.s + self.t)

    def __contains__(self, time: float) -> bool:
        return self.s < time < self.t


def window(n: int, hol: Holonomy) -> TimeWindow:
    """Times during which both flowed components of ``hol`` are at most ``1/log n``."""
    if n < 3:
        raise WindowError("windows start at n = 3")
    loglog = math.log(math.log(n))
    s = hol.log_vertical + loglog
    t = -hol.log_horizontal - loglog
    if not s < t:
        raise WindowError(f"empty window at n={n}: s={s} >= t={t}")
    return TimeWindow(n, s, t)


def windows(con: Construction, n_min: int, n_max: int) -> list[TimeWindow]:
    return [window(n, gamma_n(con, n)) for n in range(n_min, n_max + 1)]


@dataclass
class OverlapReport:
    n0: int | None
    windows: list[TimeWindow]
    overlaps: dict[int, float]       # n -> t_n - s_{n+1}
    pre_asymptotic: list[int]

    def covered(self) -> tuple[float, float] | None:
        if self.n0 is None:
            return None
        first = next(w for w in self.windows if w.n == self.n0)
        return first.s, self.windows[-1].t

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "overlaps": [
                {"n": w.n, "s": w.s, "t": w.t, "overlapWithNext": self.overlaps.get(w.n)}
                for w in self.windows
            ],
        }


def overlap_certificate(n_min: int, n_max: int, con: Construction | None = None) -> OverlapReport:
    """Overlaps ``t_n - s_{n+1}`` for ``n_min <= n <= n_max``.

    Windows are computed up to ``n_max + 1`` so the last overlap is defined.
    ``n0`` is the smallest index from which every overlap is positive.
    """
    if n_min < 3:
        raise ValueError("n_min must be >= 3")
    con = con or Construction(n_max + 1)
    ws = windows(con, n_min, n_max + 1)
    overlaps = {a.n: a.t - b.s for a, b in zip(ws, ws[1:])}
    n0 = None
    for n in range(n_max, n_min - 1, -1):
        if overlaps[n] > 0:
            n0 = n
        else:
            break
    pre = [n for n in range(n_min, n0 if n0 is not None else n_max + 1)]
    return OverlapReport(n0, ws, overlaps, pre)


@dataclass
class Trajectory:
    t: np.ndarray
    bound: np.ndarray
    active_n: np.ndarray
    window_s: np.ndarray
    window_t: np.ndarray

    def rows(self):
        for row in zip(self.t, self.bound, self.active_n, self.window_s, self.window_t):
            yield float(row[0]), float(row[1]), int(row[2]), float(row[3]), float(row[4])


def _bound_tables(ws: list[TimeWindow], con: Construction):
    ns = np.array([w.n for w in ws], dtype=np.int64)
    log_v = np.array([con.h_log(w.n, 4) for w in ws])
    log_lam = np.array([con.lam_log(w.n, 4) for w in ws])
    return ns, log_v, log_lam


def systole_bound(times, ws: list[TimeWindow], con: Construction) -> Trajectory:
    """``min_n e^-t v(gamma_n) + e^t lam(gamma_n)`` over the given windows, at each time."""
    times = np.asarray(times, dtype=np.float64)
    ns, log_v, log_lam = _bound_tables(ws, con)
    bound, arg = _kernels.systole_bounds(log_v, log_lam, times)
    s = np.array([w.s for w in ws])[arg]
    t = np.array([w.t for w in ws])[arg]
    return Trajectory(times, bound, ns[arg], s, t)


def systole_bound_trajectory(t_start: float, t_end: float, samples: int,
                             report: OverlapReport, con: Construction,
                             seed: int | None = None) -> Trajectory:
    """Sample the systole bound on ``[t_start, t_end]``: evenly spaced, or uniform random when
    ``seed`` is given (sorted either way)."""
    if report.n0 is not None:
        first = next(w for w in report.windows if w.n == report.n0)
        if t_start < first.s:
            raise ValueError(f"t_start {t_start} precedes s_n0 = {first.s}")
    if seed is None:
        times = np.linspace(t_start, t_end, samples)
    else:
        times = np.sort(np.random.default_rng(seed).uniform(t_start, t_end, samples))
    ws = [w for w in report.windows if report.n0 is None or w.n >= report.n0]
    return systole_bound(times, ws, con)


def midpoint_envelope(report: OverlapReport, con: Construction, per_gap: int = 64):
    """For consecutive certified windows n, n+1: the largest bound on ``[mid_n, mid_{n+1}]``.

    Returns a list of ``(n, max_bound, bound_at_mid_n, 2/log n)``.
    """
    ws = [w for w in report.windows if report.n0 is not None and w.n >= report.n0]
    out = []
    for a, b in zip(ws, ws[1:]):
        grid = np.linspace(a.midpoint, b.midpoint, per_gap)
        tr = systole_bound(grid, ws, con)
        out.append((a.n, float(tr.bound.max()), float(tr.bound[0]), 2.0 / math.log(a.n)))
    return out
