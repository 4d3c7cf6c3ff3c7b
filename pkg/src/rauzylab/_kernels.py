"""Float inner loops: long IET orbits and the systole-bound envelope.

Each kernel has a numba version and a plain numpy/Python version with the
same signature. Set ``RAUZYLAB_NUMBA=0`` to force the fallback (numba is
also skipped when it is not importable).
"""
from __future__ import annotations

import os
from bisect import bisect_right

import numpy as np

_EXP_CLIP = 700.0

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("RAUZYLAB_NUMBA", "1").lower() not in ("0", "false", "no", "off")


# -- orbit histogram -------------------------------------------------------

def orbit_histogram_numpy(breaks, shifts, x0, steps, bins):
    cuts = breaks.tolist()
    sh = shifts.tolist()
    counts = np.zeros(bins, dtype=np.float64)
    idx = np.empty(steps, dtype=np.int64)
    x = x0
    for i in range(steps):
        b = int(x * bins)
        idx[i] = b if b < bins else bins - 1
        x += sh[bisect_right(cuts, x)]
        if x >= 1.0:
            x -= 1.0
        elif x < 0.0:
            x += 1.0
    np.add.at(counts, idx, 1.0)
    return counts


if HAVE_NUMBA:
    @njit(cache=True, nogil=True)
    def _orbit_histogram_jit(breaks, shifts, x0, steps, bins):
        counts = np.zeros(bins, dtype=np.float64)
        nb = breaks.shape[0]
        x = x0
        for _ in range(steps):
            b = int(x * bins)
            if b >= bins:
                b = bins - 1
            counts[b] += 1.0
            j = 0
            while j < nb and x >= breaks[j]:
                j += 1
            x += shifts[j]
            # drift guard: the exact map preserves [0, 1)
            if x >= 1.0:
                x -= 1.0
            elif x < 0.0:
                x += 1.0
        return counts


def orbit_histogram(breaks, shifts, x0, steps, bins):
    """Visit counts of ``x0, T x0, ...`` (``steps`` points) in ``bins`` equal cells of [0, 1)."""
    breaks = np.ascontiguousarray(breaks, dtype=np.float64)
    shifts = np.ascontiguousarray(shifts, dtype=np.float64)
    if numba_enabled():
        return _orbit_histogram_jit(breaks, shifts, float(x0), int(steps), int(bins))
    return orbit_histogram_numpy(breaks, shifts, float(x0), int(steps), int(bins))


# -- systole bound ---------------------------------------------------------

def systole_bounds_numpy(log_v, log_lam, times):
    t = times[:, None]
    expo = np.stack([log_v[None, :] - t, log_lam[None, :] + t])
    vals = np.exp(np.minimum(expo, _EXP_CLIP)).sum(axis=0)
    arg = np.argmin(vals, axis=1)
    return vals[np.arange(len(times)), arg], arg


if HAVE_NUMBA:
    @njit(cache=True, nogil=True)
    def _systole_bounds_jit(log_v, log_lam, times):
        ns = times.shape[0]
        nw = log_v.shape[0]
        bound = np.empty(ns, dtype=np.float64)
        arg = np.empty(ns, dtype=np.int64)
        for i in range(ns):
            t = times[i]
            best = np.inf
            k = 0
            for j in range(nw):
                e1 = min(log_v[j] - t, _EXP_CLIP)
                e2 = min(log_lam[j] + t, _EXP_CLIP)
                val = np.exp(e1) + np.exp(e2)
                if val < best:
                    best = val
                    k = j
            bound[i] = best
            arg[i] = k
        return bound, arg


def systole_bounds(log_v, log_lam, times):
    """For each time, ``min_j exp(log_v[j] - t) + exp(log_lam[j] + t)`` and the minimising ``j``."""
    log_v = np.ascontiguousarray(log_v, dtype=np.float64)
    log_lam = np.ascontiguousarray(log_lam, dtype=np.float64)
    times = np.ascontiguousarray(times, dtype=np.float64)
    if numba_enabled():
        return _systole_bounds_jit(log_v, log_lam, times)
    return systole_bounds_numpy(log_v, log_lam, times)
