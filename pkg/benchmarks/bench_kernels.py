"""Time the numba kernels against the numpy fallbacks on the construction's data.

    python benchmarks/bench_kernels.py [--steps 1000000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from rauzylab import _kernels, iet
from rauzylab.construction import PI0, Construction
from rauzylab.geodesic import _bound_tables, overlap_certificate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    con = Construction(201)
    lam, _ = con.lambda_tail(0, 40)
    breaks, shifts = iet.float_tables(iet.IntervalExchange.from_marked(lam, PI0))
    rep = overlap_certificate(3, 200, con)
    ws = [w for w in rep.windows if w.n >= rep.n0]
    _, log_v, log_lam = _bound_tables(ws, con)
    times = np.linspace(ws[0].s, ws[-1].t, args.samples)

    # warm up the jit so compile time is not measured
    _kernels._orbit_histogram_jit(breaks, shifts, 0.0, 10, 10)
    _kernels._systole_bounds_jit(log_v, log_lam, times[:2])

    rows = []
    tj, hj = best_of(lambda: _kernels._orbit_histogram_jit(breaks, shifts, 0.0, args.steps, 100), args.repeat)
    tn, hn = best_of(lambda: _kernels.orbit_histogram_numpy(breaks, shifts, 0.0, args.steps, 100), args.repeat)
    rows.append((f"orbit_histogram ({args.steps} steps)", tj, tn, bool(np.array_equal(hj, hn))))
    tj, (bj, aj) = best_of(lambda: _kernels._systole_bounds_jit(log_v, log_lam, times), args.repeat)
    tn, (bn, an) = best_of(lambda: _kernels.systole_bounds_numpy(log_v, log_lam, times), args.repeat)
    same = bool(np.array_equal(aj, an) and np.allclose(bj, bn, rtol=1e-14, atol=0))
    rows.append((f"systole_bounds ({args.samples} x {len(ws)})", tj, tn, same))

    print(f"{'kernel':<36}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for name, tj, tn, same in rows:
        print(f"{name:<36}{tj:>10.4f}{tn:>10.4f}{tn / tj:>9.1f}  {same}")


if __name__ == "__main__":
    main()
