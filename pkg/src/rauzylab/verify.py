"""Randomised invariant suites behind ``rauzylab verify``.

Every suite takes a ``random.Random`` and returns ``(checks_run, failures)``;
a failure is a one-line string naming the violated invariant.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from . import construction, geodesic, hilbert, iet, perm, rauzy, zipper
from .perm import MarkedPermutation


def random_marked_permutation(rng: random.Random, m: int) -> MarkedPermutation:
    while True:
        nu0 = list(range(1, m + 1))
        nu1 = list(range(1, m + 1))
        rng.shuffle(nu0)
        rng.shuffle(nu1)
        mp = MarkedPermutation(nu0, nu1)
        if mp.is_irreducible():
            return mp


def random_lengths(rng: random.Random, m: int, den: int = 97) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(1, 10 * den), rng.randint(1, den)) for _ in range(m))


def random_induction_case(rng: random.Random, m: int):
    """A marked permutation with name-indexed lengths that avoid the tie case."""
    mp = random_marked_permutation(rng, m)
    while True:
        lam = random_lengths(rng, m)
        if lam[mp.nu0[-1] - 1] != lam[mp.nu1[-1] - 1]:
            return lam, mp


def rauzy_cut(lam, mp: MarkedPermutation) -> Fraction:
    """Right end of the subinterval Rauzy induction restricts to."""
    return sum(lam) - min(lam[mp.nu0[-1] - 1], lam[mp.nu1[-1] - 1])


def oracle_mismatch(lam, mp: MarkedPermutation) -> str | None:
    """Compare one induction step with the brute-force first-return map."""
    lam2, mp2, A, _ = rauzy.induction_step(lam, mp)
    induced = iet.first_return(iet.IntervalExchange.from_marked(lam, mp), rauzy_cut(lam, mp))
    stepped = iet.IntervalExchange.from_marked(lam2, mp2)
    if induced.lengths != stepped.lengths or induced.pi != stepped.pi:
        return (f"rauzy step != first return for {mp.label()} lam={[str(x) for x in lam]}: "
                f"step gives {stepped.pi}, oracle gives {induced.pi}")
    if tuple(rauzy.matvec(A, lam2)) != tuple(lam):
        return f"lam != A lam' for {mp.label()}"
    return None


def random_valid_zipper(rng: random.Random, m: int, mp: MarkedPermutation | None = None):
    mp = mp or MarkedPermutation.standard(m)
    while True:
        lam = random_lengths(rng, m)
        tau = [rng.randint(-12, 12) for _ in range(m)]
        z = zipper.from_suspension(mp, lam, tau)
        if zipper.is_valid(z):
            return z


def random_positive_matrix(rng: random.Random, m: int = 4, top: int = 50):
    return rauzy.as_matrix([[rng.randint(1, top) for _ in range(m)] for _ in range(m)])


def random_positive_vector(rng: random.Random, m: int = 4, top: int = 50):
    return [Fraction(rng.randint(1, top)) for _ in range(m)]


# -- suites ------------------------------------------------------------------

def suite_oracle(rng, cases=200):
    fails = []
    for _ in range(cases):
        lam, mp = random_induction_case(rng, rng.randint(2, 6))
        msg = oracle_mismatch(lam, mp)
        if msg:
            fails.append("oracle: " + msg)
    return cases, fails


def suite_constraints(rng, cases=40, steps=25):
    fails = []
    runs = 0
    for _ in range(cases):
        z = random_valid_zipper(rng, rng.randint(2, 6))
        for _ in range(steps):
            try:
                z, _, _ = zipper.induct_with_heights(z)
            except rauzy.InductionTieError:
                break
            except zipper.ZipperConsistencyError as exc:
                fails.append(f"constraints: {exc}")
                break
            runs += 1
            defects = zipper.coverage_defects(z, zipper.glue_records(z))
            if defects:
                fails.append(f"constraints: gluing {defects[0]}")
                break
    return runs, fails


def suite_hilbert(rng, cases=200):
    fails = []
    for _ in range(cases):
        L = random_positive_matrix(rng)
        x, y, w = (random_positive_vector(rng) for _ in range(3))
        rep = hilbert.contraction_check(L, x, y)
        if not rep.exact_ok:
            fails.append(f"hilbert: Gamma(Lx,Ly) < (delta+Gamma)/(1+delta*Gamma) for L={L.tolist()}")
        if not rep.float_ok:
            fails.append(f"hilbert: d(Lx,Ly) > (1-delta) d(x,y) for L={L.tolist()}")
        dxy, dxw, dwy = hilbert.distance(x, y), hilbert.distance(x, w), hilbert.distance(w, y)
        if dxy > dxw + dwy + 1e-12 * (1 + dxy):
            fails.append("hilbert: triangle inequality")
        c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if hilbert.gamma([c * v for v in x], y) != hilbert.gamma(x, y):
            fails.append("hilbert: projective invariance")
    return cases, fails


def suite_area(rng, max_n=30):
    fails = []
    con = construction.Construction(max_n)
    for n in range(max_n + 1):
        if con.area(n) != 1:
            fails.append(f"area: <lam_{n}, h_{n}> = {con.area(n)}")
    try:
        con.heights_sequence(min(max_n, 15))
    except construction.ConstructionError as exc:
        fails.append(f"area: {exc}")
    return max_n + 1, fails


def suite_windows(rng, n_max=60):
    fails = []
    con = construction.Construction(n_max + 1)
    try:
        rep = geodesic.overlap_certificate(3, n_max, con)
    except geodesic.WindowError as exc:
        return 1, [f"windows: {exc}"]
    if rep.n0 is None:
        fails.append("windows: no overlapping tail of windows")
        return 1, fails
    lo, hi = rep.covered()
    for _ in range(200):
        t = rng.uniform(lo, hi)
        if not any(t in w for w in rep.windows):
            fails.append(f"windows: time {t} not covered")
            break
    for w in rep.windows:
        hol = geodesic.gamma_n(con, w.n)
        for t in (w.s + 1e-9 * (w.t - w.s), w.midpoint, w.t - 1e-9 * (w.t - w.s)):
            x, y = geodesic.flow(hol, t)
            lim = 1 / math.log(w.n)
            if x > lim * (1 + 1e-9) or y > lim * (1 + 1e-9):
                fails.append(f"windows: component above 1/log n at n={w.n}, t={t}")
    return len(rep.windows), fails


SUITES = {
    "oracle": suite_oracle,
    "constraints": suite_constraints,
    "hilbert": suite_hilbert,
    "area": suite_area,
    "windows": suite_windows,
}


def run(suites=None, seed: int = 0) -> dict:
    names = list(suites or SUITES)
    out = {"seed": seed, "suites": {}}
    ok = True
    for name in names:
        # one generator per suite keeps results independent of suite selection
        checks, fails = SUITES[name](random.Random(f"{seed}:{name}"))
        out["suites"][name] = {"checks": checks, "failures": fails}
        ok = ok and not fails
    out["passed"] = ok
    return out
