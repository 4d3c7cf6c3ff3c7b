"""Command-line entry point: ``rauzylab <command> [options]``.

Exit codes: 0 success, 2 bad configuration or input, 3 an internal
invariant failed. Errors go to stderr as one ``error: ...`` line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from . import construction, geodesic, iet, perm, rauzy, verify
from ._rational import to_float, to_pq
from .zipper import ZipperConsistencyError

HARD_CAP = 200


class ConfigError(Exception):
    pass


class InvariantFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    max_n: int = 100
    window: int = construction.DEFAULT_WINDOW
    seed: int = 0
    fmt: str = "json"
    output: str | None = None
    allow_large: bool = False

    def check_cap(self):
        cap = int(os.environ.get("RAUZYLAB_MAXN", HARD_CAP))
        if self.max_n > cap and not self.allow_large:
            raise ConfigError(f"max-n {self.max_n} exceeds block cap {cap} (set RAUZYLAB_MAXN or pass --allow-large)")
        if self.max_n < 1 or self.window < 1:
            raise ConfigError("max-n and window must be positive")


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands ----------------------------------------------------------------

def cmd_diagram(args, cfg: RunConfig):
    try:
        start = perm.MarkedPermutation.parse(args.perm)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not start.is_irreducible():
        raise ConfigError(f"reducible permutation {start.label()}")
    d = perm.extended_rauzy_class(start)
    if cfg.fmt == "dot":
        _emit(d.to_dot(), cfg.output)
    elif cfg.fmt == "json":
        _emit(_json(d.to_json()), cfg.output)
    else:
        raise ConfigError("diagram supports --format dot or json")


def cmd_cn(args, cfg: RunConfig):
    n = args.n
    if n < 1:
        raise ConfigError("--n must be >= 1")
    cfg.max_n = n
    cfg.check_cap()
    C = construction.c_matrix(n)
    H = construction.h_product(n)
    det_c, det_h = rauzy.determinant(C), rauzy.determinant(H)
    if det_c != 1 or det_h != 1:
        raise InvariantFailure(f"unimodularity: det C_{n} = {det_c}, det H_{n} = {det_h}")
    wa, wb = construction.block_words(n)
    _emit(_json({
        "n": n,
        "word": wa + wb,
        "A": rauzy.matrix_to_json(construction.a_matrix(n)),
        "B": rauzy.matrix_to_json(construction.b_matrix(n)),
        "C": rauzy.matrix_to_json(C),
        "H": rauzy.matrix_to_json(H),
        "det_C": det_c,
        "det_H": det_h,
    }), cfg.output)


def cmd_limit(args, cfg: RunConfig):
    cfg.max_n = args.n
    cfg.check_cap()
    box = construction.lambda_enclosure(args.n)
    _emit(_json({
        "n": args.n,
        "intervals": [[to_pq(lo), to_pq(hi)] for lo, hi in box],
        "midpoints": [to_float((lo + hi) / 2) for lo, hi in box],
        "widths": [to_float(hi - lo) for lo, hi in box],
    }), cfg.output)


def cmd_asymptotics(args, cfg: RunConfig):
    cfg.check_cap()
    if cfg.max_n < 5:
        raise ConfigError("--max-n must be >= 5")
    con = construction.Construction(cfg.max_n, cfg.window)
    rows = construction.asymptotics_report(cfg.max_n, con)
    _emit(_csv(construction.CSV_FIELDS, (r.as_tuple() for r in rows)), cfg.output)


def cmd_trajectory(args, cfg: RunConfig):
    cfg.check_cap()
    if cfg.max_n < 4:
        raise ConfigError("--max-n must be >= 4")
    con = construction.Construction(cfg.max_n + 1, cfg.window)
    try:
        rep = geodesic.overlap_certificate(3, cfg.max_n, con)
    except geodesic.WindowError as exc:
        raise InvariantFailure(f"window: {exc}") from exc
    if cfg.fmt == "json":
        _emit(_json(rep.to_json()), cfg.output)
        return
    if rep.n0 is None:
        raise InvariantFailure("overlap: no tail of overlapping windows")
    lo, hi = rep.covered()
    t0 = lo if args.t_start is None else args.t_start
    t1 = hi if args.t_end is None else args.t_end
    seed = cfg.seed if args.random else None
    try:
        tr = geodesic.systole_bound_trajectory(t0, t1, args.samples, rep, con, seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(_csv(("t", "bound", "activeN", "window_s", "window_t"), tr.rows()), cfg.output)


def cmd_orbit(args, cfg: RunConfig):
    cfg.max_n = args.n
    cfg.check_cap()
    con = construction.Construction(1, 1)
    lam, _ = con.lambda_tail(0, args.n)
    T = iet.IntervalExchange.from_marked(lam, construction.PI0)
    x0 = T.total * args.x0
    rows = []
    steps = 10
    while steps <= args.steps:
        rows.append((steps, iet.discrepancy(T, x0, steps, args.bins)))
        steps *= 10
    _emit(_csv(("steps", "discrepancy"), rows), cfg.output)


def cmd_verify(args, cfg: RunConfig):
    names = args.suite or list(verify.SUITES)
    unknown = [s for s in names if s not in verify.SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {sorted(verify.SUITES)}")
    if args.inject_fault:
        perm._FAULTS.add(args.inject_fault)
    try:
        result = verify.run(names, seed=cfg.seed)
    finally:
        perm._FAULTS.discard(args.inject_fault)
    _emit(_json(result), cfg.output)
    if not result["passed"]:
        first = next(f for s in result["suites"].values() for f in s["failures"])
        raise InvariantFailure(first)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rauzylab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("json",), default_fmt="json"):
        sp.add_argument("--format", dest="fmt", choices=fmt_choices, default=default_fmt)
        sp.add_argument("--output", "-o")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--allow-large", action="store_true", help="lift the block-count cap")
        return sp

    sp = common(sub.add_parser("diagram", help="extended Rauzy diagram"), ("dot", "json"), "dot")
    sp.add_argument("--perm", default="1234|4321", help='marked permutation "nu0|nu1"')
    sp.set_defaults(func=cmd_diagram)

    sp = common(sub.add_parser("cn", help="exact block matrices A_n, B_n, C_n and H_n"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_cn)

    sp = common(sub.add_parser("limit", help="enclosure of the limit length vector"))
    sp.add_argument("--n", type=int, default=40)
    sp.set_defaults(func=cmd_limit)

    sp = common(sub.add_parser("asymptotics", help="per-block asymptotic quantities"), ("csv",), "csv")
    sp.add_argument("--max-n", type=int, default=100)
    sp.add_argument("--window", type=int, default=construction.DEFAULT_WINDOW)
    sp.set_defaults(func=cmd_asymptotics)

    sp = common(sub.add_parser("trajectory", help="systole bound along the flow (csv) or overlap certificate (json)"),
                ("csv", "json"), "csv")
    sp.add_argument("--max-n", type=int, default=200)
    sp.add_argument("--window", type=int, default=construction.DEFAULT_WINDOW)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--t-start", type=float)
    sp.add_argument("--t-end", type=float)
    sp.add_argument("--random", action="store_true", help="seeded uniform sample times instead of a grid")
    sp.set_defaults(func=cmd_trajectory)

    sp = common(sub.add_parser("orbit", help="orbit discrepancy series for the limit exchange"), ("csv",), "csv")
    sp.add_argument("--n", type=int, default=40, help="blocks used for the length estimate")
    sp.add_argument("--steps", type=int, default=10**6)
    sp.add_argument("--bins", type=int, default=100)
    sp.add_argument("--x0", type=float, default=0.0, help="start point as a fraction of the interval")
    sp.set_defaults(func=cmd_orbit)

    sp = common(sub.add_parser("verify", help="run the invariant suites"))
    sp.add_argument("--suite", action="append", help="suite name; repeatable (default: all)")
    sp.add_argument("--inject-fault", choices=("op_a",), help="test hook: corrupt a Rauzy move")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        command=args.command,
        max_n=getattr(args, "max_n", 100),
        window=getattr(args, "window", construction.DEFAULT_WINDOW),
        seed=args.seed,
        fmt=args.fmt,
        output=args.output,
        allow_large=args.allow_large,
    )
    try:
        args.func(args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantFailure, construction.ConstructionError, ZipperConsistencyError) as exc:
        print(f"error: invariant {exc}".replace("\n", " "), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
