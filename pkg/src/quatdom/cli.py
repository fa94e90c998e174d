"""quatdom analyze | sweep | bounds | invariants"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from .bounds import compare_bounds
from .domain import CertificationError, FordConfig, default_tolerance
from .lattice import invalid_reason, is_valid_pair
from .reports import (analysis_report, bounds_report, bounds_summary, build,
                      invariants_report, render_svg, rows_to_csv, sweep_row, write_json)


def valid_pairs(p_max: int) -> list:
    return [(p, a) for p in range(3, p_max + 1) for a in range(2, p) if is_valid_pair(p, a)]


def read_pairs(path) -> list:
    """One pair per line, "p a" or "p,a"; '#' starts a comment."""
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            p, a = (int(t) for t in line.split())
            pairs.append((p, a))
    return sorted(set(pairs))


def _config(args) -> FordConfig:
    return FordConfig(tol=args.tol if args.tol is not None else default_tolerance(),
                      eps_k=args.eps_k, vol_norm=args.vol_norm)


def _check_pair(p, a) -> str | None:
    reason = invalid_reason(p, a)
    if reason:
        print(f"error: invalid pair ({p}, {a}): {reason}", file=sys.stderr)
    return reason


def cmd_analyze(args) -> int:
    if _check_pair(args.p, args.a):
        return 2
    status = 0
    try:
        D = build(args.p, args.a, args.method, _config(args))
    except CertificationError as err:
        D = err.domain
        print(f"certification failed: {err}", file=sys.stderr)
        status = 1
        if D is None:
            return status
    print(analysis_report(D, args.eps_k, args.vol_norm))
    if args.svg:
        render_svg(D, args.svg)
    if args.json:
        write_json(D, args.json)
    return status


def _row_job(job):
    p, a, config, timings = job
    return sweep_row(p, a, config, timings)


def cmd_sweep(args) -> int:
    pairs = read_pairs(args.pairs) if args.pairs else valid_pairs(args.p_max)
    bad = [(p, a) for p, a in pairs if _check_pair(p, a)]
    if bad:
        return 2
    config = _config(args)
    jobs = [(p, a, config, args.timings) for p, a in pairs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_row_job, jobs))
    else:
        rows = [_row_job(j) for j in jobs]
    rows.sort(key=lambda r: (r.p, r.a))
    text = rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bounds(args) -> int:
    config = _config(args)
    if args.p is not None or args.a is not None:
        if args.p is None or args.a is None:
            print("error: give both -p and -a, or neither", file=sys.stderr)
            return 2
        pairs = [(args.p, args.a)]
    else:
        pairs = valid_pairs(args.p_max)
    reports = []
    status = 0
    for p, a in pairs:
        if _check_pair(p, a):
            return 2
        try:
            D = build(p, a, "ford", config)
        except CertificationError as err:
            print(f"({p}, {a}): {err}", file=sys.stderr)
            status = 1
            continue
        rep = compare_bounds(D, args.eps_k, args.vol_norm)
        reports.append(rep)
        print(bounds_report(rep))
    print(bounds_summary(reports))
    return status


def cmd_invariants(args) -> int:
    if _check_pair(args.p, args.a):
        return 2
    print(invariants_report(args.p, args.a))
    return 0


def _common(sp):
    sp.add_argument("--eps-k", type=float, default=3.0, help="k in the epsilon cutoff (> 2)")
    sp.add_argument("--tol", type=float, default=None,
                    help="geometric tolerance (default $QUATDOM_TOL or 1e-10)")
    sp.add_argument("--vol-norm", choices=["hyperbolic", "arithmetic"], default="hyperbolic")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quatdom",
                                 description="Fundamental domains for the norm-one groups "
                                             "of the orders Z[1, i, j, ij] in (a, p / Q).")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="build and certify one domain")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-a", type=int, required=True)
    sp.add_argument("--method", choices=["ford", "dirichlet"], default="ford")
    sp.add_argument("--svg", metavar="PATH")
    sp.add_argument("--json", metavar="PATH")
    _common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("sweep", help="one CSV row per pair")
    sp.add_argument("--p-max", type=int, default=37)
    sp.add_argument("--pairs", metavar="FILE")
    sp.add_argument("--csv", metavar="PATH")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timings", action="store_true",
                    help="fill runtime_ms (otherwise 0, keeping output byte-stable)")
    _common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bounds", help="exact values against Chalk and Johansson")
    sp.add_argument("-p", type=int)
    sp.add_argument("-a", type=int)
    sp.add_argument("--p-max", type=int, default=37)
    _common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("invariants", help="arithmetic of the algebra and order")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-a", type=int, required=True)
    sp.set_defaults(func=cmd_invariants)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
