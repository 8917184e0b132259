"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or a violated
precondition.  Rationals travel as "p/q" strings; floats appear only in
display columns.  Timings go to stderr so that stdout and emitted files are
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import certificates as C
from .constructions import ConstructionError, example1, example2, example3, witness_bounds
from .fourier import POINT, SymmetricProfile, fourier, inverse_fourier, profile_to_json
from .krawtchouk import kraw_roots, krawtchouk_table
from .lp import build_lp, extract_certificate, simplex_solve
from .oracle import DEFAULT_CAP, exact_A, validate_bound, write_table_csv
from .proplab import GridSpec, barrier_search, write_barrier_csv
from .scalar import format_exact, jpl1_rate, packing_rate


class UsageError(Exception):
    pass


def _write(text: str, path=None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _report_json(rep: C.BoundReport) -> dict:
    return {"n": rep.n, "d": rep.d, "bound": format_exact(rep.bound), "rate": rep.rate,
            "method": rep.method, "feasible": rep.feasible}


def cmd_kraw(args) -> int:
    n = args.n
    if args.roots is not None:
        roots = kraw_roots(n, args.roots)
        _write(_json({"n": n, "m": args.roots, "roots": list(roots.roots),
                      "tolerance": roots.tolerance}), args.output)
        return 0
    table = krawtchouk_table(n)
    if args.format == "json":
        _write(_json({"n": n, "values": [list(r) for r in table.values]}), args.output)
        return 0
    lines = ["s,i,value\n"] + [f"{s},{i},{table[s, i]}\n"
                               for s in range(n + 1) for i in range(n + 1)]
    _write("".join(lines), args.output)
    return 0


def cmd_fourier(args) -> int:
    values = [Fraction(v) for v in args.values.split(",")]
    n = len(values) - 1 if args.n is None else args.n
    if len(values) != n + 1:
        raise UsageError(f"need n + 1 = {n + 1} values, got {len(values)}")
    side = "fourier" if args.inverse else POINT
    p = SymmetricProfile(n, side, values)
    out = inverse_fourier(p) if args.inverse else fourier(p)
    _write(_json(profile_to_json(out)), args.output)
    return 0


def cmd_certify(args) -> int:
    try:
        with open(args.path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}")
    try:
        cert = C.certificate_from_json(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed certificate: {exc}")
    if not cert.feasible:
        print(f"infeasible: {cert.verdict}", file=sys.stderr)
        _write(_json(C.certificate_to_json(cert, obj.get("method", "delsarte"))))
        return 1
    try:
        rep = C.delsarte_bound(cert, obj.get("method", "delsarte"))
    except C.UndefinedBoundError as exc:
        print(f"feasible but {exc}", file=sys.stderr)
        return 1
    _write(_json(_report_json(rep)))
    return 0


def cmd_construct(args) -> int:
    n, d = args.n, args.d
    try:
        if args.example == 1:
            w = example1(n, d)
        elif args.example == 2:
            if args.m is None:
                raise UsageError("--example 2 needs -m")
            w = example2(n, d, args.m)
        else:
            if args.lambda0 is None:
                raise UsageError("--example 3 needs --lambda0 FILE")
            with open(args.lambda0) as fh:
                w = example3(C.loads_certificate(fh.read()))
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    verdict = C.verify_witness(w)
    if not verdict:
        print(f"witness fails verification: {verdict}", file=sys.stderr)
        return 1
    bounds = witness_bounds(w, check=False)
    out = {"witness": w.label, "tau": format_exact(w.tau), "rho": format_exact(w.rho),
           "jpl1": jpl1_rate(w.d / w.n),
           "bounds": {k: _report_json(v) for k, v in sorted(bounds.items())}}
    _write(_json(out))
    if args.emit:
        cert = C.dh_construct(w, check=False)
        _write(C.dumps_certificate(cert, method=f"dh:{w.label}"), args.emit)
    return 0


def cmd_lp(args) -> int:
    t0 = time.perf_counter()
    lp = build_lp(args.n, args.d, max_n=args.max_n)
    sol = simplex_solve(lp)
    elapsed = time.perf_counter() - t0
    print(f"lp n={args.n} d={args.d}: {sol.status}, {sol.pivot_count} pivots, {elapsed:.3f}s",
          file=sys.stderr)
    if sol.status != "optimal":
        return 1
    cert = extract_certificate(sol, args.n, args.d)
    text = C.dumps_certificate(cert, method="lp")
    if args.emit:
        _write(text, args.emit)
        log = {"n": args.n, "d": args.d, "status": sol.status, "objective": format_exact(sol.objective),
               "pivot_count": sol.pivot_count, "pivots": [list(p) for p in sol.pivots]}
        _write(_json(log))
    else:
        _write(text)
    return 0


def cmd_rates(args) -> int:
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    lines = ["delta,jpl1,packing\n"]
    for k in range(args.grid + 1):
        delta = k / (2 * args.grid)
        lines.append(f"{delta!r},{jpl1_rate(delta)!r},{packing_rate(delta)!r}\n")
    _write("".join(lines), args.output)
    return 0


def cmd_explore(args) -> int:
    d = args.d if args.d is not None else round(args.delta * args.n)
    grid = GridSpec(values=tuple(range(args.grid_max + 1)),
                    families=tuple(args.families.split(",")), near=args.near)
    jobs = args.jobs or os.cpu_count() or 1
    t0 = time.perf_counter()
    res = barrier_search(args.n, d, args.r, grid, jobs=jobs)
    print(f"explore: {len(res.rows)} rows, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    write_barrier_csv(res, args.output or sys.stdout)
    if res.best is not None:
        print(f"best verified rate {res.best.rate:.6f} (margin {res.best.margin:+.6f}) "
              f"at {res.best.coeffs}", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    results = [exact_A(n, d, cap=args.cap, cache_path=args.cache)
               for n in range(1, args.max_n + 1) for d in range(1, n + 1)]
    write_table_csv(results, args.output or sys.stdout)
    return 0


def cmd_selftest(args) -> int:
    """A quick pass over the main invariants; exit 1 on the first failure."""
    rng = random.Random(args.seed)
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))
        print(f"{'ok  ' if ok else 'FAIL'} {name}")

    from .fourier import convolve, inner, point_profile
    for n in (1, 5, 12, 20):
        check(f"krawtchouk invariants n={n}", krawtchouk_table(n).check_invariants())
        f = point_profile(n, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n + 1)])
        check(f"inverse(fourier(f)) = f, n={n}", inverse_fourier(fourier(f)) == f)
        fh = fourier(f)
        from .fourier import fourier_inner
        check(f"Parseval n={n}", inner(f, f) == fourier_inner(fh, fh))
        g = point_profile(n, [rng.randint(0, 3) for _ in range(n + 1)])
        check(f"convolution theorem n={n}", fourier(convolve(f, g)) == fourier(f) * fourier(g))
    for n in range(1, min(args.max_n, DEFAULT_CAP) + 1):
        for d in range(1, n + 1):
            sol = simplex_solve(build_lp(n, d))
            rep = C.delsarte_bound(extract_certificate(sol, n, d))
            check(f"lp bound >= A({n},{d})", validate_bound(rep).status == "pass")
    for n, d in ((20, 4), (31, 7)):
        w = example1(n, d)
        cert = C.dh_construct(w)
        check(f"example 1 certificate n={n} d={d}", cert.feasible)
    failed = [name for name, ok in checks if not ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delsarte", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kraw", help="Krawtchouk tables and roots")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--roots", type=int, metavar="M", help="zeros of K_M instead of the table")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_kraw)

    s = sub.add_parser("fourier", help="transform a symmetric profile")
    s.add_argument("--values", required=True, help="comma-separated rationals, weight 0 first")
    s.add_argument("-n", type=int)
    s.add_argument("--inverse", action="store_true", help="input is a Fourier profile")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fourier)

    s = sub.add_parser("certify", help="verify a certificate JSON file")
    s.add_argument("path")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("construct", help="build an example witness and its bounds")
    s.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-d", type=int, required=True)
    s.add_argument("-m", type=int)
    s.add_argument("--lambda0", help="certificate file used as g in example 3")
    s.add_argument("--emit", help="write the constructed certificate here")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("lp", help="exact optimal certificate")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-d", type=int, required=True)
    s.add_argument("--max-n", type=int, default=32)
    s.add_argument("--emit", help="write the certificate here and the solve log to stdout")
    s.set_defaults(func=cmd_lp)

    s = sub.add_parser("rates", help="JPL1 and packing rate curves as CSV")
    s.add_argument("--grid", type=int, default=100)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_rates)

    s = sub.add_parser("explore", help="barrier search sweep")
    s.add_argument("-n", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("-d", type=int)
    g.add_argument("--delta", type=float)
    s.add_argument("-r", type=int, default=2)
    s.add_argument("--grid-max", type=int, default=49)
    s.add_argument("--families", default="ball")
    s.add_argument("--near", type=float, default=0.05)
    s.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("oracle", help="exact A(n, d) table as CSV")
    s.add_argument("--max-n", type=int, default=DEFAULT_CAP)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--cache", help="on-disk CSV cache")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("selftest", help="quick invariant suite")
    s.add_argument("--max-n", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
