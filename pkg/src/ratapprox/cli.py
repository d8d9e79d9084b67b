"""Command-line front end.

    ratapprox approx  --fun EXPR DOMAIN [options] [--json out.json] [--emit poles.csv]
    ratapprox check   --json fit.json
    ratapprox poles   --json fit.json [--emit poles.csv]
    ratapprox minimax --json fit.json [--iterations N] [--output refined.json]

DOMAIN is one of --interval A B, --circle CX CY R, --polygon FILE or
--points FILE; --exterior or --interior turns a closed curve into a region.
Exit status: 0 on success, 1 when the approximation fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import domain as dom
from . import engine
from .engine import Approximation, EngineConfig
from .expr import ParseError, parse_expression
from .serialize import approximation_to_dict, dump, fit_from_dict, fit_to_dict, history_from_dict, load, pairs, unpairs


class UsageError(Exception):
    pass


def read_complex_csv(path) -> np.ndarray:
    """Two columns ``re,im`` (a single column is read as real); a header row is optional."""
    out = []
    with open(path, newline="") as fh:
        for k, row in enumerate(csv.reader(fh)):
            row = [c.strip() for c in row if c.strip()]
            if not row:
                continue
            try:
                vals = [float(c) for c in row[:2]]
            except ValueError:
                if k == 0:
                    continue
                raise UsageError(f"{path}: cannot read row {k + 1}: {row}")
            out.append(complex(vals[0], vals[1] if len(vals) > 1 else 0.0))
    return np.array(out, dtype=complex)


# domains ---------------------------------------------------------------------


def domain_spec(args) -> dict:
    given = [name for name in ("interval", "circle", "polygon", "points") if getattr(args, name) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --interval, --circle, --polygon, --points")
    kind = given[0]
    side = "exterior" if args.exterior else "interior" if args.interior else None
    if kind == "interval":
        spec = {"kind": "interval", "endpoints": list(map(float, args.interval))}
    elif kind == "circle":
        cx, cy, r = map(float, args.circle)
        if not r > 0:
            raise UsageError("circle radius must be positive")
        spec = {"kind": "circle", "center": [cx, cy], "radius": r}
    elif kind == "polygon":
        spec = {"kind": "polygon", "vertices": pairs(read_complex_csv(args.polygon))}
    else:
        spec = {"kind": "points", "points": pairs(read_complex_csv(args.points))}
    if side is not None:
        if kind in ("interval", "points"):
            raise UsageError(f"--{side} needs a closed curve (--circle or --polygon)")
        spec["side"] = side
    return spec


def build_domain(spec: dict):
    kind = spec["kind"]
    if kind == "interval":
        a, b = spec["endpoints"]
        if a == b:
            raise UsageError("interval endpoints must differ")
        return dom.Segment(a, b)
    if kind == "points":
        return unpairs(spec["points"])
    if kind == "circle":
        curve = dom.Circle(complex(*spec["center"]), spec["radius"])
    elif kind == "polygon":
        v = unpairs(spec["vertices"])
        if len(v) < 3:
            raise UsageError("a polygon needs at least three vertices")
        curve = dom.polygon(v)
    else:
        raise UsageError(f"unknown domain kind {kind!r}")
    side = spec.get("side")
    if side is None:
        return curve
    return dom.exterior(curve) if side == "exterior" else dom.interior(curve)


# output ----------------------------------------------------------------------


def _poles_rows(fh, poles, residues):
    w = csv.writer(fh)
    w.writerow(["re", "im", "residue_re", "residue_im"])
    for p, c in zip(poles, residues):
        w.writerow([repr(float(p.real)), repr(float(p.imag)), repr(float(c.real)), repr(float(c.imag))])


def write_poles_csv(path, poles, residues):
    with open(path, "w", newline="") as fh:
        _poles_rows(fh, poles, residues)


def write_history_csv(path, history):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "max_err", "allowed"])
        for r in history.records:
            w.writerow([r.n, repr(float(r.max_err)), "" if r.allowed is None else int(bool(r.allowed))])


def summary(a: Approximation, max_err: float) -> str:
    m, n = a.degrees()
    return f"{type(a.fit).__name__} rational function of type ({m},{n}); max error is {max_err:.2e}"


def rebuild(d: dict) -> Approximation:
    """Approximation from a saved record, re-sampling the stored expression."""
    if "fun" not in d or "domain" not in d:
        raise UsageError("saved fit lacks the expression or domain needed here")
    f = parse_expression(d["fun"])
    domain = build_domain(d["domain"])
    fit = fit_from_dict(d)
    t = unpairs(d.get("test_points", []))
    nodes = getattr(fit, "nodes", np.zeros(0, dtype=complex))
    samples = np.concatenate([t, nodes])
    params = None if d.get("params") is None else np.asarray(d["params"], dtype=float)
    return Approximation(f, domain, fit, history_from_dict(d), samples, f(samples), params, None)


# commands --------------------------------------------------------------------


def cmd_approx(args) -> int:
    if args.fun is None:
        raise UsageError("--fun is required")
    try:
        f = parse_expression(args.fun)
    except ParseError as exc:
        raise UsageError(f"--fun: {exc}")
    spec = domain_spec(args)
    domain = build_domain(spec)
    if args.poles is not None:
        zeta = read_complex_csv(args.poles)
        a = engine.approximate_prescribed(f, domain, zeta, degree=args.degree)
    else:
        cfg = EngineConfig(method=args.method, tol=args.tol, max_iter=args.max_iter, stagnation=args.stagnation)
        if isinstance(domain, np.ndarray):
            a = engine.approximate_discrete(f, domain, cfg)
        else:
            a = engine.approximate_continuum(f, domain, cfg)
    _, _, max_err = engine.check(a)
    print(summary(a, max_err))
    record = approximation_to_dict(a, max_err, fun=args.fun, domain=spec)
    if args.json:
        dump(record, args.json)
    if args.emit:
        write_poles_csv(args.emit, unpairs(record["poles"]), unpairs(record["residues"]))
    if args.emit_history:
        write_history_csv(args.emit_history, a.history)
    return 0


def cmd_check(args) -> int:
    d = _load(args)
    a = rebuild(d)
    _, _, max_err = engine.check(a)
    print(summary(a, max_err))
    return 0


def cmd_poles(args) -> int:
    d = _load(args)
    if "poles" in d:
        poles, res = unpairs(d["poles"]), unpairs(d["residues"])
    else:
        table = fit_to_dict(fit_from_dict(d))
        poles, res = unpairs(table["poles"]), unpairs(table["residues"])
    if args.emit:
        write_poles_csv(args.emit, poles, res)
    else:
        _poles_rows(sys.stdout, poles, res)
    return 0


def cmd_minimax(args) -> int:
    d = _load(args)
    if d.get("method") != "aaa":
        raise UsageError("minimax refines barycentric (aaa) fits only")
    a = rebuild(d)
    refined = engine.minimax(a, iterations=args.iterations)
    _, _, max_err = engine.check(refined)
    print(summary(refined, max_err))
    record = approximation_to_dict(refined, max_err, fun=d["fun"], domain=d["domain"])
    if args.output:
        dump(record, args.output)
    if args.emit:
        write_poles_csv(args.emit, unpairs(record["poles"]), unpairs(record["residues"]))
    return 0


def _load(args) -> dict:
    if args.json is None:
        raise UsageError("--json FILE (a saved fit) is required")
    try:
        return load(args.json)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.json}: {exc}")


# parser ----------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratapprox", description="Greedy rational approximation in the complex plane.")
    sub = p.add_subparsers(dest="command", required=True)

    ap = sub.add_parser("approx", help="fit an expression on a domain")
    ap.add_argument("--fun", help="expression in z, e.g. 'log(1+i+5i*z)'")
    ap.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"))
    ap.add_argument("--circle", nargs=3, type=float, metavar=("CX", "CY", "R"))
    ap.add_argument("--polygon", metavar="FILE", help="CSV of vertices re,im")
    ap.add_argument("--points", metavar="FILE", help="CSV of sample points re,im")
    side = ap.add_mutually_exclusive_group()
    side.add_argument("--exterior", action="store_true", help="approximate on the exterior of the closed curve")
    side.add_argument("--interior", action="store_true", help="approximate on the interior of the closed curve")
    ap.add_argument("--method", choices=["aaa", "thiele"], default="aaa")
    ap.add_argument("--tol", type=float, default=1e-13)
    ap.add_argument("--max-iter", type=int, default=150)
    ap.add_argument("--stagnation", type=int, default=10)
    ap.add_argument("--poles", metavar="FILE", help="CSV of prescribed poles; fits partial fractions")
    ap.add_argument("--degree", type=int, default=10, help="polynomial degree with --poles")
    ap.add_argument("--json", metavar="FILE", help="write the result here")
    ap.add_argument("--emit", metavar="FILE", help="write the pole/residue table as CSV")
    ap.add_argument("--emit-history", metavar="FILE", help="write the convergence history as CSV")
    ap.set_defaults(run=cmd_approx)

    cp = sub.add_parser("check", help="re-evaluate a saved fit against its expression")
    cp.add_argument("--json", metavar="FILE")
    cp.set_defaults(run=cmd_check)

    pp = sub.add_parser("poles", help="pole and residue table of a saved fit")
    pp.add_argument("--json", metavar="FILE")
    pp.add_argument("--emit", metavar="FILE")
    pp.set_defaults(run=cmd_poles)

    mp = sub.add_parser("minimax", help="Lawson refinement of a saved barycentric fit")
    mp.add_argument("--json", metavar="FILE")
    mp.add_argument("--iterations", type=int, default=20)
    mp.add_argument("--output", metavar="FILE", help="write the refined fit here")
    mp.add_argument("--emit", metavar="FILE")
    mp.set_defaults(run=cmd_minimax)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ratapprox: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # engine failure: report and exit 1
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
