"""Batch front-end: ``fockops <subcommand> [flags]``.

Every subcommand validates its parameters first, computes, and writes
``<subcommand>.json`` and/or ``<subcommand>.csv`` (plus ``.svg`` with
``--plot`` where a figure exists) into the output directory, which defaults
to ``$FOCKOPS_OUTPUT_DIR`` or ``./fockops-out``.

Exit codes: 0 success, 1 invalid input, 2 convergence or truncation failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import itertools
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import Lemma13Params, lemma13_extrapolate
from .errors import ConvergenceError, TruncationError, TruncationWarning
from .kernel import Polynomial, reproduce_check
from .measure import build_rule, gaussian_monomial_moment, integrate
from .norms import (
    ParamTriple,
    classify,
    lower_bound_feps,
    reduce_ab,
    schur_certify,
    threshold_norm_estimate,
)
from .operators import RadialOperatorA, radial_correspondence_check
from .output import ResultRecord, write_csv, write_json

EXIT_OK, EXIT_INVALID, EXIT_NUMERICS = 0, 1, 2
ENV_OUTPUT_DIR = "FOCKOPS_OUTPUT_DIR"

RADIAL_PROFILES = {
    "exp": lambda y: np.exp(-y),
    "yexp": lambda y: y * np.exp(-y),
    "indicator": lambda y: (y <= 1.0).astype(float),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:count`` (linear) or ``lo:hi:count:log`` (geometric)."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise argparse.ArgumentTypeError(f"range must be lo:hi:count[:log], got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if count < 1:
        raise argparse.ArgumentTypeError("range count must be positive")
    if len(parts) == 4:
        if lo <= 0 or hi <= 0:
            raise argparse.ArgumentTypeError("log ranges need positive endpoints")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_common(sp):
    sp.add_argument("--out", type=Path, default=None, help=f"output directory (default ${ENV_OUTPUT_DIR} or ./fockops-out)")
    sp.add_argument("--format", choices=("json", "csv", "both"), default="both")
    sp.add_argument("--plot", action="store_true", help="also write an SVG figure where one exists")
    sp.add_argument("--timestamp", action="store_true", help="record the run time in the metadata")


def _add_triple(sp, n_default=1):
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--n", type=int, default=n_default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockops", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fockops {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("moments", help="Gaussian monomial moments: closed form vs quadrature")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--p", type=_float_list, default=[1.0, 2.0, 3.0, 4.0], help="comma-separated exponents")
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--max-entry", type=int, default=6, help="largest m_k per coordinate")
    sp.add_argument("--tol", type=float, default=None)
    _add_common(sp)

    sp = sub.add_parser("verify-reproducing", help="reproducing-formula residuals for monomials")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--radius", type=float, default=2.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_common(sp)

    sp = sub.add_parser("schur-bound", help="Schur-test certificate on the threshold pt = 2s")
    _add_triple(sp)
    _add_common(sp)

    sp = sub.add_parser("norm-estimate", help="norm sandwich [lower, 2^n] on the threshold")
    _add_triple(sp)
    sp.add_argument("--eps", type=float, default=None, help="f_eps parameter (default 2.5e-4*p*t)")
    sp.add_argument("--x-max", type=float, default=None, help="domain of A (default 8000/t)")
    sp.add_argument("--nodes", type=int, default=2000)
    sp.add_argument("--eps-range", type=parse_range, default=parse_range("1e-3:10:9:log"))
    _add_common(sp)

    sp = sub.add_parser("threshold-scan", help="classify boundedness over a (t, s) grid")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--t-range", type=parse_range, required=True)
    sp.add_argument("--s-range", type=parse_range, required=True)
    sp.add_argument("--lower", action="store_true", help="attach lower bounds to bounded cells")
    _add_common(sp)

    sp = sub.add_parser("lemma13-limit", help="extrapolate the double-integral limit as h -> 0")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--c", type=_float_list, default=[1.0])
    sp.add_argument("--h", type=_float_list, default=[1e-2, 1e-3, 1e-4])
    _add_common(sp)

    sp = sub.add_parser("reduce-ab", help="reduce S_{a,b}, T_{a,b} to the one-parameter threshold")
    for name in ("a", "b", "s", "p"):
        sp.add_argument(f"--{name}", type=float, required=True)
    sp.add_argument("--n", type=int, default=1)
    _add_common(sp)

    sp = sub.add_parser("radial-check", help="planar T_t vs the radial operator A")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--profile", choices=sorted(RADIAL_PROFILES), default="exp")
    sp.add_argument("--radii", type=parse_range, default=parse_range("0:3:10"))
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_common(sp)
    return parser


# -- validation ---------------------------------------------------------------


def _positive(name, v):
    if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
        raise ValueError(f"--{name} must be positive and finite, got {v}")


def _validate(args) -> dict:
    """Check every numeric input before any computation; returns the inputs record."""
    cmd = args.command
    if cmd == "moments":
        if args.n not in (1, 2):
            raise ValueError("--n must be 1 or 2 for quadrature")
        _positive("t", args.t)
        if not args.p or any(not p > 0 for p in args.p):
            raise ValueError("--p values must be positive")
        if args.max_entry < 0:
            raise ValueError("--max-entry must be nonnegative")
        tol = args.tol if args.tol is not None else (1e-10 if args.n == 1 else 1e-8)
        if not 0 < tol < 1:
            raise ValueError("--tol must lie in (0, 1)")
        args.tol = tol
        return {"n": args.n, "p": args.p, "t": args.t, "max_entry": args.max_entry, "tol": tol}
    if cmd == "verify-reproducing":
        if args.n != 1:
            raise ValueError("verify-reproducing supports --n 1")
        _positive("t", args.t)
        _positive("radius", args.radius)
        if args.degree < 0 or args.points < 1:
            raise ValueError("--degree must be >= 0 and --points >= 1")
        if not 0 < args.tol < 1:
            raise ValueError("--tol must lie in (0, 1)")
        return {k: getattr(args, k) for k in ("n", "t", "degree", "points", "radius", "seed", "tol")}
    if cmd in ("schur-bound", "norm-estimate"):
        params = ParamTriple(args.p, args.t, args.s)
        if args.n < 1:
            raise ValueError("--n must be positive")
        if not params.on_threshold:
            raise ValueError(f"pt = {params.p * params.t:g} != 2s = {2 * params.s:g}: no finite norm")
        if cmd == "schur-bound" and params.p == 1:
            raise ValueError("p = 1 uses the Fubini bound, not the Schur test")
        args.params = params
        inputs = {"p": args.p, "t": args.t, "s": args.s, "n": args.n}
        if cmd == "norm-estimate":
            if args.eps is not None:
                _positive("eps", args.eps)
            if args.x_max is not None:
                _positive("x-max", args.x_max)
            if args.nodes < 1:
                raise ValueError("--nodes must be positive")
            if np.any(args.eps_range <= 0):
                raise ValueError("--eps-range must be positive")
            inputs.update(eps=args.eps, x_max=args.x_max, nodes=args.nodes, eps_range=args.eps_range)
        return inputs
    if cmd == "threshold-scan":
        ParamTriple(args.p, 1.0, 1.0)
        if args.n < 1:
            raise ValueError("--n must be positive")
        for name, rng in (("t-range", args.t_range), ("s-range", args.s_range)):
            if np.any(rng <= 0):
                raise ValueError(f"--{name} values must be positive")
        return {"p": args.p, "n": args.n, "t_range": args.t_range, "s_range": args.s_range, "lower": args.lower}
    if cmd == "lemma13-limit":
        for c in args.c:
            Lemma13Params(c, args.p, 1.0)
        if len(args.h) < 3:
            raise ValueError("--h needs at least 3 values")
        for h in args.h:
            Lemma13Params(1.0, args.p, h)
        return {"p": args.p, "c": args.c, "h": args.h}
    if cmd == "reduce-ab":
        for name in ("a", "b", "s"):
            _positive(name, getattr(args, name))
        ParamTriple(args.p, 1.0, 1.0)
        return {"a": args.a, "b": args.b, "s": args.s, "p": args.p, "n": args.n}
    if cmd == "radial-check":
        _positive("t", args.t)
        if np.any(args.radii < 0):
            raise ValueError("--radii must be nonnegative")
        if not 0 < args.tol < 1:
            raise ValueError("--tol must lie in (0, 1)")
        return {"t": args.t, "profile": args.profile, "radii": args.radii, "tol": args.tol}
    raise ValueError(f"unknown command {cmd}")


# -- subcommands --------------------------------------------------------------


def _moments(args):
    t = args.t
    rule = build_rule(args.n, t, args.tol)
    mu = rule.measure()
    rows = []
    for m in itertools.product(range(args.max_entry + 1), repeat=args.n):
        for p in args.p:
            exact = gaussian_monomial_moment(m, p, t)
            # separable sampling keeps the n = 2 grid cheap
            f = rule.sample(lambda *z: math.prod(np.abs(zk) ** (p * mk) for zk, mk in zip(z, m)))
            approx = float(integrate(f, mu, rule))
            rows.append({"m": "-".join(map(str, m)), "p": p, "t": t, "closed_form": exact,
                         "quadrature": approx, "rel_err": abs(approx - exact) / exact})
    return {"max_rel_err": max(r["rel_err"] for r in rows), "count": len(rows)}, rows, None


def _reproducing(args):
    rng = np.random.default_rng(args.seed)
    rule = build_rule(1, args.t, args.tol)
    pts = args.radius * np.sqrt(rng.uniform(size=args.points)) * np.exp(2j * np.pi * rng.uniform(size=args.points))
    rows = []
    for i, a in enumerate(pts):
        for k in range(args.degree + 1):
            f = Polynomial.monomial((k,))
            res = reproduce_check(f, a, args.t, rule)
            rows.append({"point": i, "a_re": a.real, "a_im": a.imag, "degree": k, "residual": res,
                         "scaled_residual": res / (1.0 + abs(a) ** k)})
    results = {"max_residual": max(r["residual"] for r in rows),
               "max_scaled_residual": max(r["scaled_residual"] for r in rows)}
    return results, rows, None


def _schur(args):
    cert = schur_certify(args.params, args.n)
    results = {"lambda": cert.lam, "C1": cert.c1, "C2": cert.c2, "bound": cert.bound,
               "max_residual": cert.max_residual, "q": args.params.q}
    rows = [{"sample": i, "residual_z": float(a), "residual_w": float(b)}
            for i, (a, b) in enumerate(zip(cert.residuals_z, cert.residuals_w))]
    return results, rows, None


def _norm_estimate(args):
    params = args.params
    est = threshold_norm_estimate(params, args.n, eps=args.eps, x_max=args.x_max, n_nodes=args.nodes)
    x_max = est.parameters["x_max"]
    A = RadialOperatorA(params.t, x_max, args.nodes)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for eps in args.eps_range:
            rows.append({"eps": float(eps), "ratio": lower_bound_feps(params.t, params.p, float(eps), A)})
    results = {"lower": est.lower, "upper": est.upper, "methods": list(est.methods),
               "f_eps": est.parameters["f_eps"], "power_iteration": est.parameters["power_iteration"],
               "x_max": x_max}

    def plot(path):
        from .plots import ratio_vs_eps

        ratio_vs_eps([r["eps"] for r in rows], [r["ratio"] for r in rows], 2.0, path,
                     title=f"f_eps lower bounds, p={params.p:g}, t={params.t:g}")

    return results, rows, plot


def _threshold_scan(args):
    rows = []
    status = np.empty((args.t_range.size, args.s_range.size), dtype=object)
    for i, t in enumerate(args.t_range):
        for j, s in enumerate(args.s_range):
            params = ParamTriple(args.p, float(t), float(s))
            c = classify(params, args.n, estimate=args.lower)
            status[i, j] = c.status
            row = {"t": float(t), "s": float(s), "status": c.status, "gap": params.threshold_gap}
            if c.status == "bounded":
                row.update(upper=c.estimate.upper, lower=c.estimate.lower if args.lower else None)
            elif c.status == "unbounded":
                w = c.witness
                row.update(family=w.family, route=w.route, x=w.x, k=w.k, a=w.a, ratio=w.ratio, gamma=w.gamma)
            rows.append(row)
    counts = {k: sum(r["status"] == k for r in rows) for k in ("bounded", "unbounded", "inconclusive")}
    columns = ["t", "s", "status", "gap", "upper", "lower", "family", "route", "x", "k", "a", "ratio", "gamma"]

    def plot(path):
        from .plots import boundedness_map

        boundedness_map(args.t_range, args.s_range, status, args.p, path)

    return counts, rows, plot, columns


def _lemma13(args):
    rows, estimates = [], {}
    for c in args.c:
        tab = lemma13_extrapolate(c, args.p, args.h)
        for h, v in zip(tab.hs, tab.values):
            rows.append({"c": c, "h": h, "value": v, "rel_err": abs(v - tab.target) / tab.target})
        estimates[repr(c)] = {"estimate": tab.estimate, "rel_err": tab.rel_error, "monotone": tab.monotone}
    target = (2.0 * math.sqrt(2.0 * math.pi)) ** args.p
    return {"target": target, "by_c": estimates}, rows, None


def _reduce_ab(args):
    t2, s2, cond = reduce_ab(args.a, args.b, args.s, args.p)
    c = classify(ParamTriple(args.p, t2, s2), args.n, estimate=False)
    results = {"t_reduced": t2, "s_reduced": s2, "condition": cond, "classification": c.status}
    row = dict(results)
    if c.status == "unbounded":
        results["witness"] = c.witness
        row.update(family=c.witness.family, ratio=c.witness.ratio)
    elif c.status == "bounded":
        results["upper"] = row["upper"] = c.estimate.upper
    return results, [row], None


def _radial_check(args):
    t = args.t
    G = RADIAL_PROFILES[args.profile]
    bps = (1.0,) if args.profile == "indicator" else ()
    rule = build_rule(1, t, args.tol, breakpoints=[1.0] if bps else ())
    A = RadialOperatorA(t, breakpoints=bps)
    z = args.radii.astype(complex)
    res = radial_correspondence_check(t, G, z, rule, A)
    rows = [{"radius": float(r), "residual": float(e)} for r, e in zip(args.radii, res)]
    return {"max_residual": float(np.max(res))}, rows, None


COMMANDS = {
    "moments": _moments,
    "verify-reproducing": _reproducing,
    "schur-bound": _schur,
    "norm-estimate": _norm_estimate,
    "threshold-scan": _threshold_scan,
    "lemma13-limit": _lemma13,
    "reduce-ab": _reduce_ab,
    "radial-check": _radial_check,
}


def _out_dir(args) -> Path:
    if args.out is not None:
        return args.out
    return Path(os.environ.get(ENV_OUTPUT_DIR, "fockops-out"))


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        inputs = _validate(args)
    except (UsageError, ValueError) as exc:
        print(f"fockops: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        out = COMMANDS[args.command](args)
    except (ConvergenceError, TruncationError) as exc:
        print(f"fockops: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"fockops: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    results, rows, plot = out[:3]
    columns = out[3] if len(out) > 3 else None
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if args.timestamp else None
    record = ResultRecord(args.command, inputs, results, timestamp=stamp, rows=rows)
    out_dir = _out_dir(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if args.format in ("json", "both"):
        written.append(write_json(record, out_dir / f"{args.command}.json"))
    if args.format in ("csv", "both"):
        written.append(write_csv(record, out_dir / f"{args.command}.csv", columns))
    if args.plot and plot is not None:
        path = out_dir / f"{args.command}.svg"
        plot(path)
        written.append(path)
    for path in written:
        print(path)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
