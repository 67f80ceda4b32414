"""Command-line front end.

Subcommands: params, kernel, riesz, transform, verify, dispersive.
Exit codes: 0 ok, 2 invalid arguments, 3 domain error, 4 verification
failure, 5 numeric nonconvergence.  All output is deterministic: CSV with
'.' decimal and 17 significant digits, JSON with sorted keys.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import DomainError, NonconvergenceError, BudgetExceededError
from .spectral import make_params, admissible_p, OPERATOR_TAGS
from .transforms import make_log_grid, RadialFunction, bessel_transform, hankel_transform
from .spectral import mode_indices
from .waveop import KernelQuery, kernel_ktilde, kernel_quadrature_oracle
from .riesz import kernel_riesz, kernel_even, inverse_mellin_oracle
from .errors import ResonanceError
from .harmonics import make_angular_grid, Field, dispersive_experiment
from .verify import run_suite

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4
EXIT_NONCONV = 5

_ENV_PREFIX = "INVSQW_"


def _fmt(x):
    return f"{x:.17g}"


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _env_float(name, default):
    val = os.environ.get(_ENV_PREFIX + name)
    return float(val) if val else default


def cmd_params(args):
    params = make_params(args.d, args.a)
    obj = json.loads(params.to_json())
    obj["intervals"] = {}
    for tag in ("W", "W*"):
        iv = admissible_p(params, tag)
        obj["intervals"][tag] = {"lo": iv.lo, "hi": iv.hi, "empty": iv.empty}
    if args.alpha_grid:
        lo, hi, n = args.alpha_grid.split(":")
        sweep = []
        for alpha in np.linspace(float(lo), float(hi), int(n)):
            row = {"alpha": float(alpha)}
            for tag in ("R^alpha", "R^-beta"):
                try:
                    iv = admissible_p(params, tag, order=alpha)
                    row[tag] = {"lo": iv.lo, "hi": iv.hi, "empty": iv.empty}
                except DomainError:
                    row[tag] = None
            sweep.append(row)
        obj["alpha_sweep"] = sweep
    _emit(json.dumps(obj, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _parse_s_list(text):
    return [float(tok) for tok in text.split(",")]


def cmd_kernel(args):
    params = make_params(args.d, args.a)
    rows = []
    for k in range(args.k_max + 1):
        for s in sorted(_parse_s_list(args.s_list)):
            try:
                q = KernelQuery(params=params, k=k, p=args.p, r=args.r, s=s)
                val = kernel_ktilde(q)
                status = "ok"
            except DomainError:
                rows.append((k, args.r, s, "", "", "", "diagonal"))
                continue
            except NonconvergenceError:
                rows.append((k, args.r, s, "", "", "", "diverged"))
                continue
            if args.oracle:
                try:
                    orc = kernel_quadrature_oracle(q)
                    gap = abs(val - orc) / max(abs(orc), 1e-300)
                    rows.append((k, args.r, s, _fmt(val), _fmt(orc), _fmt(gap), status))
                except NonconvergenceError:
                    rows.append((k, args.r, s, _fmt(val), "", "", "oracle-diverged"))
            else:
                rows.append((k, args.r, s, _fmt(val), "", "", status))
    lines = ["k,r,s,ktilde,oracle,relgap,status"]
    for k, r, s, v, o, g, st in rows:
        lines.append(f"{k},{_fmt(r)},{_fmt(s)},{v},{o},{g},{st}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_riesz(args):
    params = make_params(args.d, args.a)
    rows = []
    half = args.alpha / 2.0
    even = abs(half - round(half)) < 1e-12
    for k in range(args.k_max + 1):
        for s in sorted(_parse_s_list(args.s_list)):
            try:
                if even:
                    m = int(round(half))
                    if m == 0:
                        val = 0.0
                    else:
                        val = kernel_even(params, k, m, args.r, s)
                else:
                    val = kernel_riesz(params, k, args.alpha, args.r, s)
                status = "ok"
            except ResonanceError:
                rows.append((k, args.r, s, "", "", "", "resonant"))
                continue
            except DomainError:
                rows.append((k, args.r, s, "", "", "", "diagonal"))
                continue
            except NonconvergenceError:
                rows.append((k, args.r, s, "", "", "", "diverged"))
                continue
            if args.oracle and not even:
                try:
                    orc = inverse_mellin_oracle(params, k, args.alpha, args.r / s)
                    gap = abs(val - orc) / max(abs(orc), 1e-300)
                    rows.append((k, args.r, s, _fmt(val), _fmt(orc), _fmt(gap), status))
                except NonconvergenceError:
                    rows.append((k, args.r, s, _fmt(val), "", "", "oracle-diverged"))
            else:
                rows.append((k, args.r, s, _fmt(val), "", "", status))
    lines = ["k,r,s,series,oracle,relgap,status"]
    for k, r, s, v, o, g, st in rows:
        lines.append(f"{k},{_fmt(r)},{_fmt(s)},{v},{o},{g},{st}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_transform(args):
    params = make_params(args.d, args.a)
    idx = mode_indices(params, args.k)
    grid = make_log_grid(args.rmin, args.rmax, args.n, args.d)
    if args.profile == "gaussian":
        f = RadialFunction(grid=grid, values=np.exp(-grid.r ** 2 / 2.0))
    else:
        f = RadialFunction(grid=grid, values=grid.r ** args.k * np.exp(-grid.r ** 2 / 2.0))
    if args.kind == "bessel":
        g = bessel_transform(idx.mu_k, f)
    else:
        g = hankel_transform(idx.nu_k, f)
    lines = ["lambda,value"]
    for lam, v in zip(g.grid.r, g.values):
        lines.append(f"{_fmt(lam)},{_fmt(v)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    report = run_suite(args.suite)
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def cmd_dispersive(args):
    params = make_params(args.d, args.a)
    ang = make_angular_grid(params.d, 0)
    rad = make_log_grid(1e-2, 100.0, args.n, params.d)
    # width chosen so the free evolution has the closed-form sup-norm
    # envelope (1 + t^2)^{-d/4} * sup|f|
    g = np.exp(-rad.r ** 2 / 4.0)
    fld = Field(angular=ang, radial=rad,
                values=np.outer(np.ones(ang.n_nodes), g))
    t_list = _parse_s_list(args.t_list)
    rows = dispersive_experiment(params, fld, t_list)
    lines = ["t,sup,scaled"]
    for t, s, sc in rows:
        lines.append(f"{_fmt(t)},{_fmt(s)},{_fmt(sc)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="invsqwave",
        description="Wave-operator and Riesz-kernel computations for the "
                    "inverse-square Schroedinger operator.",
        epilog="Exit codes: 0 ok, 2 invalid arguments, 3 domain error, "
               "4 verification failure, 5 numeric nonconvergence. "
               f"Tolerance knobs accept {_ENV_PREFIX}* environment overrides.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="spectral scalars and admissible 1/p intervals")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--alpha-grid", help="lo:hi:n sweep of Riesz orders")
    p.add_argument("--out")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("kernel", help="wave-operator kernel rows, optionally vs oracle")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--s-list", default="0.3,0.5,0.7,1.5,2.0")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("riesz", help="Riesz kernel rows, optionally vs contour oracle")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--s-list", default="0.3,0.5,0.7,1.5,2.0")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_riesz)

    p = sub.add_parser("transform", help="Bessel/Hankel transform of a test profile")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--kind", choices=("bessel", "hankel"), default="bessel")
    p.add_argument("--profile", choices=("gaussian", "moment"), default="gaussian")
    p.add_argument("--rmin", type=float, default=1e-4)
    p.add_argument("--rmax", type=float, default=40.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", default="all",
                   choices=("specfun", "transforms", "kernels", "riesz",
                            "multiplier", "harmonics", "all"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dispersive", help="sup-norm decay of exp(-itL_a) on Gaussian data")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--t-list", default="1,2,5,10,20,50")
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dispersive)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (NonconvergenceError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
