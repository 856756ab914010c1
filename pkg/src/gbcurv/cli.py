"""Command-line front-end: compute invariants on model specs and run the
verification suites.

Exit codes: 0 all checks passed, 1 a defect failed its tolerance, 2 usage or
parse error.  Identical invocations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curvature as cv
from . import models
from .double_forms import inner, metric_form, power
from .report import InvariantReport, emit
from .verify import SUITES, VAR_EPS

__all__ = ["main", "build_parser"]


def _parse_floats(s):
    return [float(x) for x in s.split(",") if x != ""]


def _parse_ints(s):
    return [int(x) for x in s.split(",") if x != ""]


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gbcurv",
        description="Gauss-Bonnet curvature invariants and lattice verification suites.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    inv = sub.add_parser("invariants", parents=[common],
                         help="curvature invariants of a model tensor")
    inv.add_argument("--model", help="JSON model-spec file")
    inv.add_argument("--kind", choices=("constant_curvature", "random_bianchi",
                                        "random_einstein"))
    inv.add_argument("--n", type=int)
    inv.add_argument("--lambda", dest="lam", type=float, default=1.0)
    inv.add_argument("--seed", type=int, default=0)
    inv.add_argument("--terms", type=int, default=3)
    inv.add_argument("--k", default="1", help="comma-separated orders, e.g. 1,2")
    inv.add_argument("--lovelock-coeffs", default=None,
                     help="comma-separated c0,c2,... for the Lagrangian")
    inv.add_argument("--exact", action="store_true")

    hyp = sub.add_parser("hypersurface", parents=[common],
                         help="mean curvatures and minimality of a hypersurface")
    hyp.add_argument("--kappa", required=True, help="comma-separated principal curvatures")
    hyp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    hyp.add_argument("--k", default="1", help="comma-separated minimality orders")

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("--suite", required=True, choices=tuple(SUITES))
    ver.add_argument("--grid", default=None, help="per-axis sizes, e.g. 12,12,12,12")
    ver.add_argument("--eps", default=None, help="comma-separated eps ladder")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--k", default=None, help="order for single-grid variational runs")
    return ap


def _model_spec_from_args(args):
    if args.model:
        with open(args.model) as fh:
            return models.ModelSpec.from_dict(json.load(fh))
    if not args.kind or args.n is None:
        raise ValueError("need --model FILE or --kind with --n")
    return models.ModelSpec(kind=args.kind, n=args.n, lam=args.lam,
                            seed=args.seed, terms=args.terms)


def cmd_invariants(args):
    spec = _model_spec_from_args(args)
    built = models.build_model(spec, exact=args.exact)
    R = built["R"]
    n = R.n
    report = InvariantReport(model=spec.to_dict(), environment={
        "scalar_mode": "exact" if args.exact else "float"})
    for k in _parse_ints(args.k):
        if 2 * k > n:
            raise ValueError(f"order k={k} needs 2k <= n={n}")
        report.results[f"h{2 * k}"] = float(cv.gauss_bonnet_even(R, k))
        T = cv.einstein_lovelock(R, k)
        g = metric_form(n, T.exact)
        lam_fit = float(inner(T, g)) / n
        residual = float((T - lam_fit * g).norm())
        report.results[f"T{2 * k}"] = {"norm": float(T.norm()), "lambda_fit": lam_fit,
                                       "residual": residual}
    planes = [(i, j) for i in range(n) for j in range(i + 1, n)][:6]
    report.results["sectional_samples"] = {
        f"K({i},{j})": float(cv.sectional_2p(R, 1, (i, j))) for i, j in planes}
    if args.lovelock_coeffs:
        coeffs = _parse_floats(args.lovelock_coeffs)
        report.results["lovelock_lagrangian"] = float(cv.lovelock_lagrangian(R, coeffs))
    return report


def cmd_hypersurface(args):
    kappa = _parse_floats(args.kappa)
    n = len(kappa)
    lam = args.lam
    B, R = models.hypersurface_model(kappa, lam)
    report = InvariantReport(model={"kind": "hypersurface", "kappa": kappa, "lambda": lam})
    report.results["s"] = {f"s{k}": float(cv.mean_curvature_s(B, k, n))
                           for k in range(n + 1)}
    for k in _parse_ints(args.k):
        if 2 * k + 1 > n:
            raise ValueError(f"minimality order k={k} needs 2k+1 <= n={n}")
        defect = cv.minimality_defect(kappa, lam, k)
        report.results[f"h{2 * k + 1}"] = float(cv.gauss_bonnet_odd(R, B, k, n))
        report.results[f"minimality_defect_k{k}"] = float(defect)
        report.results[f"minimal_2k{2 * k}"] = bool(abs(defect) <= 1e-10)
    return report


def cmd_verify(args):
    kwargs = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.suite == "variational":
        eps = tuple(_parse_floats(args.eps)) if args.eps else VAR_EPS
        kwargs["eps"] = eps
        if args.grid:
            sizes = _parse_ints(args.grid)
            if len(set(sizes)) != 1:
                raise ValueError("variational grids are uniform; pass equal sizes")
            n = len(sizes)
            k = int(args.k) if args.k else 1
            kwargs["configs"] = ((n, sizes[0], k),)
        kwargs["workers"] = max(1, int(os.environ.get("GBCURV_THREADS", "1")))
    return SUITES[args.suite](**kwargs)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.subcommand == "invariants":
            report = cmd_invariants(args)
        elif args.subcommand == "hypersurface":
            report = cmd_hypersurface(args)
        else:
            report = cmd_verify(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"gbcurv: error: {e}", file=sys.stderr)
        return 2
    payload = emit(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 0 if report.all_pass() else 1


if __name__ == "__main__":
    raise SystemExit(main())
