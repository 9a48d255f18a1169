"""Command-line interface: solve, certify, curve, oracle.

Exit codes: 0 success (and certificate passed where one is produced),
2 shape-condition failure without --force (also argparse usage errors),
3 certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .construct import (FullParameter, degenerate_design, design_from_record,
                        design_record, rotated_design)
from .ellipsoid import (certify_on_region, pull_back_parameter,
                        push_forward_design, region_from_dict)
from .intensity import CanonicalProblem, check_conditions, parse_family
from .marginal import degenerate_design_flag, solve_x12, x12_infinite_dim
from .verify import brute_force_marginal, certify, grid_argmax_x12

EXIT_OK = 0
EXIT_CONDITIONS = 2
EXIT_CERT_FAILED = 3


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("range must be lo:hi:n")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or hi < lo:
        raise argparse.ArgumentTypeError("range must satisfy lo <= hi, n >= 1")
    return lo, hi, n


def _load_region(spec: str):
    if spec == "ball":
        return None
    prefix = "ellipsoid:"
    if not spec.startswith(prefix):
        raise ValueError("--region must be 'ball' or 'ellipsoid:<path to json>'")
    with open(spec[len(prefix):], encoding="utf-8") as fh:
        return region_from_dict(json.load(fh))


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balldesign",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_beta=True):
        p.add_argument("--model", required=True,
                       help="poisson | negbin:a=A | censor-t1:c=C | "
                            "censor-unif:c=C | censor-exp:rate=R | linear")
        p.add_argument("--k", type=int, required=True, help="dimension")
        if with_beta:
            p.add_argument("--beta", type=_parse_floats, required=True,
                           help="comma-separated beta0,beta1,...,betak")
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--grid", type=int, default=200000)
        p.add_argument("--slack", type=float, default=1e-6)
        p.add_argument("--out", default=None)

    ps = sub.add_parser("solve", help="solve and certify a design")
    common(ps)
    ps.add_argument("--region", default="ball")
    ps.add_argument("--force", action="store_true",
                    help="solve even if the shape conditions fail")

    pc = sub.add_parser("certify", help="re-certify a design JSON file")
    pc.add_argument("design_json")
    pc.add_argument("--grid", type=int, default=200000)
    pc.add_argument("--slack", type=float, default=1e-6)
    pc.add_argument("--region", default="ball")
    pc.add_argument("--out", default=None)

    pv = sub.add_parser("curve", help="x12 as a function of beta1, CSV")
    pv.add_argument("--model", required=True)
    pv.add_argument("--k", type=_parse_ints, default=[2, 3, 4],
                    help="comma-separated dimensions")
    pv.add_argument("--beta0", type=float, default=0.0)
    pv.add_argument("--curve-range", type=_parse_range, default=(0.0, 10.0, 101),
                    help="beta1 grid as lo:hi:n")
    pv.add_argument("--limit-curve", action="store_true",
                    help="append the large-k limit rows (k column 'inf')")
    pv.add_argument("--tol", type=float, default=1e-12)
    pv.add_argument("--out", default=None)

    po = sub.add_parser("oracle", help="brute-force check of the solver")
    common(po)
    po.set_defaults(grid=400)
    return ap


def cmd_solve(args) -> int:
    fam = parse_family(args.model)
    if len(args.beta) != args.k + 1:
        print(f"error: --beta needs {args.k + 1} components for k={args.k}",
              file=sys.stderr)
        return EXIT_CONDITIONS
    region = _load_region(args.region)
    full = FullParameter(np.array(args.beta))
    full_ball = pull_back_parameter(region, full) if region else full
    prob = full_ball.canonical()

    if degenerate_design_flag(prob):
        design_ball = degenerate_design(prob.k)
        x12 = -1.0 / prob.k  # latitude of the non-pole simplex vertices
    else:
        report = check_conditions(fam, prob)
        if not report.all_passed:
            for chk in report.checks:
                if not chk.passed:
                    where = ("" if chk.first_violation_x is None
                             else f" (first at x1 = {chk.first_violation_x:.4f})")
                    print(f"condition {chk.name} failed: {chk.detail}{where}",
                          file=sys.stderr)
            if not args.force:
                print("refusing to solve; pass --force to override",
                      file=sys.stderr)
                return EXIT_CONDITIONS
        sol = solve_x12(fam, prob, args.tol)
        x12 = sol.x12
        design_ball = rotated_design(fam, full_ball, args.tol)

    if region:
        design = push_forward_design(region, design_ball)
        cert = certify_on_region(region, fam, full, design, args.grid, args.slack)
    else:
        design = design_ball
        cert = certify(fam, full, design, args.grid, args.slack)

    record = design_record(design, model=args.model, beta=full.beta, x12=x12,
                           certificate=cert.to_dict())
    _emit(json.dumps(record, indent=2) + "\n", args.out)
    return EXIT_OK if cert.passed else EXIT_CERT_FAILED


def cmd_certify(args) -> int:
    with open(args.design_json, encoding="utf-8") as fh:
        record = json.load(fh)
    fam = parse_family(record["model"])
    full = FullParameter(np.array(record["beta"], dtype=float))
    design = design_from_record(record)
    region = _load_region(args.region)
    if region:
        cert = certify_on_region(region, fam, full, design, args.grid, args.slack)
    else:
        cert = certify(fam, full, design, args.grid, args.slack)
    _emit(json.dumps(cert.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK if cert.passed else EXIT_CERT_FAILED


def cmd_curve(args) -> int:
    fam = parse_family(args.model)
    lo, hi, n = args.curve_range
    betas = np.linspace(lo, hi, n)
    lines = ["model,k,beta1,beta1_transformed,x12"]

    def transformed(b1: float) -> float:
        return b1 / (1.0 + b1)

    for k in args.k:
        for b1 in map(float, betas):
            if b1 == 0.0:
                x12 = -1.0 / k
            else:
                prob = CanonicalProblem(k, args.beta0, b1)
                x12 = solve_x12(fam, prob, args.tol).x12
            lines.append(f"{args.model},{k},{b1!r},{transformed(b1)!r},{x12!r}")
    if args.limit_curve:
        for b1 in map(float, betas):
            x12 = x12_infinite_dim(fam, args.beta0, b1, args.tol)
            lines.append(f"{args.model},inf,{b1!r},{transformed(b1)!r},{x12!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    fam = parse_family(args.model)
    if len(args.beta) != args.k + 1:
        print(f"error: --beta needs {args.k + 1} components for k={args.k}",
              file=sys.stderr)
        return EXIT_CONDITIONS
    full = FullParameter(np.array(args.beta))
    prob = full.canonical()
    sol = solve_x12(fam, prob, args.tol)
    x11, x12, w11 = brute_force_marginal(fam, prob, args.grid, args.grid)
    argmax = grid_argmax_x12(fam, prob, 100000)
    step_x = 2.0 / (args.grid - 1)
    step_w = 1.0 / (args.grid + 1)
    out = [
        f"solver        : x11 = 1, x12 = {sol.x12!r}, w11 = {sol.w11!r} "
        f"({sol.method.value})",
        f"brute force   : x11 = {x11!r}, x12 = {x12!r}, w11 = {w11!r} "
        f"(grid {args.grid}x{args.grid}x{args.grid})",
        f"grid argmax   : x12 = {argmax!r} (100000 levels)",
        f"discrepancies : |dx11| = {abs(x11 - 1.0):.3e}, "
        f"|dx12| = {abs(x12 - sol.x12):.3e}, |dw11| = {abs(w11 - sol.w11):.3e}",
        f"grid steps    : dx = {step_x:.3e}, dw = {step_w:.3e}",
    ]
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": cmd_solve, "certify": cmd_certify,
               "curve": cmd_curve, "oracle": cmd_oracle}[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITIONS


if __name__ == "__main__":
    sys.exit(main())
