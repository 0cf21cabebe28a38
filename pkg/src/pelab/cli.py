"""Command-line harness: family reports, verification suites, audits, sweeps.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 internal audit mismatch (two exact routes to one quantity disagreed,
which would indicate a bug, never a property of the inputs).

All randomness is drawn from numpy's default PCG64 generator seeded with
--seed, so identical flags give byte-identical output.  Exact rationals
are printed as p/q; floats are printed with full round-trip precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import family as fam
from . import limits as lim
from .audits import render_table, run_audits
from .family import AuditMismatch, FamilyParams
from .geom import curvature_report, page_pope_chart, rescaled_chart
from .laurent import LaurentPoly

USAGE_ERROR = 2
VERIFY_ERROR = 1
AUDIT_ERROR = 3


class UsageError(ValueError):
    pass


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r} ({exc})") from exc


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _add_param_flags(sub, include_r1: bool = True):
    sub.add_argument("--n", type=int, default=1, help="complex dimension of the base (default 1)")
    sub.add_argument("--lambda", dest="lam", type=_rat, help="base Einstein constant lam > 0")
    sub.add_argument("--c", type=_rat, help="fibre scale c > 0")
    sub.add_argument("--Lambda", type=_rat, help="total Einstein constant Lambda < 0")
    if include_r1:
        sub.add_argument("--r1", type=_rat, help="root radius r1 >= 1")
    sub.add_argument("--k", type=int, help="catalogue shortcut: lam=(2n+2)/k, c=1/k, Lambda=-(2n+1)")


def _params_from_args(args, r1=None) -> FamilyParams:
    r1 = r1 if r1 is not None else getattr(args, "r1", None)
    if args.k is not None:
        if args.lam is not None or args.c is not None or args.Lambda is not None:
            raise UsageError("--k replaces --lambda/--c/--Lambda; do not combine them")
        if r1 is None:
            raise UsageError("--r1 is required")
        return fam.cpn_catalogue(args.n, args.k, r1)
    missing = [name for name, v in (("--lambda", args.lam), ("--c", args.c), ("--Lambda", args.Lambda), ("--r1", r1)) if v is None]
    if missing:
        raise UsageError(f"missing required flags: {', '.join(missing)}")
    try:
        return FamilyParams(n=args.n, lam=args.lam, c=args.c, Lambda=args.Lambda, r1=r1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_output(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- family --------------------------------------------------------------


def cmd_family(args) -> int:
    params = _params_from_args(args)
    report = fam.family_report(params)
    if args.format == "json":
        _write_output(json.dumps(report, indent=2) + "\n", args.output)
        return 0
    lines = [
        f"params: n={params.n} lambda={params.lam} c={params.c} Lambda={params.Lambda} r1={params.r1}",
        f'P = "{report["P_text"]}"',
    ]
    if params.is_conic:
        conic = report["conic"]
        lines += [
            "conic case (r1 = 1):",
            f"  alpha continuation (lam/2) = {conic['alpha_continuation']}",
            f"  theta coefficient = {conic['theta_coeff']}",
            f"  base coefficient derived = {conic['base_coeff_derived']}",
            f"  base coefficient printed = {conic['base_coeff_paper']}",
            f"  leading jet constant = {conic['k_leading']} (quoted form {conic['k_quoted']})",
        ]
    else:
        p = fam.solve_profile(params)
        em = fam.edge_model(params, p)
        _, alpha_sq, beta_sq_jet = fam.expand_at_edge(params, p)
        lines += [
            f"edge model (r1 = {params.r1}):",
            f"  alpha = {em.alpha} (cone angle 2*pi*alpha)",
            f"  beta_sq derived = {em.beta_sq_derived}",
            f"  beta_sq printed = {em.beta_sq_paper}",
            f"  jet oracle: alpha_sq = {alpha_sq}, beta_sq = {beta_sq_jet}",
            f"  scale = {em.scale}",
        ]
    lines += [
        f"berger_coeff = {report['berger_coeff']}",
        f"z_scale = {report['z_scale']}",
        f"positivity: {'PASS' if report['positivity'] == 'pass' else 'FAIL'}",
    ]
    _write_output("\n".join(lines) + "\n", args.output)
    return 0


# -- verify --------------------------------------------------------------


def _sample_points(chart_kind: str, rng, count: int, lower: float, upper: float):
    pts = []
    for _ in range(count):
        radial = rng.uniform(lower, upper)
        psi = rng.uniform(0.05, 2 * math.pi - 0.05)
        disk_r = 0.9 * math.sqrt(rng.uniform(0.0, 1.0))
        ang = rng.uniform(0.0, 2 * math.pi)
        pts.append((radial, psi, disk_r * math.cos(ang), disk_r * math.sin(ang)))
    return pts


def cmd_verify(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    rng = np.random.default_rng(args.seed)
    if args.chart == "page-pope":
        params = _params_from_args(args)
        if params.n != 1:
            raise UsageError("the chart verification covers n = 1")
        chart = page_pope_chart(params)
        lam_check = args.Lambda_check if args.Lambda_check is not None else float(params.Lambda)
        r1f = float(params.r1)
        points = _sample_points("page-pope", rng, args.points, r1f + 0.1, 10.0)
        label = chart.label
    else:
        rho1_sq = _resolve_rho1_sq(args)
        profile = lim.rescaled_profile(1, args.profile_lambda, rho1_sq)
        chart = rescaled_chart(profile)
        lam_check = args.Lambda_check if args.Lambda_check is not None else 0.0
        rho1f = profile.rho1
        lower, upper = (1.1 * rho1f, 5.0 * rho1f) if rho1f > 0 else (0.5, 3.0)
        points = _sample_points("rescaled", rng, args.points, lower, upper)
        label = chart.label

    worst = None
    rows = []
    for pt in points:
        rep = curvature_report(chart, pt, lam=lam_check)
        rows.append(rep)
        if worst is None or rep.einstein_residual > worst.einstein_residual:
            worst = rep
    max_res = worst.einstein_residual
    max_bianchi = max(r.bianchi_max for r in rows)
    max_sym = max(r.symmetry_max for r in rows)
    ok = max_res <= args.tol

    if args.format == "json":
        payload = {
            "chart": label,
            "points": args.points,
            "seed": args.seed,
            "Lambda_check": lam_check,
            "tol": args.tol,
            "max_einstein_residual": max_res,
            "max_bianchi": max_bianchi,
            "max_symmetry": max_sym,
            "pass": ok,
            "worst_point": list(worst.point),
        }
        _write_output(json.dumps(payload, indent=2) + "\n", args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([*chart.coords, "einstein_residual", "scalar", "bianchi_max", "symmetry_max"])
        for rep in rows:
            writer.writerow([_fmt(x) for x in rep.point] + [_fmt(rep.einstein_residual), _fmt(rep.scalar), _fmt(rep.bianchi_max), _fmt(rep.symmetry_max)])
        _write_output(buf.getvalue(), args.output)
    else:
        lines = [
            f"chart: {label}",
            f"points: {args.points} seed: {args.seed} Lambda_check: {_fmt(lam_check)}",
            f"max einstein residual: {max_res!r} (tol {args.tol!r})",
            f"max bianchi: {max_bianchi!r}",
            f"max symmetry: {max_sym!r}",
            "PASS" if ok else f"FAIL at point {worst.point}",
        ]
        _write_output("\n".join(lines) + "\n", args.output)
    return 0 if ok else VERIFY_ERROR


def _resolve_rho1_sq(args) -> Fraction:
    spec = args.rho1
    if spec == "derived":
        return lim.rho1_limit(args.n).derived_sq
    if spec == "paper":
        return lim.rho1_limit(args.n).paper_sq
    return _rat(spec) ** 2


# -- audit ---------------------------------------------------------------


def cmd_audit(args) -> int:
    rows = run_audits()
    if args.format == "json":
        _write_output(json.dumps([r.as_dict() for r in rows], indent=2) + "\n", args.output)
    else:
        _write_output(render_table(rows) + "\n", args.output)
    return 0


# -- sweep ---------------------------------------------------------------


def _sweep_values(args):
    if args.count < 2:
        raise UsageError("--count must be >= 2")
    if not args.start < args.stop:
        raise UsageError("--start must be < --stop")
    if args.param == "k":
        lo, hi = int(args.start), int(args.stop)
        if Fraction(lo) != args.start or Fraction(hi) != args.stop:
            raise UsageError("k sweeps need integer --start/--stop")
        if args.count != hi - lo + 1:
            raise UsageError("k sweeps need --count equal to stop - start + 1")
        return [Fraction(k) for k in range(lo, hi + 1)]
    if args.spacing == "linear":
        step = (args.stop - args.start) / (args.count - 1)
        return [args.start + i * step for i in range(args.count)]
    if args.start <= 0:
        raise UsageError("log spacing requires --start > 0")
    lo, hi = math.log(float(args.start)), math.log(float(args.stop))
    return [math.exp(lo + i * (hi - lo) / (args.count - 1)) for i in range(args.count)]


def _sweep_params(args, value) -> FamilyParams:
    exact = value if isinstance(value, Fraction) else Fraction(repr(value)) if isinstance(value, float) else Fraction(value)
    if args.param == "r1":
        return _params_from_args(args, r1=exact)
    if args.param == "t":
        return _params_from_args(args, r1=1 + exact)
    if args.param == "c":
        if args.c is not None:
            raise UsageError("--c conflicts with sweeping c")
        if args.k is not None:
            raise UsageError("--k fixes c; it cannot be combined with sweeping c")
        if args.lam is None or args.Lambda is None or args.r1 is None:
            raise UsageError("sweeping c needs --lambda, --Lambda, --r1")
        return FamilyParams(n=args.n, lam=args.lam, c=exact, Lambda=args.Lambda, r1=args.r1)
    if args.param == "k":
        if args.k is not None or args.lam is not None or args.c is not None or args.Lambda is not None:
            raise UsageError("sweeping k fixes lam, c, Lambda; only --n and --r1 may be given")
        if args.r1 is None:
            raise UsageError("sweeping k needs --r1")
        return fam.cpn_catalogue(args.n, int(exact), args.r1)
    raise UsageError(f"unknown sweep parameter {args.param!r}")


def cmd_sweep(args) -> int:
    if args.param in ("r1", "t") and args.r1 is not None:
        raise UsageError(f"--r1 conflicts with sweeping {args.param}")
    values = _sweep_values(args)
    header = ["r1", "c", "alpha", "beta_sq_derived", "berger_coeff", "z_scale"]
    if args.verify:
        header.append("max_einstein_residual")
    rows = []
    for idx, value in enumerate(values):
        params = _sweep_params(args, value)
        if params.is_conic:
            alpha = fam.cone_angle_conic_limit(params)
            beta_sq = None
        else:
            p = fam.solve_profile(params)
            em = fam.edge_model(params, p)
            alpha, beta_sq = em.alpha, em.beta_sq_derived
        row = [
            params.r1,
            params.c,
            alpha,
            beta_sq,
            fam.conformal_infinity(params).berger_coeff,
            fam.z_scale(params),
        ]
        if args.verify:
            if params.n != 1:
                raise UsageError("--verify inside a sweep covers n = 1 only")
            chart = page_pope_chart(params)
            rng = np.random.default_rng(args.seed * 100003 + idx)
            pts = _sample_points("page-pope", rng, args.points, float(params.r1) + 0.1, 10.0)
            row.append(max(curvature_report(chart, pt, lam=float(params.Lambda)).einstein_residual for pt in pts))
        rows.append(row)

    if args.format == "json":
        payload = [{name: _fmt(v) if not isinstance(v, float) else v for name, v in zip(header, row)} for row in rows]
        _write_output(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        _write_output(buf.getvalue(), args.output)
    return 0


# -- limit ---------------------------------------------------------------


def _parse_rho_grid(text: str, n: int):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("rho grid range must be start:stop:count")
        start, stop, count = _rat(parts[0]), _rat(parts[1]), int(parts[2])
        if count < 2 or not start < stop:
            raise UsageError("rho grid range needs start < stop and count >= 2")
        step = (stop - start) / (count - 1)
        return [start + i * step for i in range(count)]
    return [_rat(v) for v in text.split(",") if v]


def _default_rho_grid(n: int):
    rho1 = math.sqrt(lim.rho1_limit(n).derived_sq)
    return [Fraction(repr(round(rho1 * (1.2 + 1.8 * j / 24), 9))) for j in range(25)]


def cmd_limit(args) -> int:
    ts = [_rat(v) for v in args.t_list.split(",") if v]
    grid = _parse_rho_grid(args.rho_grid, args.n) if args.rho_grid else _default_rho_grid(args.n)
    try:
        comparison = lim.limit_comparison(args.n, ts, grid)
    except (lim.DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc

    if args.format == "json":
        payload = {
            "rows": [
                {"t": str(t), "rho": str(rho), "dev_drho2": d1, "dev_theta2": d2, "dev_base": float(d3)}
                for t, rho, d1, d2, d3 in comparison.rows
            ],
            "summary": comparison.summary(),
        }
        _write_output(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t", "rho", "dev_drho2", "dev_theta2", "dev_base"])
    for t, rho, d1, d2, d3 in comparison.rows:
        writer.writerow([_fmt(t), _fmt(rho), _fmt(d1), _fmt(d2), _fmt(float(d3))])
    _write_output(buf.getvalue(), args.output)
    if args.summary_output:
        with open(args.summary_output, "w", encoding="utf-8") as fh:
            json.dump(comparison.summary(), fh, indent=2)
            fh.write("\n")
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pelab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p_family = subs.add_parser("family", help="closed-form data of one family member")
    _add_param_flags(p_family)
    p_family.add_argument("--format", choices=["text", "json"], default="text")
    p_family.add_argument("--output", help="write to file instead of stdout")
    p_family.set_defaults(func=cmd_family)

    p_verify = subs.add_parser("verify", help="numerical Einstein verification at sampled points")
    _add_param_flags(p_verify)
    p_verify.add_argument("--chart", choices=["page-pope", "rescaled"], default="page-pope")
    p_verify.add_argument("--rho1", default="derived", help="rescaled chart inner radius: derived, paper, or a number")
    p_verify.add_argument("--profile-lambda", dest="profile_lambda", type=_rat, default=Fraction(2), help="profile constant for the rescaled chart (2 canonical, 4 flat)")
    p_verify.add_argument("--points", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--tol", type=float, default=1e-6)
    p_verify.add_argument("--Lambda-check", dest="Lambda_check", type=float, help="override the Einstein constant used in the residual")
    p_verify.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p_verify.add_argument("--output", help="write to file instead of stdout")
    p_verify.set_defaults(func=cmd_verify)

    p_audit = subs.add_parser("audit", help="printed vs derived formula audit table")
    p_audit.add_argument("--format", choices=["text", "json"], default="text")
    p_audit.add_argument("--output", help="write to file instead of stdout")
    p_audit.set_defaults(func=cmd_audit)

    p_sweep = subs.add_parser("sweep", help="parameter sweep to CSV/JSON")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--param", choices=["r1", "c", "t", "k"], required=True)
    p_sweep.add_argument("--start", type=_rat, required=True)
    p_sweep.add_argument("--stop", type=_rat, required=True)
    p_sweep.add_argument("--count", type=int, required=True)
    p_sweep.add_argument("--spacing", choices=["linear", "log"], default="linear")
    p_sweep.add_argument("--verify", action="store_true", help="add a max einstein residual column (n = 1)")
    p_sweep.add_argument("--points", type=int, default=5, help="verification points per row")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--output", help="write to file instead of stdout")
    p_sweep.set_defaults(func=cmd_sweep)

    p_limit = subs.add_parser("limit", help="rescaled-limit deviation table")
    p_limit.add_argument("--n", type=int, default=1)
    p_limit.add_argument("--t-list", dest="t_list", default="0.1,0.01,0.001")
    p_limit.add_argument("--rho-grid", dest="rho_grid", help="comma list of rho values or start:stop:count")
    p_limit.add_argument("--format", choices=["csv", "json"], default="csv")
    p_limit.add_argument("--output", help="write to file instead of stdout")
    p_limit.add_argument("--summary-output", dest="summary_output", help="write the JSON summary to a file (csv format only)")
    p_limit.set_defaults(func=cmd_limit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (AuditMismatch, lim.AuditError) as exc:
        print(f"audit mismatch: {exc}", file=sys.stderr)
        return AUDIT_ERROR
    except (fam.NoSmoothMetric, fam.ConicCase, fam.EdgeCase, lim.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
