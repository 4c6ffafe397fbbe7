"""Command-line interface ``gcmera``.

Every subcommand writes either a CSV table or a plain-text report ending in
a fenced block of ``key: value`` lines. Exit codes: 0 success, 1 invalid
input, 2 numerical failure, 3 a check did not pass.
"""
import argparse
import io
import math
import sys

import numpy as np

from . import __version__
from .alpha_models import ModelParams, cmera_state, fixed_point_state, massive_target, massless_target
from .correlators import CorrelatorSpec, column_label, subtracted_correlator
from .diagnostics import appendix_b_norm, gauge_violation_decay, uv_coincidence_limit
from .exceptions import DomainError, NumericalError, ValidationError
from .flow import fixed_point_residual, flow_exponent, profile_for
from .hamiltonians import build_parent, build_parent_fixed_point, verify_parent
from .lattice import build_lattice, compare_with_continuum

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_CHECK = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def _scale(text):
    if str(text).lower() in ("inf", "infinity", "fp", "fixed_point"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid scale {text!r}") from None


def _grid(lo, hi, points, log):
    if not (lo < hi):
        raise ValidationError("grid bounds must be strictly increasing")
    if points < 2:
        raise ValidationError("a grid needs at least two points")
    if log:
        if lo <= 0:
            raise ValidationError("log grids need a positive lower bound")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def _positive(value, name):
    if not value > 0 or not math.isfinite(value):
        raise ValidationError(f"{name} must be positive")
    return value


def write_csv(out, header, rows, comments=(), trailing=()):
    out.write(",".join(header) + "\n")
    for line in comments:
        out.write(f"# {line}\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")
    for line in trailing:
        out.write(f"# {line}\n")


def write_report(out, title, lines, block):
    out.write(f"{title}\n\n")
    for line in lines:
        out.write(f"{line}\n")
    out.write("\n```\n")
    for key, value in block.items():
        out.write(f"{key}: {fmt(value)}\n")
    out.write("```\n")


# -- subcommands -------------------------------------------------------------


def cmd_alpha(args, out):
    n = 1 if args.family == "magic" else args.n
    if n < 2 and args.family == "gen":
        raise ValidationError("the generalized family needs --n >= 2")
    if not math.isfinite(args.s) or args.s < 0:
        raise ValidationError("--s must be finite and >= 0")
    params = ModelParams(d=args.d, cutoff=_positive(args.cutoff, "--lambda"), s=args.s, n=n)
    k = _grid(args.kmin, args.kmax, args.points, args.log)
    state = cmera_state(params)
    profile = profile_for(n, params.cutoff)
    closed_par, closed_perp = state.alpha_par(k), state.alpha_perp(k)
    quad_par, quad_perp = [], []
    for kk in k:
        for pol, store in (("longitudinal", quad_par), ("transverse", quad_perp)):
            e, _ = flow_exponent(profile, pol, kk, params.s)
            store.append(params.cutoff * math.exp(-2.0 * e))
    quad_par, quad_perp = np.array(quad_par), np.array(quad_perp)
    m2 = params.mass**2
    product = closed_par * closed_perp
    dev_par = float(np.max(np.abs(quad_par / closed_par - 1.0)))
    dev_perp = float(np.max(np.abs(quad_perp / closed_perp - 1.0)))
    dev_prod = float(np.max(np.abs(product / m2 - 1.0)))
    passed = max(dev_par, dev_perp) <= args.tol
    rows = zip(k, closed_par, closed_perp, quad_par, quad_perp, product, np.full_like(k, m2))
    write_csv(
        out,
        ["k", "alpha_par", "alpha_perp", "alpha_par_quadrature", "alpha_perp_quadrature",
         "alpha_product", "mass_squared"],
        rows,
        comments=[f"family: {args.family}", f"n: {n}", f"lambda: {fmt(params.cutoff)}", f"s: {fmt(params.s)}"],
        trailing=[
            f"max_rel_dev_par: {fmt(dev_par)}",
            f"max_rel_dev_perp: {fmt(dev_perp)}",
            f"max_rel_dev_product: {fmt(dev_prod)}",
            f"check: {'pass' if passed else 'fail'} (tol {fmt(args.tol)})",
        ],
    )
    return EXIT_OK if passed else EXIT_CHECK


def cmd_correlator(args, out):
    cutoff = _positive(args.cutoff, "--lambda")
    x = _grid(args.xmin, args.xmax, args.points, not args.linear)
    if x[0] <= 0:
        raise ValidationError("--xmin must be positive")
    spec = CorrelatorSpec(args.field, args.polarization, "position_subtracted")
    scales = sorted(set(args.s or [1.0, 2.0, 3.0]) - {math.inf})
    columns, labels, deltas = [], [], []

    def add(label, state):
        corr = subtracted_correlator(state, spec, tol=args.tol, rel_tol=args.rel_tol)
        labels.append(label)
        deltas.append((label, corr.delta_coeff, corr.lap_delta_coeff))
        columns.append(np.atleast_1d(corr.regular(x)))

    for s in scales:
        add(column_label(s), cmera_state(ModelParams(d=args.d, cutoff=cutoff, s=s, n=args.n)))
    add("fixed_point", fixed_point_state(ModelParams(d=args.d, cutoff=cutoff, s=math.inf, n=args.n)))
    base = ModelParams(d=args.d, cutoff=cutoff)
    if args.target == "massless":
        add("target", massless_target(base))
    elif args.target == "massive":
        mass = args.target_mass if args.target_mass is not None else cutoff * math.exp(-max(scales))
        add("target", massive_target(base, _positive(mass, "--target-mass")))

    comments = [
        f"field: {spec.field}", f"polarization: {spec.polarization}", f"d: {args.d}",
        f"lambda: {fmt(cutoff)}", f"n: {args.n}",
        "convention: f(x) = (2 pi)^-d int d^dk exp(i k.x) F(k); regular part only",
    ]
    comments += [f"delta_coeff[{lab}]: {fmt(c0)}" for lab, c0, _ in deltas]
    comments += [f"lap_delta_coeff[{lab}]: {fmt(c2)}" for lab, _, c2 in deltas]
    trailing = []
    if "target" in labels:
        ref = columns[labels.index("target")]
        far = x * cutoff >= 10.0
        if np.any(far):
            col = "fixed_point" if args.target == "massless" else column_label(max(scales))
            other = columns[labels.index(col)]
            dev = float(np.max(np.abs(other[far] / ref[far] - 1.0)))
            trailing.append(f"max_rel_dev[{col} vs target, x*lambda>=10]: {fmt(dev)}")
    write_csv(out, ["x"] + labels, zip(x, *columns), comments=comments, trailing=trailing)
    return EXIT_OK


def cmd_flow_check(args, out):
    n = 1 if args.family == "magic" else args.n
    if n < 2 and args.family == "gen":
        raise ValidationError("the generalized family needs --n >= 2")
    cutoff = _positive(args.cutoff, "--lambda")
    profile = profile_for(n, cutoff)
    k = _grid(args.kmin, args.kmax, args.kpoints, True)
    s_grid = _grid(0.0, args.smax, args.spoints, False)
    dev = {"longitudinal": 0.0, "transverse": 0.0}
    sum_rule = 0.0
    prod = 0.0
    for s in s_grid:
        state = cmera_state(ModelParams(d=1, cutoff=cutoff, s=float(s), n=n))
        m2 = state.mass_**2
        for kk in k:
            e_par, _ = flow_exponent(profile, "longitudinal", kk, s)
            e_perp, _ = flow_exponent(profile, "transverse", kk, s)
            sum_rule = max(sum_rule, abs(e_par + e_perp - s))
            for pol, e in (("longitudinal", e_par), ("transverse", e_perp)):
                q = cutoff * math.exp(-2.0 * e)
                dev[pol] = max(dev[pol], abs(q / float(state.alpha(pol, kk)) - 1.0))
            prod = max(prod, abs(float(state.alpha_par(kk) * state.alpha_perp(kk)) / m2 - 1.0))
    fp = fixed_point_state(ModelParams(d=1, cutoff=cutoff, s=math.inf, n=n))
    ode = max(abs(fixed_point_residual(profile, fp.alpha_perp, kk)) for kk in k)
    passed = max(dev.values()) <= args.tol and sum_rule <= 1e-10 and ode <= 1e-8 and prod <= 1e-12
    block = {
        "passed": passed,
        "family": args.family,
        "n": n,
        "max_rel_dev_par": dev["longitudinal"],
        "max_rel_dev_perp": dev["transverse"],
        "max_exponent_sum_error": sum_rule,
        "max_product_rule_error": prod,
        "max_fixed_point_ode_residual": ode,
        "tol": args.tol,
    }
    write_report(
        out,
        "gcmera flow-check",
        [
            f"Quadrature of the flow integral against the closed-form spectra on "
            f"{len(k)} momenta x {len(s_grid)} scales.",
            "Sum rule: exponents of both polarizations add to s.",
            "Fixed-point ODE: k dln(alpha_perp)/dk = 2 g_perp(k).",
        ],
        block,
    )
    return EXIT_OK if passed else EXIT_CHECK


def cmd_verify_parent(args, out):
    cutoff = _positive(args.cutoff, "--lambda")
    params = ModelParams(d=args.d, cutoff=cutoff, s=args.s, n=1)
    k = _grid(args.kmin, args.kmax, args.points, True)
    if params.is_fixed_point:
        if args.no_regulator:
            raise ValidationError("--no-regulator applies to finite s only")
        state, form = fixed_point_state(params), build_parent_fixed_point(params)
    else:
        state, form = cmera_state(params), build_parent(params, regulated=not args.no_regulator)
    report = verify_parent(state, form, k, tol=args.tol)
    block = {"hamiltonian": form.label, "s": params.s, **report.as_dict()}
    write_report(
        out,
        "gcmera verify-parent",
        [f"Ground state sqrt(b/a) of '{form.label}' against the flow state at s={params.s:g} "
         f"on {len(k)} momenta in [{args.kmin:g}, {args.kmax:g}]."],
        block,
    )
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_diagnose(args, out):
    cutoff = _positive(args.cutoff, "--lambda")
    if args.check == "uv":
        params = ModelParams(d=args.d, cutoff=cutoff, s=args.s, n=args.n)
        report = uv_coincidence_limit(params, args.polarization)
        passed = report.verdict == report.expected
        block = {"passed": passed, **report.as_dict()}
        lines = [f"Coincidence limit of <A A> ({report.polarization}) in d={report.d}, n={report.n}."]
        lines += [f"  K={fmt(K)}  partial={fmt(v)}" for K, v in report.trace[::5]]
        write_report(out, "gcmera diagnose uv", lines, block)
    elif args.check == "gauge":
        s = _grid(args.smin, args.smax, args.points, False)
        report = gauge_violation_decay(ModelParams(d=args.d, cutoff=cutoff), s)
        passed = abs(report.slope + 2.0) <= 1e-6
        block = {"passed": passed, **report.as_dict(), "expected_slope": -2.0}
        lines = ["Large-k plateau of <Pi_par Pi_par> against s."]
        lines += [f"  s={fmt(a)}  plateau={fmt(b)}" for a, b in zip(report.s, report.plateau)]
        write_report(out, "gcmera diagnose gauge", lines, block)
    else:
        s = _grid(args.smin, args.smax, args.points, False)
        norms = np.array([appendix_b_norm(ModelParams(d=1, cutoff=cutoff, s=float(v))) for v in s])
        peak = float(np.max(norms))
        tail = s >= 2.0
        decreasing = bool(np.all(np.diff(norms[tail]) < 0)) if tail.sum() > 1 else True
        at_zero = float(norms[0]) if s[0] == 0.0 else math.nan
        late = s >= 8.0
        late_ratio = float(norms[late][0] / peak) if np.any(late) and peak > 0 else math.nan
        passed = decreasing and (at_zero == 0.0 or math.isnan(at_zero)) and not (late_ratio >= 1e-3)
        block = {
            "passed": passed,
            "norm_at_s0": at_zero,
            "peak_norm": peak,
            "peak_s": float(s[int(np.argmax(norms))]),
            "decreasing_for_s_ge_2": decreasing,
            "ratio_at_s8_to_peak": late_ratio,
        }
        lines = ["L2 norm of the regular part of <Pi Pi> in d=1 against s."]
        lines += [f"  s={fmt(a)}  norm={fmt(b)}" for a, b in zip(s, norms)]
        write_report(out, "gcmera diagnose appendix-b", lines, block)
    return EXIT_OK if passed else EXIT_CHECK


def cmd_oracle(args, out):
    cutoff = _positive(args.cutoff, "--lambda")
    params = ModelParams(d=1, cutoff=cutoff, s=args.s)
    if args.N * args.a_lat * params.mass < 20.0:
        sys.stderr.write("warning: N*a_lat*m(s) < 20; finite-size effects may dominate\n")
    model = build_lattice(args.N, args.a_lat, params, regulated=not args.no_regulator)
    report = compare_with_continuum(model, args.field, (args.rmin, args.rmax), tol=args.tol, r_step=args.rstep)
    block = {"N": args.N, "a_lat": args.a_lat, "s": args.s, "regulated": not args.no_regulator, **report.as_dict()}
    write_report(
        out,
        "gcmera oracle",
        [
            f"Lattice mode sums vs continuum quadrature for field {args.field}, "
            f"separations {args.rmin}..{args.rmax} sites.",
            "The excluded zero mode shifts the lattice sum by -c(0+)/(N a); the comparison adds it back.",
        ],
        block,
    )
    return EXIT_OK if report.passed else EXIT_CHECK


# -- parser ----------------------------------------------------------------------


def _common(p, d=3):
    p.add_argument("--d", type=int, default=d, help="spatial dimension")
    p.add_argument("--lambda", dest="cutoff", type=float, default=1.0, help="cutoff momentum")
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")


def build_parser():
    parser = _Parser(prog="gcmera", description="Gaussian cMERA for free vector bosons.")
    parser.add_argument("--version", action="version", version=f"gcmera {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("alpha", help="closed-form vs quadrature alpha spectra (CSV)")
    _common(p)
    p.add_argument("--family", choices=("magic", "gen"), default="magic")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--kmin", type=float, default=1e-3)
    p.add_argument("--kmax", type=float, default=1e3)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--log", action="store_true", help="logarithmic momentum grid")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("correlator", help="position-space correlators (CSV)")
    _common(p, d=2)
    p.add_argument("--field", choices=("A", "Pi", "B"), default="B")
    p.add_argument("--polarization", default="transverse")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s", type=_scale, action="append", help="scale (repeatable)")
    p.add_argument("--xmin", type=float, default=0.5)
    p.add_argument("--xmax", type=float, default=50.0)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--linear", action="store_true", help="linear distance grid (default log)")
    p.add_argument("--target", choices=("massless", "massive", "none"), default="massless")
    p.add_argument("--target-mass", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_correlator)

    p = sub.add_parser("flow-check", help="flow quadrature, sum rule and fixed-point ODE (report)")
    _common(p, d=1)
    p.add_argument("--family", choices=("magic", "gen"), default="magic")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--kmin", type=float, default=1e-3)
    p.add_argument("--kmax", type=float, default=1e3)
    p.add_argument("--kpoints", type=int, default=25)
    p.add_argument("--smax", type=float, default=10.0)
    p.add_argument("--spoints", type=int, default=11)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_flow_check)

    p = sub.add_parser("verify-parent", help="parent-Hamiltonian ground-state check (report)")
    _common(p)
    p.add_argument("--s", type=_scale, default=1.0, help="scale; 'inf' for the fixed point")
    p.add_argument("--kmin", type=float, default=1e-3)
    p.add_argument("--kmax", type=float, default=1e3)
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--no-regulator", action="store_true", help="drop the UV regulator (negative control)")
    p.set_defaults(func=cmd_verify_parent)

    p = sub.add_parser("diagnose", help="gauge and UV-regularity diagnostics (report)")
    p.add_argument("check", choices=("uv", "gauge", "appendix-b"))
    _common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s", type=float, default=1.0, help="scale for the uv check")
    p.add_argument("--polarization", default="transverse")
    p.add_argument("--smin", type=float, default=None)
    p.add_argument("--smax", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("oracle", help="d=1 lattice oracle vs continuum (report)")
    _common(p, d=1)
    p.add_argument("--N", type=int, default=8192)
    p.add_argument("--a-lat", type=float, default=0.02)
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--field", choices=("A", "Pi"), default="A")
    p.add_argument("--rmin", type=int, default=10)
    p.add_argument("--rmax", type=int, default=200)
    p.add_argument("--rstep", type=int, default=1)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--no-regulator", action="store_true", help="drop 1 + D/lambda^2 from b_j (negative control)")
    p.set_defaults(func=cmd_oracle)
    return parser


_DIAGNOSE_DEFAULTS = {"gauge": (2.0, 8.0, 7), "appendix-b": (0.0, 10.0, 21), "uv": (None, None, None)}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "diagnose":
            lo, hi, pts = _DIAGNOSE_DEFAULTS[args.check]
            args.smin = lo if args.smin is None else args.smin
            args.smax = hi if args.smax is None else args.smax
            args.points = pts if args.points is None else args.points
        for name in ("tol",):
            if hasattr(args, name):
                _positive(getattr(args, name), f"--{name}")
        buffer = io.StringIO()
        code = args.func(args, buffer)
        text = buffer.getvalue()
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w", newline="\n") as fh:
                fh.write(text)
        return code
    except (ValidationError, DomainError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(f"gcmera: error: {exc}\n")
        return EXIT_VALIDATION
    except NumericalError as exc:
        sys.stderr.write(f"gcmera: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        sys.stderr.write(f"gcmera: cannot write output: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
