"""Command line surface.

Subcommands
-----------
eval      apply an operator to a built-in test function on a set of points
moments   print moment tables (numeric CSV/JSON or canonical symbolic text)
verify    run the identity suites and report pass/fail with max residuals
converge  run a convergence experiment and emit its CSV report

Exit codes: 0 success; 1 a verify identity failed; 2 invalid flags or
arguments; 3 series truncation or quadrature failure.  Output is
byte-deterministic for identical flags and configuration: floats are
printed with 17 significant digits.

The environment variable JPK_CONFIG may point at a key=value file
overriding the numeric defaults (k_max, tail_tol, quad_rel_tol,
quad_max_subdiv).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import identities, moments, operators
from .basis import JainParams, basis_partial_sum
from .config import SeriesQuadConfig, load_config
from .errors import DomainError, QuadratureError, RangeError, TruncationError
from .exactpoly import ExactPoly
from .functions import BUILTIN_NAMES, builtin_function

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_ARGS = 2
EXIT_NUMERIC_FAILURE = 3


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _parse_x_values(specs: list[str]) -> list[float]:
    values: list[float] = []
    for spec in specs:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError(f"x range must be a:b:steps, got {spec!r}")
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 1:
                raise ValueError(f"x range needs at least one step, got {spec!r}")
            if steps == 1:
                values.append(lo)
            else:
                values.extend(lo + (hi - lo) * i / (steps - 1) for i in range(steps))
        else:
            values.append(float(spec))
    return values


def _config_with_tol(args) -> SeriesQuadConfig:
    cfg = load_config(getattr(args, "config", None))
    tol = getattr(args, "tol", None)
    if tol is not None:
        if not tol > 0:
            raise ValueError(f"--tol must be positive, got {tol}")
        cfg = SeriesQuadConfig(
            k_max=cfg.k_max,
            tail_tol=tol,
            quad_rel_tol=tol,
            quad_max_subdiv=cfg.quad_max_subdiv,
        )
    return cfg


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    cfg = _config_with_tol(args)
    params = JainParams(args.n, args.beta)
    f = builtin_function(args.fn)
    xs = _parse_x_values(args.x or ["1.0"])
    apply = operators.apply_jain if args.op == "jain" else operators.apply_phillips
    lines = ["x,value"]
    for x in xs:
        if x < 0:
            raise ValueError(f"x must be >= 0, got {x}")
        lines.append(f"{_fmt(x)},{_fmt(apply(params, f, x, cfg))}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

_KIND_HELP = {
    "B": "sampling-operator moments",
    "T": "integral-operator moments",
    "mu": "central moments (exact binomial construction)",
    "P": "moment-ratio polynomials in the basis index",
    "f": "exponential-free moment polynomials",
}


def _moment_object(kind: str, r: int):
    if kind == "B":
        if r > 5:
            raise RangeError("sampling-moment table stops at degree 5")
        return moments.jain_moment_closed(r)
    if kind == "T":
        return moments.t_moment_general(r)  # RangeError names the limit itself
    if kind == "mu":
        if r < 1:
            raise RangeError(
                "central moments start at order 1 (order 0 is trivially 1)"
            )
        if r > 5:
            raise RangeError("raw-moment table behind the central moments stops at 5")
        return moments.central_moment_derived(r)
    if kind == "P":
        return moments.ratio_poly_recur(r)
    if kind == "f":
        if r > 5:
            raise RangeError("exponential-free moment table stops at degree 5")
        return moments.expfree_moment_closed(r)
    raise ValueError(f"unknown kind {kind!r}")


def _cmd_moments(args) -> int:
    kind = args.kind
    r_low = 1 if kind == "mu" else 0
    orders = list(range(r_low, args.r_max + 1))
    if not orders:
        raise RangeError("r-max below the first defined order")
    objects = {r: _moment_object(kind, r) for r in orders}
    main_name = "k" if kind == "P" else "x"
    if args.format == "symbolic":
        blocks = [f"# {kind}[{r}]\n{obj.to_text(main_name)}" for r, obj in objects.items()]
        _emit("\n\n".join(blocks) + "\n", args.out)
        return EXIT_OK
    params = JainParams(args.n, args.beta)
    # for kind P the main variable is the basis index; --x supplies it
    values = {
        r: obj.eval(args.x, params.beta, params.n) for r, obj in objects.items()
    }
    if args.format == "csv":
        lines = ["r,value"] + [f"{r},{_fmt(v)}" for r, v in values.items()]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        payload = {
            "kind": kind,
            "n": params.n,
            "beta": params.beta,
            "x": args.x,
            "values": {str(r): v for r, v in values.items()},
        }
        _emit(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_recurrences(report) -> bool:
    ok = True
    K = ExactPoly.main()
    B = ExactPoly.beta()
    OMB = ExactPoly.one_minus_beta()
    worst = "0"
    residual_ok = True
    for r in range(9):
        lhs = moments.ratio_poly_recur(r + 2).times_n_power(2)
        rhs = (OMB * (K - 1) + (r + 2)) * moments.ratio_poly_recur(r + 1).times_n_power(1)
        rhs = rhs + B * (r + 2) * (K - 1) * moments.ratio_poly_recur(r)
        if not (lhs - rhs).is_zero:
            residual_ok = False
            worst = f"r={r}"
    ok &= report("ratio-polynomial three-term recurrence (r=0..8)", residual_ok, worst)
    closed_ok = all(
        moments.ratio_poly_recur(r) == moments.ratio_poly_closed(r) for r in range(6)
    )
    ok &= report("ratio-polynomial closed forms vs recurrence (r<=5)", closed_ok, "exact")
    f_ok = all(
        moments.expfree_moment_recur(r) == moments.expfree_moment_closed(r)
        for r in range(2, 6)
    )
    ok &= report("exponential-free moment recurrence vs closed (r=2..5)", f_ok, "exact")
    t_ok = all(
        moments.t_moment_general(r) == moments.t_moment_closed(r) for r in range(4)
    )
    ok &= report("integral-operator moment construction vs closed (r<=3)", t_ok, "exact")
    lemma_ok = all(
        moments.expfree_moment_closed(r) == moments.t_moment_general(r).poly_part
        for r in range(6)
    )
    ok &= report("exponential-free forms match moment polynomial parts (r<=5)", lemma_ok, "exact")
    cm_ok = all(
        moments.central_moment_closed(r) == moments.central_moment_derived(r)
        for r in (1, 2)
    )
    ok &= report("central-moment table vs binomial construction (r=1,2)", cm_ok, "exact")
    for r in (3, 4, 5):
        diff = moments.central_moment_discrepancy(r)
        if not diff.is_zero:
            print(
                f"NOTE central-moment reference table deviates from the exact "
                f"construction at r={r}; difference:\n{diff.to_text('x')}"
            )
    return ok


def _verify_differential(report, grid: str) -> bool:
    ok = True
    sym_ok = all(identities.t_moment_identity_residual(r).is_zero for r in range(4))
    ok &= report("raw-moment differential identity, exact residual (r=0..3)", sym_ok, "exact")
    beta_ok = all(
        identities.ratio_beta_identity_residual(r).is_zero for r in range(5)
    )
    ok &= report("ratio-polynomial beta-derivative identity, exact residual (r=0..4)", beta_ok, "exact")

    if grid == "small":
        points = [(2.0, 0.5, 3, 1.0)]
        orders = [0, 1]
    else:
        points = [
            (n, beta, k, x)
            for n in (1.0, 5.0)
            for beta in (0.25, 0.5, 0.75)
            for k in (1, 3, 8)
            for x in (0.5, 1.0, 3.0)
        ]
        orders = [0, 1, 2, 3]

    worst_analytic = 0.0
    ratio_rows = []
    fd_ok = True
    for n, beta, k, x in points:
        p = JainParams(n, beta)
        worst_analytic = max(
            worst_analytic,
            identities.check_basis_diff_identity(p, k, x, 0.0, mode="analytic"),
            identities.check_basis_beta_derivative(p, k, x, 0.0, mode="analytic"),
        )
        for check, label in (
            (lambda h: identities.check_basis_diff_identity(p, k, x, h), "basis-x"),
            (
                lambda h: identities.check_basis_beta_derivative(p, k, x, h),
                "basis-beta",
            ),
        ):
            h = 0.02 * min(x, 1.0, beta, 1 - beta)
            r_h, r_half = check(h), check(h / 2)
            if r_h > 1e-14:  # ratio meaningless at roundoff level
                ratio = r_half / r_h
                ratio_rows.append((label, n, beta, k, x, h, ratio))
                if not 0.15 <= ratio <= 0.35:
                    fd_ok = False
                    print(
                        f"FAIL h-halving ratio {ratio:.3f} outside [0.15, 0.35] for "
                        f"{label} at (n={n}, beta={beta}, k={k}, x={x})"
                    )
    for n, beta, _, x in points:
        p = JainParams(n, beta)
        for r in orders:
            worst_analytic = max(
                worst_analytic,
                identities.check_t_moment_diff_identity(p, r, x, 0.0, mode="analytic"),
            )
    ok &= report(
        "analytic-derivative residuals on the grid", worst_analytic < 1e-8,
        f"max {worst_analytic:.3e}",
    )
    ok &= report("finite-difference h-halving ratios near 1/4", fd_ok, f"{len(ratio_rows)} probes")
    return ok


def _cmd_verify(args) -> int:
    failures = []

    def report(name: str, passed: bool, detail: str) -> bool:
        print(f"{'PASS' if passed else 'FAIL'} {name} [{detail}]")
        if not passed:
            failures.append(name)
        return passed

    ok = True
    if args.suite in ("recurrences", "all"):
        ok &= _verify_recurrences(report)
    if args.suite in ("differential", "all"):
        ok &= _verify_differential(report, args.grid)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------


def _parse_interval(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"interval must be a:b, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_n_list(text: str) -> list[float]:
    values = [float(part) for part in text.split(",") if part]
    if not values:
        raise ValueError("empty n-list")
    return values


def _cmd_converge(args) -> int:
    cfg = _config_with_tol(args)
    f = builtin_function(args.fn)
    n_values = _parse_n_list(args.n_list)
    if args.experiment == "voronovskaja":
        if f.d1 is None or f.d2 is None:
            raise ValueError(
                f"function {args.fn!r} has no stored second derivative; "
                "choose a twice-differentiable built-in"
            )
        fp = builtin_function(args.fn)
        fp.eval = f.d1
        fpp = builtin_function(args.fn)
        fpp.eval = f.d2
        report = identities.voronovskaja_experiment(
            args.beta, f, fp, fpp, args.x, n_values, cfg
        )
        limit = identities.voronovskaja_limit(
            args.beta, args.x, f.d1(args.x), f.d2(args.x)
        )
        lines = ["n,error,rate,limit"]
        rates = report.local_rates()
        for i, (n, err) in enumerate(zip(report.n_values, report.errors)):
            rate = "" if rates[i] is None else _fmt(rates[i])
            lines.append(f"{_fmt(n)},{_fmt(err)},{rate},{_fmt(limit)}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    if args.experiment == "korovkin":
        interval = _parse_interval(args.interval)
        report = identities.korovkin_convergence_table(
            args.beta, f, interval, n_values, args.grid_size, cfg
        )
        _emit(report.to_csv(), args.out)
        return EXIT_OK
    # bound
    lines = ["n,lhs,rhs,C_min"]
    for n in n_values:
        p = JainParams(n, args.beta)
        lhs, rhs, _ = identities.smoothness_bound_check(p, f, args.x, args.C, cfg)
        c_min = identities.minimal_smoothness_constant(p, f, args.x, cfg)
        lines.append(f"{_fmt(n)},{_fmt(lhs)},{_fmt(rhs)},{_fmt(c_min)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jainops",
        description="Positive linear operator toolkit: evaluation, exact moment "
        "tables, identity verification, convergence experiments.",
    )
    parser.add_argument(
        "--config", help="path to a key=value config file (default: $JPK_CONFIG)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="apply an operator to a test function")
    p_eval.add_argument("--op", choices=("jain", "phillips"), required=True)
    p_eval.add_argument("--n", type=float, required=True)
    p_eval.add_argument("--beta", type=float, required=True)
    p_eval.add_argument(
        "--x", action="append", help="point, repeatable, or range a:b:steps"
    )
    p_eval.add_argument("--fn", choices=BUILTIN_NAMES, default="const")
    p_eval.add_argument("--tol", type=float, help="override tail/quadrature tolerance")
    p_eval.add_argument("--out", help="write CSV here instead of stdout")
    p_eval.set_defaults(func=_cmd_eval)

    p_mom = sub.add_parser("moments", help="print moment tables")
    p_mom.add_argument("--kind", choices=tuple(_KIND_HELP), required=True)
    p_mom.add_argument("--r-max", type=int, required=True, dest="r_max")
    p_mom.add_argument("--n", type=float, default=1.0)
    p_mom.add_argument("--beta", type=float, default=0.0)
    p_mom.add_argument(
        "--x",
        type=float,
        default=1.0,
        help="evaluation point (for kind P this is the basis index)",
    )
    p_mom.add_argument("--format", choices=("csv", "json", "symbolic"), default="csv")
    p_mom.add_argument("--out")
    p_mom.set_defaults(func=_cmd_moments)

    p_ver = sub.add_parser("verify", help="run the identity suites")
    p_ver.add_argument(
        "--suite", choices=("recurrences", "differential", "all"), required=True
    )
    p_ver.add_argument("--grid", choices=("small", "full"), default="small")
    p_ver.set_defaults(func=_cmd_verify)

    p_con = sub.add_parser("converge", help="run a convergence experiment")
    p_con.add_argument(
        "--experiment", choices=("voronovskaja", "korovkin", "bound"), required=True
    )
    p_con.add_argument("--fn", choices=BUILTIN_NAMES, required=True)
    p_con.add_argument("--beta", type=float, required=True)
    p_con.add_argument("--x", type=float, default=1.0)
    p_con.add_argument("--interval", default="0:2", help="a:b for korovkin")
    p_con.add_argument(
        "--n-list", dest="n_list", default="8,16,32,64,128", help="comma separated"
    )
    p_con.add_argument("--grid-size", type=int, default=21, dest="grid_size")
    p_con.add_argument("--C", type=float, default=10.0)
    p_con.add_argument("--tol", type=float)
    p_con.add_argument("--out")
    p_con.set_defaults(func=_cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (TruncationError, QuadratureError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC_FAILURE
    except (DomainError, RangeError, ValueError, KeyError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
