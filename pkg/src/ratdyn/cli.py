"""Command-line interface: deterministic CSV/JSON export of every operation.

Exit codes: 0 success, 1 failed identity suite, 2 flag errors (argparse),
3 singular or forbidden input.  Exact rationals render as num/den strings,
floats with 17 significant digits; both round-trip losslessly.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, closed_form, dynamics
from .equation import Branch, EquationSpec
from .errors import (
    ForbiddenInitialCondition,
    InitialAtMinusPhiPlus,
    NearSingularity,
    RatdynError,
    Singularity,
    ZeroDenominator,
)
from .horadam import HoradamSpec, IdentityKind, check_identity, horadam_range

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3


def fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _branch_arg(text: str) -> Branch:
    try:
        return Branch(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("branch must be 'plus' or 'minus'") from exc


def _emit_series(pairs, args, status=None, meta=None) -> None:
    if args.format == "json":
        payload = {"series": [{"n": n, "value": fmt(v)} for n, v in pairs]}
        if status is not None:
            payload["status"] = status
        if meta:
            payload["meta"] = meta
        print(json.dumps(payload, sort_keys=True))
        return
    if meta:
        for key in sorted(meta):
            print(f"# {key}={meta[key]}")
    if status is not None:
        print(f"# status={status['kind']}"
              + (f" step={status['step']}" if status.get("step") is not None else ""))
    print("n,value")
    for n, v in pairs:
        print(f"{n},{fmt(v)}")


def _cmd_horadam(args) -> int:
    spec = HoradamSpec(args.a, args.b, args.p, args.q)
    values = horadam_range(spec, args.start, args.stop)
    _emit_series(list(zip(range(args.start, args.stop + 1), values)), args)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, args.nu)
    plane = dynamics.Plane(args.plane)
    x0 = args.x0 if plane is dynamics.Plane.EXACT else float(args.x0)
    orbit = dynamics.iterate(eq, x0, args.steps, plane)
    status = {"kind": orbit.status.kind.value, "step": orbit.status.step}
    _emit_series(list(enumerate(orbit.values)), args, status=status)
    return EXIT_OK if orbit.status.ok else EXIT_SINGULAR


def _cmd_closed_form(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, 1)
    values = [closed_form.solve_closed_form(eq, args.x0, n) for n in range(args.n + 1)]
    _emit_series(list(enumerate(values)), args)
    return EXIT_OK


def _cmd_forbidden(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, 1)
    points = closed_form.forbidden_points(eq, args.depth)
    if args.format == "json":
        print(json.dumps(
            {"forbidden": [{"m": pt.m, "value": fmt(pt.value)} for pt in points]},
            sort_keys=True,
        ))
    else:
        print("m,value")
        for pt in points:
            print(f"{pt.m},{fmt(pt.value)}")
    return EXIT_OK


def _cmd_products(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, 1)
    result = closed_form.product_analysis(eq, args.x0, args.steps)
    predicted = "divergent" if result.predicted_limit is None else fmt(result.predicted_limit)
    meta = {
        "alternating": fmt(result.alternating),
        "predicted_limit": predicted,
        "regime": result.regime.value,
    }
    _emit_series(list(enumerate(result.partials)), args, meta=meta)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, args.nu)
    reports = [analysis.classify_stability(eq, rep) for rep in analysis.equilibria(eq)]
    rows = [
        {
            "value": fmt(rep.value),
            "multiplier": fmt(rep.multiplier),
            "classification": rep.classification.value,
            "bracket": rep.bracket.value,
        }
        for rep in reports
    ]
    if args.format == "json":
        print(json.dumps({"equilibria": rows}, sort_keys=True))
    else:
        print("value,multiplier,classification,bracket")
        for row in rows:
            print(f"{row['value']},{row['multiplier']},{row['classification']},{row['bracket']}")
    return EXIT_OK


def _cmd_period2(args) -> int:
    eq = EquationSpec(args.branch, args.p, args.q, args.nu)
    cycle = analysis.solve_period_two(eq, args.tol)
    if args.format == "json":
        payload = None
        if cycle is not None:
            payload = {
                "phi": fmt(cycle.phi),
                "psi": fmt(cycle.psi),
                "residual": fmt(cycle.residual),
                "approx_phi": fmt(cycle.approx_form[0]),
                "approx_psi": fmt(cycle.approx_form[1]),
            }
        print(json.dumps({"cycle": payload}, sort_keys=True))
        return EXIT_OK
    print("phi,psi,residual,approx_phi,approx_psi")
    if cycle is None:
        print("none")
    else:
        print(
            f"{fmt(cycle.phi)},{fmt(cycle.psi)},{fmt(cycle.residual)},"
            f"{fmt(cycle.approx_form[0])},{fmt(cycle.approx_form[1])}"
        )
    return EXIT_OK


def _identity_battery(nmax: int):
    """Deterministic index tuples per identity kind, bounded by nmax."""
    batches = {
        IdentityKind.CONVOLUTION: [
            (n, k) for n in range(2, nmax + 1) for k in range(0, n - 1)
        ],
        IdentityKind.CASSINI: [(n,) for n in range(1, nmax + 1)],
        IdentityKind.DOCAGNE: [
            (n, r) for n in range(1, nmax + 1) for r in range(1, nmax + 1 - n)
        ],
        IdentityKind.JOHNSON: [
            (k, l, m, k + l - m, r)
            for r in range(1, 4)
            for k in range(0, 8)
            for l in range(0, 8)
            for m in range(0, 8)
        ],
        IdentityKind.PHI_POWER: [(n,) for n in range(1, nmax + 1)],
    }
    return batches


def _cmd_identities(args) -> int:
    spec = HoradamSpec.canonical(args.p, args.q)
    all_zero = True
    print("kind,checks,max_abs_residual")
    for kind, tuples in _identity_battery(args.nmax).items():
        worst = Fraction(0)
        for indices in tuples:
            residual = check_identity(kind, spec, indices)
            parts = residual if isinstance(residual, tuple) else (residual,)
            for part in parts:
                worst = max(worst, abs(part))
        if worst != 0:
            all_zero = False
        print(f"{kind.value},{len(tuples)},{fmt(worst)}")
    return EXIT_OK if all_zero else EXIT_IDENTITY_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratdyn",
        description="Orbit, closed-form and stability data for x(n+1) = q/(±p + x(n)^nu).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, branch=True, nu=False, fmt_flag=True):
        if branch:
            sp.add_argument("--branch", type=_branch_arg, required=True)
        sp.add_argument("--p", type=_fraction_arg, required=True)
        sp.add_argument("--q", type=_fraction_arg, required=True)
        if nu:
            sp.add_argument("--nu", type=int, default=1)
        if fmt_flag:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("horadam", help="recurrence values W(n) over an index range")
    add_common(sp, branch=False)
    sp.add_argument("--a", type=_fraction_arg, default=Fraction(0))
    sp.add_argument("--b", type=_fraction_arg, default=Fraction(1))
    sp.add_argument("--from", dest="start", type=int, required=True)
    sp.add_argument("--to", dest="stop", type=int, required=True)
    sp.set_defaults(fn=_cmd_horadam)

    sp = sub.add_parser("simulate", help="iterate an orbit and emit the series")
    add_common(sp, nu=True)
    sp.add_argument("--x0", type=_fraction_arg, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--plane", choices=("exact", "float"), default="exact")
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("closed-form", help="nu=1 series straight from the closed form")
    add_common(sp)
    sp.add_argument("--x0", type=_fraction_arg, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(fn=_cmd_closed_form)

    sp = sub.add_parser("forbidden", help="forbidden initial conditions by depth (nu=1)")
    add_common(sp)
    sp.add_argument("--depth", type=int, required=True)
    sp.set_defaults(fn=_cmd_forbidden)

    sp = sub.add_parser("products", help="partial products with regime and limit (nu=1)")
    add_common(sp)
    sp.add_argument("--x0", type=_fraction_arg, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.set_defaults(fn=_cmd_products)

    sp = sub.add_parser("analyze", help="equilibria with multipliers and stability")
    add_common(sp, nu=True)
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("period2", help="prime two-cycle, if one exists")
    add_common(sp, nu=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(fn=_cmd_period2)

    sp = sub.add_parser("identities", help="exact identity battery; exit 1 on any failure")
    add_common(sp, branch=False, fmt_flag=False)
    sp.add_argument("--nmax", type=int, required=True)
    sp.set_defaults(fn=_cmd_identities)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (
        ForbiddenInitialCondition,
        InitialAtMinusPhiPlus,
        Singularity,
        NearSingularity,
        ZeroDenominator,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (RatdynError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
