"""Command line front end.

Subcommands: ``analyze`` (polygon, slopes, root groups), ``check``
(solvability verdict with documented exit codes), ``solve`` (series solution
window plus report on disk), ``borel`` (transform profiles, CSV samples and
summability verdicts) and ``verify`` (seeded property battery).

Exit codes: 0 ok/bijective-so-far, 2 Fredholm-only, 3 not Fredholm,
64 parse error, 65 hypothesis/contact violation, 66 I/O error,
70 internal computation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .borel import summability_verdict, trace_verdict
from .charroots import root_groups, slopes_consistency
from .errors import (
    GoursatError,
    HypothesisViolated,
    NoContact,
    ParseError,
)
from .newton import build_polygon, positive_slopes
from .parsing import (
    format_series,
    parse_operator,
    parse_series,
    parse_useries,
)
from .series import BiSeries, GoursatData
from .solvability import VerdictKind, classify
from .solver import GoursatProblem, solve_truncated
from .verify import run_verification

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FREDHOLM_ONLY = 2
EXIT_NOT_FREDHOLM = 3
EXIT_PARSE = 64
EXIT_HYPOTHESIS = 65
EXIT_IO = 66
EXIT_INTERNAL = 70


def _dump(payload: dict, args) -> str:
    payload = {"schemaVersion": SCHEMA_VERSION, **payload}
    if args.format == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}{key}.", value[key])
        elif isinstance(value, list):
            for idx, item in enumerate(value):
                walk(f"{prefix}{idx}.", item)
        else:
            lines.append(f"{prefix[:-1]} = {value}")

    walk("", payload)
    return "\n".join(lines) + "\n"


def _emit(text: str, args):
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _json_float(value):
    if value is None:
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    op = parse_operator(args.operator)
    polygon = build_polygon(op)
    payload = {
        "operator": args.operator,
        "polygon": polygon.to_json_dict(),
        "positiveSlopes": [str(s) for s in positive_slopes(polygon)],
    }
    if args.roots:
        groups = root_groups(op, precision=args.precision)
        payload["rootGroups"] = [
            {
                "q": str(g.pole_order),
                "kappa": g.ramification,
                "leaders": [
                    {"re": float(value.real), "im": float(value.imag),
                     "mult": mult}
                    for value, mult in g.leaders
                ],
            }
            for g in groups
        ]
        payload["consistency"] = slopes_consistency(
            op, precision=args.precision).to_json_dict()
    _emit(_dump(payload, args), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    op = parse_operator(args.operator)
    verdict = classify(op, Fraction(args.s), args.j, args.alpha,
                       n_max=args.nmax, precision=args.precision)
    payload = verdict.to_json_dict()
    payload["operator"] = args.operator
    payload["s"] = args.s
    payload["j"] = args.j
    payload["alpha"] = args.alpha
    if payload["wInterval"] is not None:
        payload["wInterval"] = [_json_float(x) for x in payload["wInterval"]]
    _emit(_dump(payload, args), args)
    if verdict.kind is VerdictKind.NOT_FREDHOLM:
        return EXIT_NOT_FREDHOLM
    if verdict.bijective_up_to_nmax:
        return EXIT_OK
    return EXIT_FREDHOLM_ONLY


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _load_problem(args) -> GoursatProblem:
    op = parse_operator(args.operator)
    phis = [parse_useries(_read_text(path)) for path in args.phi or []]
    psis = [parse_useries(_read_text(path)) for path in args.psi or []]
    if args.inhomogeneity:
        f = parse_series(_read_text(args.inhomogeneity))
    else:
        f = BiSeries.zero(args.trunc_t, args.trunc_z)
    data = GoursatData(phis, psis)
    return GoursatProblem(op=op, f=f, data=data)


def cmd_solve(args) -> int:
    problem = _load_problem(args)
    series, report = solve_truncated(problem, args.trunc_t, args.trunc_z,
                                     args.window_t, args.window_z)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "solution.series").write_text(format_series(series),
                                             encoding="utf-8")
    payload = report.to_json_dict()
    payload["operator"] = args.operator
    payload["solutionFile"] = str(out_dir / "solution.series")
    text = json.dumps({"schemaVersion": SCHEMA_VERSION, **payload},
                      indent=2, sort_keys=True) + "\n"
    (out_dir / "solve_report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# borel
# ---------------------------------------------------------------------------

def _write_profile_csv(path: Path, profile) -> None:
    lines = ["r,re,im,method"]
    for r, value, method in profile.samples:
        lines.append(f"{r!r},{value.real!r},{value.imag!r},{method}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_borel(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    radii = [float(r) for r in args.radii.split(",")] if args.radii else None
    if args.operator:
        problem = _load_problem(args)
        report = summability_verdict(problem, args.direction,
                                     precision=args.precision,
                                     **({"radii": radii} if radii else {}))
        payload = report.to_json_dict()
        payload["obstructedDirection"] = _json_float(
            payload["obstructedDirection"])
        profiles = [d.profile for d in report.t_rays + report.z_rays
                    if d.profile is not None]
        for idx, profile in enumerate(profiles):
            _write_profile_csv(out_dir / f"profile_{idx}.csv", profile)
    elif args.series:
        u = parse_useries(_read_text(args.series))
        payload, profile = trace_verdict(
            u, Fraction(args.s), args.direction,
            **({"radii": radii} if radii else {}), precision=args.precision)
        if profile is not None:
            _write_profile_csv(out_dir / "profile_0.csv", profile)
    else:
        raise ParseError("borel needs either --series or --operator with data")
    text = json.dumps({"schemaVersion": SCHEMA_VERSION, **payload},
                      indent=2, sort_keys=True, default=str) + "\n"
    (out_dir / "borel_report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    report = run_verification(args.seed)
    text = _dump(report, args)
    _emit(text, args)
    return EXIT_OK if report["ok"] else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128,
                        help="working precision in bits (>= 64)")
    common.add_argument("--nmax", type=int, default=32,
                        help="finite-section sweep bound")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized batteries")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="output directory for artifacts")

    parser = argparse.ArgumentParser(
        prog="goursat",
        description="Newton-polygon solvability analysis, exact series "
                    "solvers and summability diagnostics for "
                    "constant-coefficient operators in two variables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", parents=[common],
                               help="polygon, slopes, root groups")
    p_analyze.add_argument("operator")
    p_analyze.add_argument("--roots", action="store_true",
                           help="include root groups and the slope cross-check")

    p_check = sub.add_parser("check", parents=[common],
                             help="solvability verdict")
    p_check.add_argument("operator")
    p_check.add_argument("-s", required=True, help="gevrey index (rational)")
    p_check.add_argument("-j", type=int, required=True)
    p_check.add_argument("-a", "--alpha", type=int, required=True)

    p_solve = sub.add_parser("solve", parents=[common],
                             help="truncated series solution")
    p_solve.add_argument("operator")
    p_solve.add_argument("--phi", action="append",
                         help="univariate series file, repeatable (t-traces)")
    p_solve.add_argument("--psi", action="append",
                         help="univariate series file, repeatable (z-traces)")
    p_solve.add_argument("--inhomogeneity", "-f", dest="inhomogeneity",
                         help="bivariate series file for the right-hand side")
    p_solve.add_argument("--trunc-t", type=int, default=12)
    p_solve.add_argument("--trunc-z", type=int, default=12)
    p_solve.add_argument("--window-t", type=int, default=4)
    p_solve.add_argument("--window-z", type=int, default=4)

    p_borel = sub.add_parser("borel", parents=[common],
                             help="summability diagnostics")
    p_borel.add_argument("--series", help="univariate series file")
    p_borel.add_argument("--operator", help="operator DSL (full problem mode)")
    p_borel.add_argument("--phi", action="append")
    p_borel.add_argument("--psi", action="append")
    p_borel.add_argument("--inhomogeneity", "-f", dest="inhomogeneity")
    p_borel.add_argument("-s", default="1", help="gevrey index for --series")
    p_borel.add_argument("-d", "--direction", type=float, default=math.pi)
    p_borel.add_argument("--radii", help="comma-separated sample radii")
    p_borel.add_argument("--trunc-t", type=int, default=16)
    p_borel.add_argument("--trunc-z", type=int, default=16)

    sub.add_parser("verify", parents=[common],
                   help="run the seeded property battery")

    return parser


_HANDLERS = {
    "analyze": cmd_analyze,
    "check": cmd_check,
    "solve": cmd_solve,
    "borel": cmd_borel,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 64:
        sys.stderr.write("error: --precision must be at least 64\n")
        return EXIT_PARSE
    try:
        return _HANDLERS[args.command](args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (NoContact, HypothesisViolated) as exc:
        sys.stderr.write(f"hypothesis error: {exc}\n")
        return EXIT_HYPOTHESIS
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO
    except GoursatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
