"""``circ-pierce`` command line.

Exit codes: 0 success, 1 a checked bound failed (``verify-bounds``),
2 malformed input or flags, 3 infeasible parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import List, Optional

from . import constructions, counting, piercing, randomsim
from .errors import ParameterError, SocietyFormatError
from .spectrum import DEFAULT_FILE_TOL, Society, coord_to_json, dumps_society, loads_society, parse_coord

EXIT_OK = 0
EXIT_BOUND_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INFEASIBLE = 3

SEED_ENV = "CIRC_PIERCE_SEED"


class UsageError(Exception):
    """Bad flags detected after argparse accepted them."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_society(args) -> Society:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SocietyFormatError(f"cannot read {args.input}: {exc}") from exc
    if not text.strip():
        raise SocietyFormatError("input is empty")
    return loads_society(text, args.tol)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        raise UsageError(f"--seed is required when {SEED_ENV} is unset")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _point(society: Society, text: str):
    return parse_coord(text, society.kind)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


# --- verbs ----------------------------------------------------------------

def cmd_pierce(args) -> int:
    society = _read_society(args)
    if args.method == "greedy":
        cut = None if args.cut_point is None else _point(society, args.cut_point)
        result = piercing.greedy_linear_pierce(society, cut)
    elif args.method == "alg2":
        x = args.cut_point
        if x is None:
            raise UsageError("--method alg2 needs --cut-point")
        result = piercing.circular_pierce_alg2(society, _point(society, x))
    else:
        result = piercing.exact_pierce(society)
    _emit(args, _json({
        "tau": result.tau,
        "points": [coord_to_json(x) for x in result.points],
        "witness": {str(i): j for i, j in result.witness.items()},
        "optimal": result.optimal,
        "method": result.method,
    }))
    return EXIT_OK


def cmd_agreement(args) -> int:
    society = _read_society(args)
    _emit(args, _json({"agreement": counting.agreement_number(society), "n": len(society)}))
    return EXIT_OK


def cmd_agreeable(args) -> int:
    society = _read_society(args)
    n = len(society)
    if not 1 <= args.k <= args.m <= n:
        raise ParameterError(f"need 1 <= k <= m <= n, got k={args.k}, m={args.m}, n={n}")
    try:
        ok = counting.is_km_agreeable(society, args.k, args.m, force=args.force)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    _emit(args, _json({"k": args.k, "m": args.m, "agreeable": ok}))
    return EXIT_OK


def cmd_counting(args) -> int:
    society = _read_society(args)
    _emit(args, counting.step_function_csv(counting.counting_function(society)))
    return EXIT_OK


def cmd_integrals(args) -> int:
    society = _read_society(args)
    C = counting.counting_function(society)
    out = {"n": len(society), "riemann": coord_to_json(counting.riemann_integral(C))}
    out["euler"] = counting.euler_integral(C) if C.all_closed else None
    if C.is_constant:
        out["lmax_minus_lmin"] = None
    else:
        out["lmax_minus_lmin"] = counting.extremum_intervals(C).signed_sum
    _emit(args, _json(out))
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "uniform":
        eps = None if args.closed_epsilon is None else parse_coord(args.closed_epsilon, "rational")
        society = constructions.uniform_society(args.n, args.h, eps)
    elif args.kind == "sharp":
        society = constructions.sharp_society(args.q)
    else:
        society = constructions.figure_society(args.id)
    _emit(args, dumps_society(society))
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = randomsim.RandomSocietyParams(args.n, args.p, _seed(args), args.trials)
    report = randomsim.simulate(params, jobs=args.jobs)
    out = report.to_dict()
    out["expected_tau_formula"] = _formula_dict(randomsim.expected_tau_formula(args.n, args.p))
    _emit(args, _json(out))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.p_min > args.p_max:
        raise UsageError("--p-min exceeds --p-max")
    seed = _seed(args)
    # validate before the long run
    randomsim.RandomSocietyParams(args.n, 0.5, seed, args.trials)
    ps = randomsim.p_grid(args.p_min, args.p_max, args.p_step)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=randomsim.SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in randomsim.sweep(args.n, ps, args.trials, seed, jobs=args.jobs):
        row["formula_applicable"] = int(row["formula_applicable"])
        w.writerow(row)
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    society = _read_society(args)
    report = piercing.verify_bounds(society, agreeability_limit=args.agreeability_limit)
    _emit(args, _json({
        "tau": report.tau,
        "ok": report.ok,
        "checks": [{"name": c.name, "bound": c.bound, "holds": c.holds, "detail": c.detail} for c in report.checks],
    }))
    return EXIT_OK if report.ok else EXIT_BOUND_FAILED


def _formula_dict(f) -> dict:
    return {"value": f.value, "regime": f.regime, "applicable": f.applicable, "proven": f.proven}


def cmd_probability(args) -> int:
    if args.disjoint:
        if args.k is None:
            raise UsageError("--disjoint needs --k")
        check = randomsim.disjoint_probability_check(args.k, args.p, args.trials, _seed(args))
        out = {"k": args.k, "p": args.p, "closed_form": check.closed_form,
               "estimate": check.estimate, "se": check.se, "trials": check.trials}
    elif args.k is None:
        if args.n is None:
            raise UsageError("need --n")
        out = {"n": args.n, "p": args.p, "expected_tau": _formula_dict(randomsim.expected_tau_formula(args.n, args.p))}
    else:
        if args.n is None:
            raise UsageError("need --n")
        out = {"n": args.n, "p": args.p, "k": args.k, **_formula_dict(randomsim.formula_tau_k(args.n, args.p, args.k))}
        if args.n == 3 and args.k == 1 and 0 < args.p < 1:
            out["piecewise_n3"] = randomsim.formula_tau1_n3(args.p)
    _emit(args, _json(out))
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circ-pierce", description="Piercing and agreement in circular approval societies.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def with_input(p):
        p.add_argument("--input", default="-", help="society JSON file, '-' for stdin (default)")
        p.add_argument("--tol", type=float, default=DEFAULT_FILE_TOL,
                       help="endpoint tolerance for decimal coordinates (default %(default)g)")
        p.add_argument("--out", help="write here instead of stdout")
        return p

    p = with_input(sub.add_parser("pierce", help="a piercing set"))
    p.add_argument("--method", choices=["greedy", "alg2", "exact"], default="exact")
    p.add_argument("--cut-point", help="cut point for greedy, start point for alg2")
    p.set_defaults(func=cmd_pierce)

    p = with_input(sub.add_parser("agreement", help="agreement number"))
    p.set_defaults(func=cmd_agreement)

    p = with_input(sub.add_parser("agreeable", help="test (k, m)-agreeability"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--force", action="store_true", help="allow very large subset enumerations")
    p.set_defaults(func=cmd_agreeable)

    p = with_input(sub.add_parser("counting", help="counting function as CSV"))
    p.set_defaults(func=cmd_counting)

    p = with_input(sub.add_parser("integrals", help="Riemann and Euler integrals of the counting function"))
    p.set_defaults(func=cmd_integrals)

    p = with_input(sub.add_parser("verify-bounds", help="check upper bounds on tau"))
    p.add_argument("--agreeability-limit", type=int, default=12,
                   help="skip agreeability bounds above this many arcs")
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("construct", help="build a named society")
    p.set_defaults(func=cmd_construct)
    csub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    u = csub.add_parser("uniform")
    u.add_argument("--n", type=int, required=True)
    u.add_argument("--h", type=int, required=True)
    u.add_argument("--closed-epsilon", help="shrink to closed arcs by this rational amount")
    s = csub.add_parser("sharp")
    s.add_argument("--q", type=int, required=True)
    f = csub.add_parser("figure")
    f.add_argument("--id", required=True, help=", ".join(constructions.FIGURES))
    for c in (u, s, f):
        c.add_argument("--out")

    def with_sim(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--trials", type=_positive, required=True)
        p.add_argument("--seed", type=int, help=f"master seed (default: ${SEED_ENV})")
        p.add_argument("--jobs", type=_positive, default=1)
        p.add_argument("--out")
        return p

    p = with_sim(sub.add_parser("simulate", help="Monte Carlo distribution of tau"))
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_simulate)

    p = with_sim(sub.add_parser("sweep", help="P(tau = k) over a grid of p, as CSV"))
    p.add_argument("--p-min", type=float, required=True)
    p.add_argument("--p-max", type=float, required=True)
    p.add_argument("--p-step", type=float, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probability", help="closed-form P(tau = k), E[tau], or the disjointness check")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--disjoint", action="store_true", help="simulate pairwise disjointness of k arcs")
    p.add_argument("--trials", type=_positive, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_probability)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"circ-pierce: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SocietyFormatError as exc:
        print(f"circ-pierce: malformed input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ParameterError as exc:
        print(f"circ-pierce: infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, TypeError) as exc:
        print(f"circ-pierce: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
