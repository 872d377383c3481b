"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 precision budget
exhausted or no solution within the search horizon.  Output is JSON on
stdout (or CSV with --csv) and is byte-identical across identical runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .cf import convergent, expand
from .core import Solution, TernaryForm, evaluate_form, solve
from .equivalence import GramForm, HMatrix, RationalMatrix3, reduce_binary, reduce_h, reduce_sl3q
from .errors import (
    DomainError,
    NoSolutionWithinHorizon,
    OracleContradiction,
    PrecisionExhausted,
    SpecSyntaxError,
)
from .oracle import brute_force_min, f_table, solver_vs_oracle, watson_scaling
from .profile import profile_for
from .reals import LIOUVILLE, as_rational, is_rational, parse_real
from .special import dirichlet_gap, liouville_generator, liouville_solve, watson_solve

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ParseError(message)


def _form(args) -> TernaryForm:
    if getattr(args, "beta", None) is not None:
        beta = parse_real(args.beta)
        if is_rational(beta):
            raise DomainError(f"beta = {beta} is rational; an irrational beta is required")
        return TernaryForm.from_beta(beta)
    if getattr(args, "alpha", None) is None:
        raise _ParseError("one of --alpha or --beta is required")
    alpha = parse_real(args.alpha)
    if is_rational(alpha):
        raise DomainError(f"alpha = {alpha} is rational; the form needs an irrational alpha")
    return TernaryForm(alpha)


def _reverify(sol: Solution, enclose, start: int | None = None) -> None:
    """Recheck |Q(v)| <= eps with an independent enclosure before printing."""
    eps = sol.epsilon
    width = eps / 1024
    prec = start or max(64, sol.value.precision)
    while True:
        val = enclose(prec)
        if val.certainly_ge(-eps) and val.certainly_le(eps):
            return
        if val.width <= width:
            raise AssertionError(f"solution {sol.v} failed re-verification")
        prec *= 2


def _emit(out, records, args) -> None:
    if isinstance(records, dict):
        records = [records]
    if args.csv:
        keys = sorted({k for r in records for k in r})
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for r in records:
            row = []
            for k in keys:
                v = r.get(k)
                row.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else ("" if v is None else v))
            writer.writerow(row)
        out.write(buf.getvalue())
        return
    for r in records:
        out.write(json.dumps(r, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args, out):
    form = _form(args)
    eps = as_rational(args.epsilon, "epsilon")
    profile = None
    if args.mu is not None or args.sigma is not None:
        sigma = args.sigma if args.sigma is not None else Fraction(1, 2)
        profile = profile_for(form.beta, sigma, args.mu, with_C=False, budget=args.precision_budget)
    sol = solve(
        form,
        profile,
        eps,
        args.n_max,
        strategy=args.strategy,
        pencil_count=args.pencil_count,
        budget=args.precision_budget,
    )
    _reverify(sol, lambda p: evaluate_form(form, sol.v, precision=p))
    _emit(out, sol.certificate(), args)


def cmd_cf(args, out):
    beta = parse_real(args.beta)
    if is_rational(beta):
        raise DomainError(f"beta = {beta} is rational")
    cf = expand(beta, args.upto, args.precision_budget)
    _emit(out, [convergent(cf, n, args.precision_budget).to_json() for n in range(args.upto + 1)], args)


def cmd_watson(args, out):
    _emit(out, watson_solve(args.a, args.n).to_json(), args)


def cmd_liouville(args, out):
    beta = parse_real(args.spec)
    if beta != LIOUVILLE:
        raise DomainError("a super-approximation generator is only built in for the Liouville constant")
    eps = as_rational(args.epsilon, "epsilon")
    sol = liouville_solve(liouville_generator, eps, beta, budget=args.precision_budget)
    form = TernaryForm.from_beta(beta)
    _reverify(sol, lambda p: evaluate_form(form, sol.v, precision=p), start=2 * sol.v[2].bit_length() + 64)
    _emit(out, sol.certificate(), args)


def _matrix_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _ParseError(f"{what} is not valid JSON: {exc}") from None


def cmd_reduce(args, out):
    eps = as_rational(args.epsilon, "epsilon")
    options = {"budget": args.precision_budget}
    if args.gamma is not None:
        if args.alpha is None:
            raise _ParseError("--gamma needs --alpha")
        gamma = RationalMatrix3(_matrix_json(args.gamma, "gamma"))
        alpha = parse_real(args.alpha)
        sol = reduce_sl3q(gamma, alpha, eps, **options)
        gram = GramForm.from_gamma(gamma, alpha)
    elif args.h_block is not None:
        if args.h33 is None:
            raise _ParseError("--h-block needs --h33")
        h = HMatrix(_matrix_json(args.h_block, "h block"), parse_real(args.h33))
        sol = reduce_h(h, eps, **options)
        gram = GramForm.from_h(h)
    elif args.binary is not None:
        if args.beta is None:
            raise _ParseError("--binary needs --beta")
        parts = args.binary.split(",")
        if len(parts) != 3:
            raise _ParseError("--binary takes three comma-separated rationals a,b,c")
        a, b, c = (as_rational(t, "coefficient") for t in parts)
        beta = parse_real(args.beta)
        alpha2, gamma = reduce_binary(a, b, c, beta)
        sol = reduce_sl3q(gamma, alpha2, eps, **options)
        sol.extra["binary"] = [str(a), str(b), str(c)]
        gram = GramForm.from_gamma(gamma, alpha2)
    else:
        raise _ParseError("one of --gamma, --h-block or --binary is required")
    _reverify(sol, lambda p: gram.enclose(sol.v, p))
    _emit(out, sol.certificate(), args)


def cmd_oracle(args, out):
    form = _form(args)
    res = brute_force_min(form, args.N, workers=args.workers, cap=args.cap, budget=args.precision_budget)
    _emit(out, res.to_json(), args)


def cmd_bench(args, out):
    if args.suite == "watson":
        table = watson_scaling(args.a, args.n_max)
        rows = [dict(r, a=table["a"]) for r in table["rows"]]
        if args.csv:
            _emit(out, rows, args)
        else:
            summary = {k: v for k, v in table.items() if k != "sup_value"}
            _emit(out, summary, args)
        return
    form = _form(args)
    if args.suite == "oracle":
        Ns = [int(t) for t in args.sizes.split(",")]
        table = f_table(form, Ns, workers=args.workers, cap=args.cap, budget=args.precision_budget)
        _emit(out, [r.to_json() for r in table], args)
        return
    eps_list = [as_rational(t, "epsilon") for t in args.epsilons.split(",")]
    report = solver_vs_oracle(form, eps_list, workers=args.workers, cap=args.cap, budget=args.precision_budget)
    _emit(out, report, args)


def cmd_diagnose(args, out):
    form = _form(args)
    eps = None if args.epsilon is None else as_rational(args.epsilon, "epsilon")
    profile = profile_for(form.beta, budget=args.precision_budget)
    rep = dirichlet_gap(form, args.N, eps, profile)
    _emit(out, rep.to_json(), args)


# ---------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--workers", type=int, default=None, help="oracle worker processes (default: CPU count)")
    p.add_argument(
        "--precision-budget",
        type=int,
        default=None,
        help="largest working precision in bits (env OPPENHEIM_PRECISION_BUDGET)",
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="oppenheim", description="Certified small values of x^2 + y^2 - alpha z^2.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def form_args(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--alpha", help="alpha as a real literal, e.g. sqrt(2)")
        g.add_argument("--beta", help="beta = sqrt(alpha) as a real literal")

    p = sub.add_parser("solve", parents=[common], help="find v with |Q(v)| <= epsilon")
    form_args(p)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--mu", default=None, help="irrationality exponent override")
    p.add_argument("--sigma", default=None, help="slack exponent (default 1/2)")
    p.add_argument("--n-max", type=int, default=None, help="index horizon (default n1 + 8)")
    p.add_argument("--strategy", choices=("auto", "pencil", "probe"), default="auto")
    p.add_argument("--pencil-count", type=int, default=128)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cf", parents=[common], help="certified continued fraction and convergents")
    p.add_argument("--beta", required=True)
    p.add_argument("--upto", type=int, default=10)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("watson", parents=[common], help="silver-mean construction")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_watson)

    p = sub.add_parser("liouville", parents=[common], help="Liouville path")
    p.add_argument("--spec", default="liouville")
    p.add_argument("--epsilon", required=True)
    p.set_defaults(func=cmd_liouville)

    p = sub.add_parser("reduce", parents=[common], help="solve a rationally equivalent form")
    p.add_argument("--gamma", help="3x3 matrix as JSON of rational strings, with det 1")
    p.add_argument("--alpha")
    p.add_argument("--h-block", help="2x2 block A of h as JSON, with det 1")
    p.add_argument("--h33", help="the irrational entry h33")
    p.add_argument("--binary", help="a,b,c for a x^2 + b x y + c y^2 - beta^2 z^2")
    p.add_argument("--beta")
    p.add_argument("--epsilon", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="brute-force F(N)")
    form_args(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--cap", type=int, default=2000)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", parents=[common], help="scaling tables")
    p.add_argument("--suite", choices=("watson", "oracle", "solver"), required=True)
    form_args(p, required=False)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--sizes", default="2,5,10,20,40")
    p.add_argument("--epsilons", default="1/10,1/100")
    p.add_argument("--cap", type=int, default=2000)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("diagnose", parents=[common], help="Dirichlet-point gap report")
    form_args(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--epsilon", default=None)
    p.set_defaults(func=cmd_diagnose)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except (_ParseError, SpecSyntaxError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (DomainError, OracleContradiction) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (PrecisionExhausted, NoSolutionWithinHorizon) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
