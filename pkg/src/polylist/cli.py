"""Command line: ``polylist {laws, adjoint, poly, eval}``.

Exit codes: 0 everything passed, 1 a check failed, 2 usage, parse or type
error, 3 a search or enumeration exceeded its budget.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from . import arith, listobj, polyadj
from .dsl import DslSyntaxError, parse_context, parse_term
from .instancefile import InstanceFileError, read_instance
from .lang import Scope, TermTypeError, evaluate
from .setmodel import Budget, BudgetError, FinSet, ModelError, arrows_equal, format_elem
from .slices import list_bijection, list_polynomial, poly_extension

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{n} is negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylist",
        description="Check list objects, truncated arithmetic and the nth universal property on finite data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    laws = sub.add_parser("laws", help="run the arithmetic, list and nth law suites")
    laws.add_argument("--nat-max", type=_natural, default=8, help="largest natural enumerated (default 8)")
    laws.add_argument("--len-max", type=_natural, default=3, help="longest list enumerated (default 3)")
    laws.add_argument("--card-x", type=_natural, default=2,
                      help="list laws run for |X| = 0 .. CARD_X (default 2)")
    laws.add_argument("--seed", type=int, default=0, help="seed for the random arrows (default 0)")
    laws.add_argument("--samples", type=_natural, default=100, help="random arrows per naturality law")

    adj = sub.add_parser("adjoint", help="solve and check an instance file")
    adj.add_argument("path")
    adj.add_argument("--card-cap", type=_natural, default=200_000,
                     help="largest brute-force search space allowed (default 200000)")

    poly = sub.add_parser("poly", help="compute the list polynomial on |X| atoms")
    poly.add_argument("--card-x", type=_natural, default=2)
    poly.add_argument("--max-len", type=_natural, default=3)
    poly.add_argument("--card-cap", type=_natural, default=200_000)

    ev = sub.add_parser("eval", help="evaluate a term")
    ev.add_argument("term")
    ev.add_argument("--ctx", default="", help='context, e.g. "x: X, n: N"')
    ev.add_argument("--atoms", action="append", default=[], metavar="NAME=a,b,...",
                    help="declare a finite set of atoms (repeatable)")
    ev.add_argument("--set", action="append", default=[], metavar="VAR=TERM",
                    help="value of a context variable (repeatable)")
    return parser


def cmd_laws(args, out) -> int:
    budget = Budget(nat_max=args.nat_max, len_max=args.len_max, seed=args.seed)
    print(f"# seed {args.seed}, nat-max {args.nat_max}, len-max {args.len_max}, card-x {args.card_x}", file=out)
    reports = [arith.run_arith_laws(budget)]
    for k in range(args.card_x + 1):
        reports.append(listobj.run_list_laws(budget, card_x=k, samples=args.samples))
    for k in range(args.card_x + 1):
        reports.append(polyadj.run_poly_laws(budget, card_x=k, samples=args.samples))
    ok = True
    for rep in reports:
        for line in rep.lines():
            print(line, file=out)
        ok = ok and rep.passed
    total = sum(len(r.results) for r in reports)
    failed = sum(len(r.failures()) for r in reports)
    print(f"# {total - failed}/{total} laws passed", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_adjoint(args, out) -> int:
    inst = read_instance(args.path).instance
    budget = inst.budget(card_cap=args.card_cap)
    size = polyadj.candidate_count(inst)
    if size > budget.card_cap:
        raise BudgetError(f"brute-force search space has {size} candidates, cap is {budget.card_cap}", size)
    h = polyadj.construct_h(inst, budget)
    for a in inst.A.elements:
        print(f"h({a}) = {format_elem(h(a))}", file=out)
    existence = polyadj.verify_solution(inst, h, budget)
    for line in existence.lines():
        print(f"  existence: {line}", file=out)
    print(f"EXISTENCE {'PASS' if existence.passed else 'FAIL'}", file=out)

    sols = polyadj.brute_force_solutions(inst, budget)
    unique = len(sols) == 1 and bool(arrows_equal(h, sols[0], budget))
    print(f"  uniqueness: {len(sols)} of {size} candidates solve the instance", file=out)
    if sols:
        theory = polyadj.uniqueness_by_theory(inst, h, sols[0], budget)
        for line in theory.lines():
            print(f"  uniqueness: {line}", file=out)
        unique = unique and theory.passed
    noun = "solution" if len(sols) == 1 else "solutions"
    print(f"UNIQUENESS {'PASS' if unique else 'FAIL'} ({len(sols)} {noun})", file=out)
    return EXIT_OK if existence.passed and unique else EXIT_FAIL


def cmd_poly(args, out) -> int:
    X = listobj.atoms(args.card_x)
    budget = Budget(nat_max=args.max_len, len_max=args.max_len, card_cap=args.card_cap)
    ext = poly_extension(list_polynomial(), X, budget)
    counts = ext.counts_over_B()
    ok = True
    for n, c in counts.items():
        expected = args.card_x ** n
        ok = ok and c == expected
        print(f"n={n} sections {c} (|X|^n = {expected})", file=out)
    print(f"total {len(ext.elements)}", file=out)
    check = list_bijection(ext)
    ok = ok and check.passed
    verdict = "PASS" if check.passed else f"FAIL at {format_elem(check.witness)}"
    print(f"BIJECTION {verdict} ({check.size} sections, {check.lists} lists)", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_atoms(specs) -> tuple[FinSet, ...]:
    sets = []
    for spec in specs:
        name, sep, rest = spec.partition("=")
        if not sep or not name.strip():
            raise ValueError(f"--atoms expects NAME=a,b,..., got {spec!r}")
        elems = tuple(x.strip() for x in rest.split(",") if x.strip())
        sets.append(FinSet(elems, name.strip()))
    return tuple(sets)


def cmd_eval(args, out) -> int:
    scope = Scope(_parse_atoms(args.atoms))
    ctx = parse_context(args.ctx, scope)
    values = {}
    for spec in args.set:
        name, sep, rhs = spec.partition("=")
        name = name.strip()
        if not sep or ctx.type_of(name) is None:
            raise ValueError(f"--set {spec!r} does not name a context variable")
        empty = parse_context("", scope)
        values[name] = evaluate(parse_term(rhs), empty)
    missing = [v for v in ctx.names if v not in values]
    if missing:
        raise ValueError(f"no value for {', '.join(missing)}; use --set VAR=TERM")
    value = evaluate(parse_term(args.term), ctx, values)
    print(format_elem(value), file=out)
    return EXIT_OK


COMMANDS = {"laws": cmd_laws, "adjoint": cmd_adjoint, "poly": cmd_poly, "eval": cmd_eval}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET
    except (DslSyntaxError, InstanceFileError) as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_USAGE
    except TermTypeError as exc:
        print(f"type error: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=err)
        return EXIT_USAGE
    except (ValueError, ModelError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main_entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    main_entrypoint()
