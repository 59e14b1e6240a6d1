"""Command line entry point.

Every subcommand prints deterministic JSON.  Exit status is 0 on success,
1 when the input is well formed but the computation is undefined or hits a
cap, and 2 on malformed input or arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import engine as E
from .convert import GrammarViolation, convert_monomial
from .engine import EngineError
from .parser import ParseError, parse_expression, parse_loops, parse_word
from .rings import NotAUnit


class UsageError(Exception):
    pass


def _dump(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _element(text: str, strands: Optional[int] = None):
    try:
        return parse_expression(text).to_element(strands)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_normalize(args) -> None:
    _dump(_element(args.expr, args.strands).to_json(), args.out)


def cmd_convert(args) -> None:
    try:
        m, _ = parse_loops(args.expr)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump(convert_monomial(m, args.strands).to_json(), args.out)


def cmd_reduce(args) -> None:
    from .gaps import check_replay, run_gap_moves
    from .tails import reduce_to_basis, verify_reduction

    x = _element(args.expr, args.strands)
    if args.gaps_only:
        result, trace = run_gap_moves(x)
        if not check_replay(x, trace, result):
            raise ArithmeticError("witness replay failed")
    else:
        result, trace = reduce_to_basis(x, not args.no_canonical)
        if not verify_reduction(x, result, trace, not args.no_canonical):
            raise ArithmeticError("witness replay failed")
    if args.witness:
        _dump(trace.to_json(), args.witness)
    _dump(result.to_json(), args.out)


def cmd_trace(args) -> None:
    from .trace import markov_trace

    _dump(markov_trace(_element(args.expr, args.strands)).to_json(), args.out)


def cmd_invariant(args) -> None:
    from .trace import invariant_x

    try:
        w = parse_word(args.expr, args.strands)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump(invariant_x(w).to_json(), args.out)


def cmd_matrix(args) -> None:
    from .matrix import build_block, check_triangular

    B = build_block(args.level, args.max_index, args.max_exp, not args.no_canonical)
    data = B.to_json()
    rep = check_triangular(B)
    data["triangular"] = rep.ok
    data["violations"] = rep.violations
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(B.to_csv())
    _dump(data, args.out)


def cmd_order(args) -> None:
    from .order import compare_name, enumerate_level, loops_json

    if args.action == "compare":
        if len(args.monomials) != 2:
            raise UsageError("order compare needs two monomials")
        try:
            a, b = (parse_loops(s)[0] for s in args.monomials)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        sys.stdout.write(compare_name(a, b) + "\n")
    else:
        if args.level is None:
            raise UsageError("order enumerate needs --level")
        mons = enumerate_level(args.level, args.max_index, args.max_exp, not args.no_canonical)
        _dump([loops_json(m) for m in mons], args.out)


def cmd_verify(args) -> int:
    from .verify import SUITES, run_verification_suite

    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_verification_suite(s, args.n_max, args.exp_max, args.count, args.seed).to_json()
               for s in suites]
    _dump(reports if len(reports) > 1 else reports[0], args.out)
    return 0 if all(r["passed"] for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stskein", description="Exact computations in the skein module of the solid torus.")
    p.add_argument("--term-cap", type=int, help="maximum number of terms in any intermediate result")
    p.add_argument("--depth-cap", type=int, help="maximum recursion or rewrite depth")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp, strands=True):
        sp.add_argument("--in", dest="expr", required=True, help="input expression")
        if strands:
            sp.add_argument("--strands", type=int, help="number of strands (default: inferred)")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        return sp

    with_input(sub.add_parser("normalize", help="normal form in the algebra")).set_defaults(fn=cmd_normalize)
    with_input(sub.add_parser("convert", help="expand a t'-monomial over t-monomials")).set_defaults(fn=cmd_convert)

    sp = with_input(sub.add_parser("reduce", help="reduce to the basis of the module"))
    sp.add_argument("--gaps-only", action="store_true", help="only remove index gaps")
    sp.add_argument("--no-canonical", action="store_true", help="keep exponent arrangements as produced")
    sp.add_argument("--witness", help="write the rewrite trace here")
    sp.set_defaults(fn=cmd_reduce)

    with_input(sub.add_parser("trace", help="Markov trace")).set_defaults(fn=cmd_trace)
    with_input(sub.add_parser("invariant", help="normalized link invariant of a word")).set_defaults(fn=cmd_invariant)

    sp = sub.add_parser("matrix", help="change-of-basis block at one level")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--max-index", type=int, default=2)
    sp.add_argument("--max-exp", type=int, default=2)
    sp.add_argument("--no-canonical", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--csv", help="write the q^0 slice as CSV here")
    sp.set_defaults(fn=cmd_matrix)

    sp = sub.add_parser("order", help="compare or enumerate loop monomials")
    sp.add_argument("action", choices=("compare", "enumerate"))
    sp.add_argument("monomials", nargs="*")
    sp.add_argument("--level", type=int)
    sp.add_argument("--max-index", type=int, default=2)
    sp.add_argument("--max-exp", type=int, default=2)
    sp.add_argument("--no-canonical", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_order)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("relations", "lemmas", "order", "pipeline", "matrix", "trace", "all"),
                    default="all")
    sp.add_argument("--n-max", type=int, default=4)
    sp.add_argument("--exp-max", type=int, default=3)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = E.saved_caps()
    E.set_caps(args.term_cap, args.depth_cap)
    try:
        status = args.fn(args)
    except (ParseError, UsageError, IndexError, E.IndexOutOfRange, GrammarViolation) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (EngineError, NotAUnit, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    finally:
        E.restore_caps(saved)
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
