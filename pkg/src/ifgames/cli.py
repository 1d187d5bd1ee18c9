"""Command-line front end: reproducible runs from matrices, sentences, or the
built-in case studies.

Machine-format output is line-oriented ``key=value`` with every rational as
``p/q`` and never a decimal, so identical inputs give byte-identical output.
Exit codes: 1 usage, 2 parse, 3 validation, 4 budget.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import applications
from .errors import (
    BudgetExceededError,
    EvaluationError,
    GameBuildError,
    IfGamesError,
    ParseError,
    SizeLimitError,
    StructureFormatError,
)
from .formula import parse as parse_formula
from .formula import validate
from .matrix_game import GameMatrix, MixedStrategy, format_matrix, parse_matrix, reduce, tallies
from .semantic_game import DEFAULT_STRATEGY_BUDGET, build_matrix
from .structure import load_structure
from .value_engine import (
    ValueReport,
    balanced_value,
    detect_trivial,
    solve_value,
    verify_equilibrium,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_BUDGET = 4

_SOLVE_DIRECTLY_LIMIT = 64


class _UsageError(Exception):
    pass


class _ValidationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that for parse errors
        raise _UsageError(message)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _strategy(ms: MixedStrategy) -> str:
    return " ".join(f"{i}:{_frac(p)}" for i, p in enumerate(ms.probs) if p)


class _Report:
    """Ordered key/value lines rendered per output format."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.pairs: list[tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        self.pairs.append((key, str(value)))

    def add_frac(self, key: str, x: Fraction) -> None:
        if self.fmt == "machine":
            self.pairs.append((key, _frac(x)))
        else:
            self.pairs.append((key, f"{_frac(x)} (~{float(x):.6f})"))

    def print(self) -> None:
        for key, value in self.pairs:
            if self.fmt == "machine":
                print(f"{key}={value}")
            else:
                print(f"{key} {value}")


def _add_game_inputs(p: _Parser) -> None:
    p.add_argument("--matrix", metavar="PATH", help="matrix text file ('m n' header, 0/1 rows)")
    p.add_argument("--structure", metavar="PATH", help="structure file (JSON)")
    p.add_argument("--formula", metavar="TEXT", help="sentence text")
    p.add_argument("--formula-file", metavar="PATH", help="file holding the sentence text")
    p.add_argument("--no-collapse", action="store_true", help="keep fully informed connectives as moves")
    p.add_argument(
        "--max-strategies",
        type=int,
        default=DEFAULT_STRATEGY_BUDGET,
        metavar="N",
        help="per-player pure strategy budget (default 2^20)",
    )


def _add_format(p: _Parser) -> None:
    p.add_argument("--format", choices=("text", "machine"), default="text")


def build_parser() -> _Parser:
    parser = _Parser(prog="ifgames", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, doc in (
        ("value", "exact value of a game"),
        ("bounds", "uniform-strategy floor and ceiling"),
        ("equilibrium", "exact value with verified equilibrium strategies"),
        ("reduce", "iterated removal of duplicate and weakly dominated strategies"),
        ("matrix", "print the built strategic game in matrix text format"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_game_inputs(p)
        _add_format(p)

    p = sub.add_parser("mp", help="Matching Pennies on an n-element structure")
    p.add_argument("n", type=int)
    _add_format(p)

    p = sub.add_parser("birthday", help="birthday game: N urn size, M draws")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    _add_format(p)

    p = sub.add_parser("hashing", help="universal hashing game: NKEYS NVALUES")
    p.add_argument("keys", type=int)
    p.add_argument("values", type=int)
    _add_format(p)

    return parser


def _load_game(args) -> GameMatrix:
    from_matrix = args.matrix is not None
    from_sentence = args.structure is not None or args.formula is not None or args.formula_file is not None
    if from_matrix == from_sentence:
        raise _UsageError("provide either --matrix or a --structure with a formula")
    if from_matrix:
        return parse_matrix(Path(args.matrix).read_text())
    if args.structure is None:
        raise _UsageError("--formula needs --structure")
    if (args.formula is None) == (args.formula_file is None):
        raise _UsageError("provide exactly one of --formula / --formula-file")
    structure = load_structure(Path(args.structure).read_text())
    text = args.formula if args.formula is not None else Path(args.formula_file).read_text()
    sentence = parse_formula(text, structure.vocabulary())
    violations = validate(sentence, structure.vocabulary())
    if violations:
        raise _ValidationFailure("; ".join(str(v) for v in violations))
    report = build_matrix(
        structure, sentence, collapse=not args.no_collapse, max_strategies=args.max_strategies
    )
    return report.matrix


def solve_game(u: GameMatrix) -> ValueReport:
    """Trivial wins, the balanced shortcut, then LP; big games are reduced
    first and the reduced equilibrium is lifted back (padding removed
    strategies with zero keeps it an equilibrium) and re-verified."""
    report = detect_trivial(u)
    if report is None:
        report = balanced_value(u)
    if report is None and max(u.m, u.n) > _SOLVE_DIRECTLY_LIMIT:
        reduced, rows, cols = reduce(u)
        if (reduced.m, reduced.n) != (u.m, u.n):
            inner = solve_game(reduced)
            mu = [Fraction(0)] * u.m
            for k, i in enumerate(rows):
                mu[i] = inner.eloise.probs[k]
            nu = [Fraction(0)] * u.n
            for k, j in enumerate(cols):
                nu[j] = inner.abelard.probs[k]
            report = ValueReport(
                value=inner.value,
                eloise=MixedStrategy(tuple(mu), "row"),
                abelard=MixedStrategy(tuple(nu), "column"),
                method=inner.method,
            )
            if not verify_equilibrium(u, report.eloise, report.abelard):
                raise RuntimeError("lifted equilibrium failed verification")
    if report is None:
        report = solve_value(u)
    return report


def _report_game(u: GameMatrix, fmt: str, command: str, verified_line: bool) -> None:
    out = _Report(fmt)
    out.add("command", command)
    out.add("rows", u.m)
    out.add("cols", u.n)
    t = tallies(u)
    out.add_frac("floor", t.floor)
    out.add_frac("ceil", t.ceil)
    solved = solve_game(u)
    out.add_frac("value", solved.value)
    out.add("method", solved.method)
    out.add("eloise", _strategy(solved.eloise))
    out.add("abelard", _strategy(solved.abelard))
    if verified_line:
        out.add("verified", str(verify_equilibrium(u, solved.eloise, solved.abelard)).lower())
    out.print()


def _run(args) -> int:
    fmt = getattr(args, "format", "text")
    if args.command in ("value", "equilibrium"):
        u = _load_game(args)
        _report_game(u, fmt, args.command, verified_line=args.command == "equilibrium")
        return EXIT_OK
    if args.command == "bounds":
        u = _load_game(args)
        out = _Report(fmt)
        out.add("command", "bounds")
        out.add("rows", u.m)
        out.add("cols", u.n)
        t = tallies(u)
        out.add_frac("floor", t.floor)
        out.add_frac("ceil", t.ceil)
        out.add("colmin", t.colmin)
        out.add("rowmax", t.rowmax)
        out.print()
        return EXIT_OK
    if args.command == "reduce":
        u = _load_game(args)
        reduced, rows, cols = reduce(u)
        out = _Report(fmt)
        out.add("command", "reduce")
        out.add("rows", u.m)
        out.add("cols", u.n)
        out.add("kept_rows", ",".join(map(str, rows)))
        out.add("kept_cols", ",".join(map(str, cols)))
        out.print()
        sys.stdout.write(format_matrix(reduced))
        return EXIT_OK
    if args.command == "matrix":
        u = _load_game(args)
        sys.stdout.write(format_matrix(u))
        return EXIT_OK
    if args.command == "mp":
        sentence, structure = applications.matching_pennies(args.n)
        u = build_matrix(structure, sentence).matrix
        _report_game(u, fmt, "mp", verified_line=False)
        return EXIT_OK
    if args.command == "birthday":
        sentence = applications.birthday_sentence(args.m)
        structure = applications.cyclic_structure(args.n)
        u = build_matrix(structure, sentence).matrix
        all_distinct, duplicate = applications.birthday_closed_form(args.n, args.m)
        _report_game(u, fmt, "birthday", verified_line=False)
        out = _Report(fmt)
        out.add_frac("all_distinct", all_distinct)
        out.add_frac("duplicate_prob", duplicate)
        out.print()
        return EXIT_OK
    if args.command == "hashing":
        _, spec = applications.hash_structure(args.keys, args.values)
        eq = applications.hashing_equilibrium(spec)
        u = eq.build.matrix
        out = _Report(fmt)
        out.add("command", "hashing")
        out.add("rows", u.m)
        out.add("cols", u.n)
        t = tallies(u)
        out.add_frac("floor", t.floor)
        out.add_frac("ceil", t.ceil)
        out.add_frac("value", eq.value)
        out.add("method", "hashing-certificate" if eq.verified else "lp")
        out.add("verified", str(eq.verified).lower())
        out.add("minimal_degree_indices", ",".join(map(str, sorted(eq.minimal_degree))))
        out.add("eloise", _strategy(eq.eloise))
        out.add("adversary_pair_count", len(eq.adversary_pairs))
        out.print()
        return EXIT_OK
    raise _UsageError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except _ValidationFailure as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except StructureFormatError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (GameBuildError, EvaluationError) as e:
        if isinstance(e, BudgetExceededError):
            print(f"budget error: {e}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except SizeLimitError as e:
        print(f"budget error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except FileNotFoundError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IfGamesError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
