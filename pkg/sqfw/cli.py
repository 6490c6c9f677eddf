"""Copyright 2026 PythonistaGuild

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from __future__ import annotations

import argparse
import json
import logging
import pathlib
import sys
from collections.abc import Callable, Iterator, Sequence

from .automatic import Dfao, dfao_equiv_prefix, kernel_synthesize
from .catalog import load
from .claims import summary, verify_paper, write_report
from .config import get_settings
from .embed import arithmetic_positions, embed
from .errors import ConstraintError, SqfwError
from .morphisms import Morphism, MultiMorphism, fixed_point, parse_morphism, parse_multimorphism, vtm
from .search import (
    Constraint,
    backtrack,
    exhaustive_max,
    lcp_bound_check,
    lcp_flank_solutions,
    lcp_search,
    pq_probe,
    target_stream,
)
from .types_ import SearchOptions
from .utils import setup_logging
from .verify import (
    CondThreeWitness,
    Verdict,
    multi_sqf_test,
    ternary_sqf_test,
    uniform_sqf_test,
    vtm_cond1,
    vtm_cond2,
    vtm_cond3,
)
from .words import Alphabet, Word, WordStream, find_square, subsample


__all__ = ("dispatch", "main", "build_parser")


logger: logging.Logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], int]


def _asset_path(value: str) -> pathlib.Path:
    path: pathlib.Path = pathlib.Path(value)
    if not path.exists() and (get_settings().asset_dir / value).exists():
        return get_settings().asset_dir / value

    return path


def _morphism(args: argparse.Namespace) -> Morphism | MultiMorphism:
    if args.name:
        return load(strict=False)[args.name].morphism

    path: pathlib.Path = _asset_path(args.file)
    text: str = path.read_text("ascii")
    if getattr(args, "mode", None) == "multi":
        return parse_multimorphism(text, source=path.name, name=path.stem)

    return parse_morphism(text, source=path.name, name=path.stem)


def _print_verdict(verdict: Verdict) -> int:
    print(f"{verdict.test}({verdict.subject}): {'pass' if verdict.passed else 'fail'}")
    if verdict.counterexample is not None:
        print(f"  counterexample: {verdict.counterexample!r}")
    if verdict.details:
        print(f"  {json.dumps(verdict.details, default=str)}")

    return 0 if verdict.passed else 1


def check_word(args: argparse.Namespace) -> int:
    word: Word = Word.from_digits(args.word, Alphabet(args.alphabet))
    location = find_square(word)
    if location is None:
        print("squarefree")
        return 0

    start, period = location
    print(f"square at {start} with period {period}: {word[start : start + 2 * period]}")
    return 1


def check_morphism(args: argparse.Namespace) -> int:
    h = _morphism(args)

    if isinstance(h, MultiMorphism):
        return _print_verdict(multi_sqf_test(h))

    match args.mode:
        case "ternary":
            return _print_verdict(ternary_sqf_test(h))
        case "uniform":
            return _print_verdict(uniform_sqf_test(h))
        case "vtm":
            code: int = _print_verdict(vtm_cond1(h))
            code |= _print_verdict(vtm_cond2(h)[0])
            if args.witness:
                code |= _print_verdict(vtm_cond3(h, CondThreeWitness.from_digits(*args.witness)))
            return code
        case _:
            msg: str = f"--mode multi needs a multi-valued morphism file, got {args.mode!r}."
            raise SqfwError(msg)


def gen(args: argparse.Namespace) -> int:
    h = _morphism(args)
    if not isinstance(h, Morphism):
        msg: str = "gen needs a single-valued morphism."
        raise SqfwError(msg)

    print(fixed_point(h, args.letter).prefix(args.len))
    return 0


def subsample_command(args: argparse.Namespace) -> int:
    if args.word == "vtm" or args.len is not None:
        source: Word = target_stream(args.word).prefix((args.len or 1000) * args.p + args.offset)
    else:
        source = Word.from_digits(args.word)

    print(subsample(source, args.p, args.offset))
    return 0


def _constraint(args: argparse.Namespace) -> Constraint:
    if args.constraint:
        path: pathlib.Path = pathlib.Path(args.constraint)
        base: Constraint = Constraint.parse(path.read_text(), source=path.name)
    else:
        base = Constraint()

    fixed: dict[int, int] = dict(base.fixed)
    for index, letter in args.fix or ():
        fixed[int(index)] = int(letter)

    progressions = list(base.progressions)
    progressions.extend((int(p), int(offset), stream) for p, offset, stream in args.fixmod or ())
    if args.constant is not None:
        progressions.append((args.constant, 0, str(args.letter)))

    return Constraint(fixed=fixed, progressions=progressions, sqf_moduli=[*base.sqf_moduli, *(args.sqfmod or ())])


def search(args: argparse.Namespace) -> int:
    constraint: Constraint = _constraint(args)

    if args.exhaustive:
        options: SearchOptions = {"budget": args.budget} if args.budget else {}
        outcome = exhaustive_max(constraint, args.cap, workers=args.workers, **options)
    else:
        outcome = backtrack(constraint, args.target, args.budget)

    print(f"{outcome.kind} max_length={outcome.max_length} nodes={outcome.nodes}")
    for word in outcome.maximal_words or [outcome.word]:
        print(word)

    return 0 if outcome.kind in ("found", "exhausted") else 1


def probe(args: argparse.Namespace) -> int:
    outcome = pq_probe(args.p, args.q, args.budget, cap=args.cap)
    print(f"{outcome.kind} deepest={outcome.plateau()} nodes={outcome.nodes}")
    for nodes, depth in outcome.profile:
        print(f"  {nodes} {depth}")

    return 0


def _positions(spec: str) -> Iterator[int]:
    try:
        if spec.startswith("arith:"):
            start, step = (int(part) for part in spec.removeprefix("arith:").split(","))
            return arithmetic_positions(start, step)

        return iter([int(token) for token in pathlib.Path(spec).read_text().split()])
    except ValueError:
        msg: str = f"Positions must be integers given as a file or arith:P0,STEP, not {spec!r}."
        raise ConstraintError(msg) from None


def embed_command(args: argparse.Namespace) -> int:
    v: Word | WordStream = vtm() if args.v == "vtm" else Word.from_digits(args.v)
    state = embed(_positions(args.positions), v, args.len)

    print(state.result(args.len))
    print(json.dumps({"rotation": state.rotation, "swaps": state.swaps}))
    return 0


def lcp(args: argparse.Namespace) -> int:
    if args.search:
        n, target = args.search
        found = lcp_search(n, target, args.budget)
        if found is None:
            print("none")
            return 1

        for letter, image in enumerate(found.images):
            print(f"{letter} -> {image}")
        return 0

    if args.flank:
        word_len, flank, group = args.flank
        solutions = lcp_flank_solutions(word_len, flank, group, limit=args.limit)
        for p, s, middles in solutions:
            print(p, s, " ".join(map(str, middles)))
        return 0 if solutions else 1

    holds: bool = lcp_bound_check()
    print("no (p, s) admits three middles" if holds else "bound violated")
    return 0 if holds else 1


def dfao(args: argparse.Namespace) -> int:
    if args.file:
        path: pathlib.Path = pathlib.Path(args.file)
        automaton: Dfao = Dfao.from_text(path.read_text(), source=path.name)
    else:
        automaton = kernel_synthesize(target_stream(args.stream), args.compare_len)
        print(automaton.to_text(), end="")

    if args.eval is not None:
        print(automaton.eval(args.eval))

    if args.validate:
        agrees: bool = dfao_equiv_prefix(automaton, target_stream(args.stream), args.validate)
        print(f"agrees below {args.validate}: {agrees}")
        return 0 if agrees else 1

    return 0


def verify_paper_command(args: argparse.Namespace) -> int:
    records = verify_paper(args.scope, seed=args.seed, workers=args.workers)

    if args.jsonl:
        with open(args.jsonl, "w") as fp:
            write_report(records, fp)
    else:
        write_report(records, sys.stdout)

    print(summary(records))
    return 1 if any(record["status"] == "fail" for record in records) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqfw", description="Squarefree words with constrained arithmetic subsequences.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Handler, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.set_defaults(handler=handler)
        return sub

    def morphism_source(sub: argparse.ArgumentParser) -> None:
        group = sub.add_mutually_exclusive_group(required=True)
        group.add_argument("--file", help="Morphism file (asset names are resolved too).")
        group.add_argument("--name", "--morphism", dest="name", help="Catalog entry name.")

    sub = command("check-word", check_word, "Find the first square in a word.")
    sub.add_argument("word")
    sub.add_argument("--alphabet", type=int, default=3)

    sub = command("check-morphism", check_morphism, "Test a morphism for squarefreeness.")
    morphism_source(sub)
    sub.add_argument("--mode", choices=("ternary", "uniform", "multi", "vtm"), default="ternary")
    sub.add_argument("--witness", nargs="+", help="Suffixes v_a for the vtm boundary test.")

    sub = command("gen", gen, "Print a prefix of a fixed point.")
    morphism_source(sub)
    sub.add_argument("--letter", type=int, default=0)
    sub.add_argument("--len", type=int, required=True)

    sub = command("subsample", subsample_command, "Print the p-subsample of a word or of vtm.")
    sub.add_argument("word", help="Digits, or 'vtm'.")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--offset", type=int, default=0)
    sub.add_argument("--len", type=int, help="Letters of the subsample to print for streams.")

    sub = command("search", search, "Backtracking search under a constraint.")
    sub.add_argument("--constraint", help="Constraint file.")
    sub.add_argument("--fix", nargs=2, action="append", metavar=("INDEX", "LETTER"))
    sub.add_argument("--fixmod", nargs=3, action="append", metavar=("P", "OFFSET", "STREAM"))
    sub.add_argument("--sqfmod", type=int, action="append")
    sub.add_argument("--constant", type=int, metavar="P", help="Require [w]_P to be constant.")
    sub.add_argument("--letter", type=int, default=0)
    sub.add_argument("--target", type=int, default=100)
    sub.add_argument("--exhaustive", action="store_true")
    sub.add_argument("--cap", type=int, default=1000)
    sub.add_argument("--budget", type=int)
    sub.add_argument("--workers", type=int)

    sub = command("probe", probe, "How deep a search gets with [w]_p and [w]_q squarefree.")
    sub.add_argument("p", type=int)
    sub.add_argument("q", type=int)
    sub.add_argument("--budget", type=int, default=10**6)
    sub.add_argument("--cap", type=int, default=100_000)

    sub = command("embed", embed_command, "Force a word onto positions with gaps of at least 30.")
    sub.add_argument("--positions", required=True, help="File of positions, or 'arith:P0,STEP'.")
    sub.add_argument("--v", required=True, help="Digits, or 'vtm'.")
    sub.add_argument("--len", type=int, required=True)

    sub = command("lcp", lcp, "Common prefix experiments.")
    sub.add_argument("--search", nargs=2, type=int, metavar=("N", "LCP"))
    sub.add_argument("--flank", nargs=3, type=int, metavar=("WORD_LEN", "FLANK", "GROUP"))
    sub.add_argument("--budget", type=int, default=10**6)
    sub.add_argument("--limit", type=int)

    sub = command("dfao", dfao, "Synthesize, evaluate or validate a 2-DFAO.")
    sub.add_argument("--stream", default="vtm")
    sub.add_argument("--file", help="Read the automaton instead of synthesizing it.")
    sub.add_argument("--compare-len", type=int)
    sub.add_argument("--eval", type=int)
    sub.add_argument("--validate", type=int)

    sub = command("verify-paper", verify_paper_command, "Re-run every recorded claim.")
    sub.add_argument("--scope", choices=("fast", "all"), default="fast")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--workers", type=int)
    sub.add_argument("--jsonl", help="Write records here instead of stdout.")

    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose:
        setup_logging(
            handler=logging.StreamHandler(sys.stderr),
            level=logging.INFO if args.verbose == 1 else logging.DEBUG,
            root=False,
        )

    try:
        return args.handler(args)
    except (SqfwError, ValueError, OSError) as e:
        print(f"sqfw: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())
