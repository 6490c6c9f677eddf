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

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TYPE_CHECKING, Unpack

from .errors import ConstraintError, ParseError
from .morphisms import Morphism, vtm
from .verify import uniform_sqf_test
from .words import TERNARY, Alphabet, Word, WordStream, enumerate_squarefree, is_squarefree, subsample, suffix_square_period


if TYPE_CHECKING:
    from .types_.core import OutcomeKind, SearchOptions


__all__ = (
    "target_stream",
    "Constraint",
    "SearchOutcome",
    "backtrack",
    "exhaustive_max",
    "pq_probe",
    "lcp_flank_solutions",
    "lcp_bound_check",
    "lcp_search",
    "canonical_maximal_words",
    "block_structure",
    "brute_force_max",
)


logger: logging.Logger = logging.getLogger(__name__)

FREE: int = 255
DEFAULT_PROFILE_INTERVAL: int = 1_000_000

# Named target streams usable in ``fixmod`` lines, besides digit blocks.
NAMED_STREAMS: tuple[str, ...] = ("vtm",)


def target_stream(source: str) -> WordStream:
    if source == "vtm":
        return vtm()

    try:
        return WordStream.periodic(Word.from_digits(source), name=f"({source})^w")
    except ValueError:
        msg: str = f"Unknown target stream {source!r}: use digits or one of {NAMED_STREAMS}."
        raise ConstraintError(msg) from None


class Constraint:
    """Fixed letters, arithmetic-progression targets and subsample-squarefree moduli for a search.

    A progression ``(p, offset, source)`` requires ``w[offset + i*p] = v[i]`` where ``v`` is the
    stream named by ``source`` (``vtm`` or a digit block repeated forever).
    """

    __slots__ = ("fixed", "progressions", "sqf_moduli", "alphabet")

    def __init__(
        self,
        *,
        fixed: dict[int, int] | None = None,
        progressions: Iterable[tuple[int, int, str]] = (),
        sqf_moduli: Iterable[int] = (),
        alphabet: Alphabet = TERNARY,
    ) -> None:
        self.fixed: dict[int, int] = dict(fixed or {})
        self.progressions: tuple[tuple[int, int, str], ...] = tuple(progressions)
        self.sqf_moduli: tuple[int, ...] = tuple(sorted(set(sqf_moduli)))
        self.alphabet: Alphabet = alphabet

        for p, offset, source in self.progressions:
            if p < 1 or offset < 0:
                msg: str = f"Invalid progression p={p} offset={offset}."
                raise ConstraintError(msg)
            target_stream(source)

        for p in self.sqf_moduli:
            if p < 2:
                msg = f"Subsample moduli must be at least 2, not {p}."
                raise ConstraintError(msg)

        for index, letter in self.fixed.items():
            if index < 0 or not 0 <= letter < alphabet.size:
                msg = f"Cannot fix position {index} to letter {letter}."
                raise ConstraintError(msg)

    @classmethod
    def constant(cls, p: int, letter: int = 0) -> Constraint:
        """``[w]_p`` is the constant word ``letter letter ...``."""
        return cls(progressions=[(p, 0, str(letter))])

    def required(self, length: int) -> bytes:
        """Required letter per position below ``length``; ``FREE`` where unconstrained."""
        out: bytearray = bytearray([FREE]) * length

        def put(index: int, letter: int, origin: str) -> None:
            if out[index] not in (FREE, letter):
                msg: str = f"Position {index} is required to be both {out[index]} and {letter} ({origin})."
                raise ConstraintError(msg)
            out[index] = letter

        for index, letter in self.fixed.items():
            if index < length:
                put(index, letter, "fix")

        for p, offset, source in self.progressions:
            count: int = max(0, (length - offset + p - 1) // p)
            for i, letter in enumerate(target_stream(source).slice(0, count)):
                put(offset + i * p, letter, f"fixmod {p} {offset} {source}")

        return bytes(out)

    def check(self, word: Word) -> bool:
        """Validate a finished word without any search state."""
        if not is_squarefree(word):
            return False

        if any(not is_squarefree(subsample(word, p)) for p in self.sqf_moduli):
            return False

        required: bytes = self.required(len(word))
        return all(need in (FREE, letter) for need, letter in zip(required, word.letters))

    @classmethod
    def parse(cls, text: str, *, source: str | None = None) -> Constraint:
        fixed: dict[int, int] = {}
        progressions: list[tuple[int, int, str]] = []
        moduli: list[int] = []

        for number, raw in enumerate(text.splitlines(), start=1):
            parts: list[str] = raw.split("#", 1)[0].split()
            if not parts:
                continue

            try:
                match parts:
                    case ["fix", index, letter]:
                        if int(index) in fixed and fixed[int(index)] != int(letter):
                            msg: str = f"Position {index} fixed twice to different letters."
                            raise ParseError(msg, source=source, line=number)
                        fixed[int(index)] = int(letter)
                    case ["fixmod", p, offset, stream]:
                        progressions.append((int(p), int(offset), stream))
                    case ["sqfmod", p]:
                        moduli.append(int(p))
                    case _:
                        raise ValueError(raw)
            except ParseError:
                raise
            except ValueError:
                msg = f"Expected 'fix i a', 'fixmod p offset stream' or 'sqfmod p', got {raw.strip()!r}."
                raise ParseError(msg, source=source, line=number) from None

        try:
            return cls(fixed=fixed, progressions=progressions, sqf_moduli=moduli)
        except ConstraintError as e:
            raise ParseError(str(e), source=source) from e

    def format(self) -> str:
        lines: list[str] = [f"fix {index} {letter}" for index, letter in sorted(self.fixed.items())]
        lines.extend(f"fixmod {p} {offset} {source}" for p, offset, source in self.progressions)
        lines.extend(f"sqfmod {p}" for p in self.sqf_moduli)
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Constraint({self.format().strip().replace(chr(10), '; ')})"


class SearchOutcome:
    """Result of a backtracking run.

    ``word`` is the found word, or the lexicographically first deepest word reached.
    ``profile`` samples ``(nodes, deepest length)`` every profile interval.
    """

    __slots__ = ("kind", "word", "max_length", "maximal_words", "nodes", "profile", "cap_reached")

    def __init__(
        self,
        kind: OutcomeKind,
        word: Word,
        *,
        maximal_words: Sequence[Word] = (),
        nodes: int = 0,
        profile: Sequence[tuple[int, int]] = (),
        cap_reached: bool = False,
    ) -> None:
        self.kind: OutcomeKind = kind
        self.word: Word = word
        self.max_length: int = len(word)
        self.maximal_words: list[Word] = list(maximal_words)
        self.nodes: int = nodes
        self.profile: list[tuple[int, int]] = list(profile)
        self.cap_reached: bool = cap_reached

    def plateau(self) -> int:
        """Deepest length recorded, profile included."""
        return max([self.max_length, *(depth for _, depth in self.profile)])

    def __repr__(self) -> str:
        return f"SearchOutcome: kind={self.kind}, max_length={self.max_length}, nodes={self.nodes}"


class _Job:
    """Everything a worker needs; plain data so it pickles."""

    __slots__ = ("required", "moduli", "size", "cap", "target", "budget", "profile_interval", "collect", "prefix")

    def __init__(
        self,
        required: bytes,
        moduli: tuple[int, ...],
        size: int,
        cap: int,
        target: int | None,
        budget: int | None,
        profile_interval: int,
        collect: bool,
        prefix: bytes = b"",
    ) -> None:
        self.required = required
        self.moduli = moduli
        self.size = size
        self.cap = cap
        self.target = target
        self.budget = budget
        self.profile_interval = profile_interval
        self.collect = collect
        self.prefix = prefix


def _run(job: _Job) -> SearchOutcome:
    required, moduli, cap = job.required, job.moduli, job.cap
    w: bytearray = bytearray()
    subsamples: dict[int, bytearray] = {p: bytearray() for p in moduli}

    def push(letter: int) -> bool:
        n: int = len(w)
        w.append(letter)
        if suffix_square_period(w, n + 1):
            w.pop()
            return False

        touched: list[int] = []
        for p in moduli:
            if n % p == 0:
                sample: bytearray = subsamples[p]
                sample.append(letter)
                touched.append(p)
                if suffix_square_period(sample, len(sample)):
                    for q in touched:
                        subsamples[q].pop()
                    w.pop()
                    return False

        return True

    def pop() -> None:
        n: int = len(w) - 1
        w.pop()
        for p in moduli:
            if n % p == 0:
                subsamples[p].pop()

    for index, letter in enumerate(job.prefix):
        if required[index] not in (FREE, letter) or not push(letter):
            msg: str = f"The starting prefix {job.prefix.hex()} violates the constraint."
            raise ConstraintError(msg)

    base: int = len(w)
    letters: range = range(job.size)
    choices: list[int] = [0]
    nodes: int = 0
    best: int = base
    maximal: list[bytes] = [bytes(w)]
    profile: list[tuple[int, int]] = []
    cap_reached: bool = False

    def outcome(kind: OutcomeKind) -> SearchOutcome:
        words: list[Word] = [Word(word) for word in maximal] if job.collect else []
        return SearchOutcome(
            kind,
            Word(maximal[0]),
            maximal_words=words,
            nodes=nodes,
            profile=profile,
            cap_reached=cap_reached,
        )

    while True:
        n: int = len(w)
        if job.target is not None and n >= job.target:
            maximal = [bytes(w)]
            return outcome("found")

        pushed: bool = False
        if n < cap:
            need: int = required[n] if n < len(required) else FREE
            start: int = choices[-1]
            candidates: Iterable[int] = letters[start:] if need == FREE else ((need,) if need >= start else ())

            for letter in candidates:
                if push(letter):
                    choices[-1] = letter + 1
                    choices.append(0)
                    pushed = True
                    break
        else:
            cap_reached = True

        if pushed:
            nodes += 1
            n += 1
            if n > best:
                best = n
                maximal = [bytes(w)]
            elif n == best and job.collect:
                maximal.append(bytes(w))

            if job.profile_interval and nodes % job.profile_interval == 0:
                profile.append((nodes, best))
                logger.debug("Search profile: %d nodes, deepest %d.", nodes, best)

            if job.budget is not None and nodes >= job.budget:
                return outcome("budget_exhausted")

            continue

        choices.pop()
        if n == base:
            return outcome("budget_exhausted" if cap_reached else "exhausted")

        pop()


def _job(constraint: Constraint, cap: int, options: SearchOptions, *, target: int | None, collect: bool) -> _Job:
    return _Job(
        constraint.required(cap),
        constraint.sqf_moduli,
        constraint.alphabet.size,
        cap,
        target,
        options.get("budget"),
        options.get("profile_interval", DEFAULT_PROFILE_INTERVAL),
        options.get("collect_maximal", collect),
    )


def backtrack(constraint: Constraint, target_len: int, budget: int | None = None, **options: Unpack[SearchOptions]) -> SearchOutcome:
    """Depth-first search for a word of ``target_len`` letters, trying letters in ascending order."""
    if budget is not None:
        options["budget"] = budget

    outcome: SearchOutcome = _run(_job(constraint, target_len, options, target=target_len, collect=False))
    logger.info("backtrack(%r, %d): %r", constraint, target_len, outcome)
    return outcome


def _merge(outcomes: Sequence[SearchOutcome], extra_nodes: int) -> SearchOutcome:
    best: int = max(outcome.max_length for outcome in outcomes)
    words: list[Word] = sorted(
        {word for outcome in outcomes if outcome.max_length == best for word in outcome.maximal_words}
    )
    kinds: set[str] = {outcome.kind for outcome in outcomes}
    kind: OutcomeKind = "exhausted" if kinds == {"exhausted"} else "budget_exhausted"

    return SearchOutcome(
        kind,
        words[0],
        maximal_words=words,
        nodes=extra_nodes + sum(outcome.nodes for outcome in outcomes),
        cap_reached=any(outcome.cap_reached for outcome in outcomes),
    )


def exhaustive_max(
    constraint: Constraint,
    cap: int,
    *,
    workers: int | None = None,
    split_depth: int = 8,
    **options: Unpack[SearchOptions],
) -> SearchOutcome:
    """Explore the whole constrained tree up to ``cap`` and report the maximum length and every maximal word.

    With ``workers``, the tree is split at ``split_depth`` and subtrees run on a process pool;
    the merged outcome is identical to the serial one.
    """
    job: _Job = _job(constraint, cap, options, target=None, collect=True)

    if not workers or workers < 2 or split_depth >= cap:
        outcome: SearchOutcome = _run(job)
    else:
        split: SearchOutcome = _run(
            _Job(job.required, job.moduli, job.size, split_depth, None, None, 0, True)
        )
        if split.max_length < split_depth:
            outcome = split
        else:
            jobs: list[_Job] = [
                _Job(job.required, job.moduli, job.size, cap, None, job.budget, 0, True, word.letters)
                for word in split.maximal_words
            ]
            with ProcessPoolExecutor(max_workers=workers) as executor:
                outcome = _merge(list(executor.map(_run, jobs)), split.nodes)

    if outcome.cap_reached:
        logger.warning("exhaustive_max reached the cap of %d letters; the maximum is not certified.", cap)

    logger.info("exhaustive_max(%r): %r", constraint, outcome)
    return outcome


def pq_probe(p: int, q: int, budget: int, *, cap: int = 100_000, **options: Unpack[SearchOptions]) -> SearchOutcome:
    """How deep a search gets with both ``[w]_p`` and ``[w]_q`` squarefree."""
    if math.gcd(p, q) != 1:
        logger.warning("pq_probe: moduli %d and %d are not coprime.", p, q)

    options["budget"] = budget
    outcome: SearchOutcome = _run(_job(Constraint(sqf_moduli=(p, q)), cap, options, target=cap, collect=False))
    logger.info("pq_probe(%d, %d): deepest %d after %d nodes.", p, q, outcome.max_length, outcome.nodes)
    return outcome


def lcp_flank_solutions(
    word_len: int = 5, flank: int = 8, group: int = 3, *, limit: int | None = None
) -> list[tuple[Word, Word, tuple[Word, ...]]]:
    """Squarefree ``(p, s)`` of length ``flank`` with at least ``group`` middles ``u`` of ``word_len`` letters making ``pus`` squarefree.

    Each solution lists every such middle. ``limit`` stops after that many solutions.
    """
    middles: list[bytes] = [word.letters for word in enumerate_squarefree(TERNARY, word_len)]
    flanks: list[bytes] = [word.letters for word in enumerate_squarefree(TERNARY, flank)]

    left: dict[bytes, list[bytes]] = {p: [u for u in middles if is_squarefree(p + u)] for p in flanks}
    right: dict[bytes, set[bytes]] = {s: {u for u in middles if is_squarefree(u + s)} for s in flanks}

    solutions: list[tuple[Word, Word, tuple[Word, ...]]] = []
    for p, s in itertools.product(flanks, flanks):
        candidates: list[bytes] = [u for u in left[p] if u in right[s]]
        if len(candidates) < group:
            continue

        fitting: list[bytes] = [u for u in candidates if is_squarefree(p + u + s)]
        if len(fitting) >= group:
            solutions.append((Word(p), Word(s), tuple(Word(u) for u in fitting)))
            if limit is not None and len(solutions) >= limit:
                break

    return solutions


def lcp_bound_check() -> bool:
    """No squarefree ``p``, ``s`` of length 8 admit three distinct length-5 middles."""
    return not lcp_flank_solutions(5, 8, 3, limit=1)


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, nodes: int) -> None:
        self.remaining: int = nodes

    def spend(self) -> bool:
        self.remaining -= 1
        return self.remaining >= 0


def _extensions(prefix: bytes, length: int, budget: _Budget) -> Iterator[bytes]:
    """Words ``s`` of ``length`` letters with ``prefix + s`` squarefree, in lexicographic order."""
    if length == 0:
        yield b""
        return

    w: bytearray = bytearray(prefix)
    base: int = len(w)
    choices: list[int] = [0]

    while choices:
        if len(w) - base == length:
            yield bytes(w[base:])
            choices.pop()
            w.pop()
            continue

        for letter in range(choices[-1], 3):
            w.append(letter)
            if not suffix_square_period(w, len(w)):
                choices[-1] = letter + 1
                choices.append(0)
                break
            w.pop()
        else:
            choices.pop()
            if len(w) > base:
                w.pop()
            continue

        if not budget.spend():
            return


def lcp_search(n: int, target_lcp: int, budget: int) -> Morphism | None:
    """Look for an ``n``-uniform squarefree morphism whose images share exactly ``target_lcp`` letters."""
    if n < 11 or not 0 <= target_lcp < n:
        msg: str = f"lcp_search needs n >= 11 and 0 <= target_lcp < n (got {n}, {target_lcp})."
        raise ConstraintError(msg)

    nodes: _Budget = _Budget(budget)
    tail: int = n - target_lcp

    for prefix in _extensions(b"", target_lcp, nodes):
        completions: list[bytes] = list(_extensions(prefix, tail, nodes))
        if nodes.remaining < 0:
            break

        compatible: dict[tuple[bytes, bytes], bool] = {}
        for a, b in itertools.permutations(completions, 2):
            nodes.spend()
            compatible[(a, b)] = is_squarefree(prefix + a + prefix + b)

        for triple in itertools.combinations(completions, 3):
            if len({s[0] for s in triple}) == 1:
                continue
            if not all(compatible[pair] for pair in itertools.permutations(triple, 2)):
                continue
            if not nodes.spend():
                break

            h: Morphism = Morphism([Word(prefix + s) for s in triple], name=f"lcp{target_lcp}_{n}")
            if uniform_sqf_test(h).passed:
                logger.info("lcp_search(%d, %d) found %r.", n, target_lcp, h)
                return h

        if nodes.remaining < 0:
            break

    logger.info("lcp_search(%d, %d): no witness within %d nodes.", n, target_lcp, budget)
    return None


def canonical_maximal_words(words: Iterable[Word]) -> list[Word]:
    """One representative per class under exchanging letters 1 and 2 (the least one)."""
    return sorted({min(word, word.permute((0, 2, 1))) for word in words})


def block_structure(word: Word, p: int) -> list[str]:
    return [str(word[i : i + p]) for i in range(0, len(word), p)]


def brute_force_max(constraint: Constraint, n: int) -> int:
    """Longest length ``<= n`` with a word satisfying ``constraint``, by enumerating every word."""
    best: int = 0
    for length in range(1, n + 1):
        found: bool = any(
            constraint.check(Word(letters, constraint.alphabet))
            for letters in itertools.product(constraint.alphabet.letters, repeat=length)
        )
        if not found:
            break
        best = length

    return best
