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

import functools
import itertools
import logging
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING, Any, Literal

from .config import get_settings
from .errors import MorphismError, StabilizationError
from .morphisms import Morphism, MultiMorphism, apply, fixed_point, vtm
from .words import TERNARY, Word, WordStream, enumerate_squarefree, factors, find_square, is_squarefree, suffix_square_period


if TYPE_CHECKING:
    from .types_.reports import CounterexampleRecord, VerdictRecord


__all__ = (
    "Counterexample",
    "Verdict",
    "CondThreeWitness",
    "ternary_sqf_test",
    "uniform_sqf_test",
    "multi_sqf_test",
    "vtm_factors",
    "vtm_cond1",
    "cond2_solutions",
    "vtm_cond2",
    "vtm_cond3",
    "theorem10_premises",
    "bounded_no_zero_ap",
    "theorem10_falsification",
    "vtm_image_check",
    "is_prime",
)


logger: logging.Logger = logging.getLogger(__name__)

Reason = Literal["square", "misaligned"]


class Counterexample:
    """An input whose image breaks the tested property.

    For ``reason="square"`` the image holds a square of ``period`` at ``start``. For
    ``reason="misaligned"`` an occurrence of length ``period`` at ``start`` does not end on an
    image boundary.
    """

    __slots__ = ("input", "image", "start", "period", "reason", "choices")

    def __init__(
        self,
        input: Word,
        image: Word,
        start: int,
        period: int,
        *,
        reason: Reason = "square",
        choices: tuple[int, ...] | None = None,
    ) -> None:
        self.input: Word = input
        self.image: Word = image
        self.start: int = start
        self.period: int = period
        self.reason: Reason = reason
        self.choices: tuple[int, ...] | None = choices

    def reproduces(self) -> bool:
        if self.reason != "square":
            return True

        letters: bytes = self.image.letters
        s, p = self.start, self.period
        return p > 0 and s + 2 * p <= len(letters) and letters[s : s + p] == letters[s + p : s + 2 * p]

    def to_record(self) -> CounterexampleRecord:
        return {"input": str(self.input), "image": str(self.image), "start": self.start, "period": self.period}

    def __repr__(self) -> str:
        image: str = str(self.image)
        s, p = self.start, self.period
        return f"{self.input} -> {image[:s]}({image[s : s + 2 * p]}){image[s + 2 * p :]}"


class Verdict:
    __slots__ = ("test", "subject", "passed", "counterexample", "failures", "details")

    def __init__(
        self,
        test: str,
        subject: str,
        *,
        failures: Sequence[Counterexample] = (),
        details: dict[str, Any] | None = None,
    ) -> None:
        self.test: str = test
        self.subject: str = subject
        self.failures: tuple[Counterexample, ...] = tuple(failures)
        self.passed: bool = not self.failures
        self.counterexample: Counterexample | None = self.failures[0] if self.failures else None
        self.details: dict[str, Any] = details or {}

    def __bool__(self) -> bool:
        return self.passed

    def minimal_counterexamples(self) -> list[Word]:
        """Failing inputs none of whose proper factors also fail."""
        inputs: set[Word] = {failure.input for failure in self.failures}
        out: list[Word] = []

        for word in sorted(inputs, key=lambda w: (len(w), w.letters)):
            proper: Iterable[Word] = (
                word[i : i + n] for n in range(1, len(word)) for i in range(len(word) - n + 1)
            )
            if not any(factor in inputs for factor in proper):
                out.append(word)

        return out

    def to_record(self) -> VerdictRecord:
        record: VerdictRecord = {"test": self.test, "subject": self.subject, "pass": self.passed}
        if self.counterexample is not None:
            record["counterexample"] = self.counterexample.to_record()

        return record

    def __repr__(self) -> str:
        status: str = "pass" if self.passed else f"fail ({self.counterexample!r})"
        return f"Verdict: {self.test}({self.subject}) {status}"


class CondThreeWitness:
    """Suffixes ``v_a`` of ``g(a)``, one per letter."""

    __slots__ = ("suffixes",)

    def __init__(self, suffixes: Sequence[Word]) -> None:
        self.suffixes: tuple[Word, ...] = tuple(suffixes)

    @classmethod
    def from_digits(cls, *suffixes: str) -> CondThreeWitness:
        if len(suffixes) == 1:
            suffixes = suffixes * 3

        return cls([Word.from_digits(suffix) for suffix in suffixes])

    def __repr__(self) -> str:
        return f"CondThreeWitness({', '.join(map(str, self.suffixes))})"


def _name(h: Morphism | MultiMorphism) -> str:
    return h.name or repr(h)


def _require_ternary(h: Morphism | MultiMorphism) -> None:
    if h.domain != TERNARY:
        msg: str = f"{_name(h)} must act on the ternary alphabet."
        raise MorphismError(msg)


def _squarefree_upto(n: int) -> list[Word]:
    return [word for length in range(1, n + 1) for word in enumerate_squarefree(TERNARY, length)]


def _image_failures(h: Morphism, inputs: Iterable[Word]) -> list[Counterexample]:
    failures: list[Counterexample] = []

    for word in inputs:
        image: Word = apply(h, word)
        location = find_square(image)
        if location is not None:
            failures.append(Counterexample(word, image, *location))

    return failures


def ternary_sqf_test(h: Morphism) -> Verdict:
    """Squarefree iff the images of every squarefree ternary word of length at most 5 are squarefree."""
    _require_ternary(h)

    failures: list[Counterexample] = _image_failures(h, _squarefree_upto(5))
    return Verdict("ternary_sqf_test", _name(h), failures=failures)


def uniform_sqf_test(h: Morphism) -> Verdict:
    """For uniform ternary morphisms it is enough to test squarefree words of length 3."""
    _require_ternary(h)
    if not h.is_uniform():
        msg: str = f"{_name(h)} is not uniform: image lengths {h.lengths}."
        raise MorphismError(msg)

    failures: list[Counterexample] = _image_failures(h, _squarefree_upto(3))
    return Verdict("uniform_sqf_test", _name(h), failures=failures, details={"length": h.uniform_length()})


def _first_choice_failure(H: MultiMorphism, word: Word) -> Counterexample | None:
    alternatives: list[list[bytes]] = [[option.letters for option in H[letter]] for letter in word]
    buffer: bytearray = bytearray()
    choices: list[int] = []

    def descend(index: int) -> Counterexample | None:
        if index == len(alternatives):
            return None

        for choice, option in enumerate(alternatives[index]):
            mark: int = len(buffer)
            buffer.extend(option)
            choices.append(choice)

            for end in range(mark + 1, len(buffer) + 1):
                period: int = suffix_square_period(buffer, end)
                if period:
                    # Complete the assignment with first alternatives so the image is a full image.
                    tail: bytes = b"".join(options[0] for options in alternatives[index + 1 :])
                    image: Word = Word(bytes(buffer) + tail, H.target)
                    picked = tuple(choices) + (0,) * (len(alternatives) - index - 1)
                    return Counterexample(word, image, end - 2 * period, period, choices=picked)

            found = descend(index + 1)
            if found is not None:
                return found

            del buffer[mark:]
            choices.pop()

        return None

    return descend(0)


def multi_sqf_test(H: MultiMorphism) -> Verdict:
    """Every assignment of alternatives to the letters of every squarefree word of length <= 5."""
    _require_ternary(H)

    failures: list[Counterexample] = []
    inputs: list[Word] = _squarefree_upto(5)
    for word in inputs:
        failure = _first_choice_failure(H, word)
        if failure is not None:
            failures.append(failure)

    checked: int = sum(
        functools.reduce(lambda total, letter: total * len(H[letter]), word, 1) for word in inputs if len(word) == 5
    )
    return Verdict("multi_sqf_test", _name(H), failures=failures, details={"images_length5": checked})


@functools.cache
def _vtm_factors(n: int, prefix: int, check_prefix: int) -> frozenset[Word]:
    stream: WordStream = vtm()
    found: set[Word] = factors(stream.prefix(prefix), n)
    check: set[Word] = factors(stream.prefix(check_prefix), n)

    if found != check:
        msg: str = (
            f"Factors of length {n} of vtm changed between prefixes {prefix} and {check_prefix}: "
            f"{len(found)} vs {len(check)}."
        )
        raise StabilizationError(msg)

    logger.debug("vtm has %d factors of length %d.", len(found), n)
    return frozenset(found)


def vtm_factors(n: int) -> list[Word]:
    """Factors of length ``n`` of vtm, in lexicographic order, checked for stabilization."""
    settings = get_settings()
    return sorted(_vtm_factors(n, settings.factor_prefix, settings.factor_check_prefix))


def vtm_cond1(g: Morphism) -> Verdict:
    _require_ternary(g)

    failures: list[Counterexample] = _image_failures(g, vtm_factors(5))
    return Verdict("vtm_cond1", _name(g), failures=failures)


def cond2_solutions(g: Morphism) -> set[tuple[int, int, int]]:
    """Triples ``abc`` with ``g(a)=uv``, ``g(b)=zv``, ``g(c)=zw``, ``v != w`` and ``u != z``."""
    images: tuple[bytes, ...] = tuple(image.letters for image in g.images)
    solutions: set[tuple[int, int, int]] = set()

    for a, b, c in itertools.product(range(3), repeat=3):
        ga, gb, gc = images[a], images[b], images[c]

        for size in range(min(len(ga), len(gb)) + 1):
            if size and ga[-size] != gb[-size]:
                break

            u, z = ga[: len(ga) - size], gb[: len(gb) - size]
            v = ga[len(ga) - size :]
            if not gc.startswith(z):
                continue

            w = gc[len(z) :]
            if v != w and u != z:
                solutions.add((a, b, c))
                break

    return solutions


def vtm_cond2(g: Morphism) -> tuple[Verdict, set[tuple[int, int, int]]]:
    _require_ternary(g)

    solutions = cond2_solutions(g)
    passed: bool = solutions == {(0, 1, 0)}
    failures: list[Counterexample] = []

    if not passed:
        for a, b, c in sorted(solutions ^ {(0, 1, 0)}):
            word: Word = Word([a, b, c])
            failures.append(Counterexample(word, apply(g, word), 0, 0, reason="misaligned"))

    details: dict[str, Any] = {"solutions": ["".join(map(str, triple)) for triple in sorted(solutions)]}
    return Verdict("vtm_cond2", _name(g), failures=failures, details=details), solutions


def vtm_cond3(g: Morphism, witness: CondThreeWitness) -> Verdict:
    """Every occurrence of ``v_a`` inside ``g(w)``, ``w`` squarefree of length <= 4, ends on an image boundary."""
    _require_ternary(g)
    if len(witness.suffixes) != 3:
        msg: str = f"Expected three suffixes, got {len(witness.suffixes)}."
        raise MorphismError(msg)

    for letter, suffix in enumerate(witness.suffixes):
        if not suffix or not g[letter].letters.endswith(suffix.letters):
            msg = f"{suffix} is not a nonempty suffix of g({letter}) = {g[letter]}."
            raise MorphismError(msg)

    failures: list[Counterexample] = []
    occurrences: int = 0

    for word in _squarefree_upto(4):
        image: Word = apply(g, word)
        letters: bytes = image.letters
        boundaries: set[int] = set(itertools.accumulate((len(g[letter]) for letter in word), initial=0))

        for suffix in dict.fromkeys(witness.suffixes):
            needle: bytes = suffix.letters
            start: int = letters.find(needle)

            while start != -1:
                occurrences += 1
                if start + len(needle) not in boundaries:
                    failures.append(Counterexample(word, image, start, len(needle), reason="misaligned"))

                start = letters.find(needle, start + 1)

    return Verdict("vtm_cond3", _name(g), failures=failures, details={"occurrences": occurrences})


def is_prime(n: int) -> bool:
    if n < 2:
        return False

    return all(n % d for d in range(2, int(n**0.5) + 1))


def theorem10_premises(h: Morphism) -> Verdict:
    """Uniform, squarefree, prime length, and 0 begins h(0) but neither h(1) nor h(2)."""
    _require_ternary(h)

    length: int | None = h.uniform_length()
    premises: dict[str, bool] = {
        "uniform": length is not None,
        "prime_length": length is not None and is_prime(length),
        "squarefree": False,
        "prefix_condition": h[0][0] == 0 and h[1][0] != 0 and h[2][0] != 0,
    }

    failures: list[Counterexample] = []
    if length is not None:
        squarefree: Verdict = uniform_sqf_test(h)
        premises["squarefree"] = squarefree.passed
        failures.extend(squarefree.failures)

    if not all(premises.values()) and not failures:
        # No square to exhibit; record the first image as the failing witness.
        failures.append(Counterexample(Word([0]), h[0], 0, 0, reason="misaligned"))

    return Verdict("theorem10_premises", _name(h), failures=failures, details=premises)


def bounded_no_zero_ap(w: WordStream, max_modulus: int, bound: int, *, offset: int = 0) -> dict[int, int | None]:
    """For every ``p <= max_modulus``, the least ``i <= bound`` with ``w[offset + i*p] != 0``.

    ``None`` marks a progression of zeros that is unrefuted at ``bound``.
    """
    prefix = w.array(offset + max_modulus * bound + 1)
    report: dict[int, int | None] = {}

    for p in range(1, max_modulus + 1):
        progression = prefix[offset : offset + p * bound + 1 : p]
        nonzero = progression.nonzero()[0]
        report[p] = int(nonzero[0]) if nonzero.size else None

    return report


def theorem10_falsification(h: Morphism, max_modulus: int, bound: int) -> dict[int, int | None]:
    return bounded_no_zero_ap(fixed_point(h, 0), max_modulus, bound)


def vtm_image_check(g: Morphism, n: int) -> bool:
    """``g`` applied to a vtm prefix of length ``n`` is squarefree."""
    return is_squarefree(apply(g, vtm().prefix(n)))
