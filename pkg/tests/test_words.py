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

import numpy as np
import pytest

from conftest import assert_square, reference_square
from sqfw.errors import AlphabetError, ConstraintError, ResourceLimitError, StreamExhaustedError
from sqfw.morphisms import vtm
from sqfw.words import (
    BINARY,
    QUATERNARY,
    TERNARY,
    Alphabet,
    Word,
    WordStream,
    brute_force_squarefree,
    enumerate_squarefree,
    factors,
    find_square,
    interleave,
    is_squarefree,
    square_ending_at_end,
    subsample,
    subsequence,
)


@pytest.mark.parametrize(("n", "count"), [(1, 3), (3, 12), (5, 30), (8, 78)])
def test_squarefree_counts(n: int, count: int) -> None:
    assert len(enumerate_squarefree(TERNARY, n)) == count


@pytest.mark.parametrize("n", range(8))
def test_enumeration_matches_brute_force(n: int) -> None:
    assert enumerate_squarefree(TERNARY, n) == brute_force_squarefree(TERNARY, n)


def test_binary_squarefree_words_stop_at_three() -> None:
    assert [str(word) for word in enumerate_squarefree(BINARY, 3)] == ["010", "101"]
    assert enumerate_squarefree(BINARY, 4) == []


def test_enumeration_cap() -> None:
    with pytest.raises(ResourceLimitError):
        enumerate_squarefree(TERNARY, 30)


@pytest.mark.parametrize(
    ("digits", "expected"),
    [
        ("0102012", None),
        ("0010", (0, 1)),
        ("0120121", (0, 3)),
        ("21010", (1, 2)),
        ("", None),
    ],
)
def test_find_square(digits: str, expected: tuple[int, int] | None) -> None:
    assert find_square(Word.from_digits(digits)) == expected


def test_find_square_agrees_with_quadratic_scan(rng: np.random.Generator) -> None:
    for _ in range(40):
        word = Word(rng.integers(0, 3, size=int(rng.integers(130, 400))).astype(np.uint8).tobytes())
        assert find_square(word) == reference_square(word)

    # Squares that only appear late, after a long squarefree stretch.
    for length in (150, 300, 700):
        prefix: Word = vtm().prefix(length)
        word = prefix + prefix[-40:]
        assert find_square(word) == reference_square(word)


def test_long_words_use_hashed_scan() -> None:
    prefix: Word = vtm().prefix(6000)
    assert is_squarefree(prefix)
    assert find_square(prefix) is None

    doubled: Word = vtm().prefix(1500) * 2
    assert not is_squarefree(doubled)
    assert_square(doubled)


def test_square_ending_at_end() -> None:
    assert square_ending_at_end(Word.from_digits("0101")) == 2
    assert square_ending_at_end(Word.from_digits("0120")) is None
    with pytest.raises(ValueError):
        square_ending_at_end(Word())


def test_word_basics() -> None:
    w: Word = Word.from_digits("0120 21")
    assert str(w) == "012021"
    assert len(w) == 6
    assert w[2] == 2
    assert w[1:4] == Word.from_digits("120")
    assert w + Word.from_digits("0") == Word.from_digits("0120210")
    assert w.permute((1, 2, 0)) == Word.from_digits("120102")
    assert Word.from_digits("01") < Word.from_digits("02")
    assert w.to_array().tolist() == [0, 1, 2, 0, 2, 1]


def test_alphabet_errors() -> None:
    with pytest.raises(AlphabetError):
        Alphabet(5)
    with pytest.raises(AlphabetError):
        Word.from_digits("0123")
    with pytest.raises(AlphabetError):
        Word.from_digits("01a")
    with pytest.raises(AlphabetError):
        Word.from_digits("01") + Word.from_digits("01", QUATERNARY)


def test_subsample_word() -> None:
    w: Word = Word.from_digits("0120210121")
    assert str(subsample(w, 3)) == "0001"
    assert str(subsample(w, 3, 1)) == "121"
    assert subsample(w, 1) == w
    with pytest.raises(ConstraintError):
        subsample(w, 0)
    with pytest.raises(ConstraintError):
        subsample(vtm(), 2, -1)


def test_subsample_stream_is_lazy_and_consistent() -> None:
    ones: WordStream = subsample(vtm(), 4, 1)
    assert set(ones.prefix(5000).letters) == {1}

    every_third: WordStream = subsample(vtm(), 3)
    assert every_third.prefix(300) == subsample(vtm().prefix(900), 3)


def test_subsequence() -> None:
    w: Word = Word.from_digits("012021")
    assert str(subsequence(w, [0, 2, 5, 9])) == "021"
    with pytest.raises(ConstraintError):
        subsequence(w, [2, 1])

    picked: WordStream = subsequence(vtm(), (4 * i + 1 for i in range(10_000)))
    assert set(picked.prefix(100).letters) == {1}


def test_stream_helpers() -> None:
    assert str(WordStream.periodic(Word.from_digits("01")).prefix(5)) == "01010"
    assert str(WordStream.constant(2).prefix(3)) == "222"
    assert vtm()[4] == 2
    with pytest.raises(IndexError):
        vtm()[-1]


def test_finite_stream_exhausts() -> None:
    stream = WordStream.from_letters([0, 1, 0], name="short")
    assert str(stream.prefix(3)) == "010"
    with pytest.raises(StreamExhaustedError):
        stream.prefix(4)


def test_factors() -> None:
    assert factors(Word.from_digits("0120"), 2) == {Word.from_digits(f) for f in ("01", "12", "20")}
    with pytest.raises(ValueError):
        factors(Word.from_digits("01"), 3)


def test_interleave_pins_zeros_and_keeps_squarefreeness() -> None:
    small: Word = interleave(Word.from_digits("012"), 3)
    assert str(small) == "01203"
    assert small.alphabet == QUATERNARY

    for p in (2, 3, 5):
        w: Word = interleave(vtm().prefix(400), p)
        assert set(subsample(w, p).letters) == {0}
        assert is_squarefree(w)

    with pytest.raises(ValueError):
        interleave(Word.from_digits("01"), 1)


@pytest.mark.parametrize("n", [*range(1, 11), *(pytest.param(n, marks=pytest.mark.slow) for n in (11, 12))])
def test_square_checks_agree_with_brute_force_on_every_word(n: int) -> None:
    squarefree: set[Word] = set(brute_force_squarefree(TERNARY, n))
    shorter: set[Word] = set(brute_force_squarefree(TERNARY, n - 1))

    for letters in itertools.product(range(3), repeat=n):
        word: Word = Word(bytes(letters))
        assert is_squarefree(word) == (word in squarefree)
        if word[: n - 1] in shorter:
            assert (square_ending_at_end(word) is None) == (word in squarefree)


def test_subsamples_compose(rng: np.random.Generator) -> None:
    w: Word = Word(rng.integers(0, 3, size=600).astype(np.uint8).tobytes())
    for p, q in itertools.product(range(1, 6), repeat=2):
        assert subsample(subsample(w, p), q) == subsample(w, p * q)

    assert subsample(subsample(vtm(), 3), 2).prefix(200) == subsample(vtm(), 6).prefix(200)


def test_length_four_factors_use_every_letter() -> None:
    assert all(set(word.letters) == {0, 1, 2} for word in enumerate_squarefree(TERNARY, 4))
    assert all(set(factor.letters) == {0, 1, 2} for factor in factors(vtm().prefix(10_000), 4))


def test_stream_prefixes_are_deterministic(rng: np.random.Generator) -> None:
    stream: WordStream = WordStream.from_letters(rng.integers(0, 3, size=5000).tolist(), name="random")
    first: Word = stream.prefix(1000)

    assert stream.prefix(1000) == first
    assert stream.prefix(4000)[:1000] == first
    assert stream.prefix(10) == first[:10]
    assert stream.cached_length >= 4000
    assert vtm().prefix(3000) == subsample(vtm(), 1).prefix(3000)
