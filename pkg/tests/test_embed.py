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

from sqfw.catalog import Catalog
from sqfw.embed import (
    MIN_GAP,
    EmbedState,
    arithmetic_positions,
    base_word,
    embed,
    force_subsequence,
    random_positions,
    verify_embedding,
)
from sqfw.errors import ConstraintError, EmbeddingError
from sqfw.morphisms import vtm
from sqfw.words import Word, is_squarefree


def test_base_word() -> None:
    assert str(base_word(26)) == "01210212021020121021201210"

    word: Word = base_word(5000)
    assert len(word) == 5000
    assert is_squarefree(word)


def test_middle_blocks_are_close(catalog: Catalog) -> None:
    state = EmbedState(catalog.multi("multi26"), 200)
    ends = [state.middle(k)[1] for k in range(200)]

    assert ends[0] < MIN_GAP
    assert max(b - a for a, b in itertools.pairwise(ends)) <= 26


def test_vtm_along_an_arithmetic_progression() -> None:
    word: Word = force_subsequence(arithmetic_positions(7, 31), vtm(), 4000)

    assert len(word) == 4000
    assert is_squarefree(word)
    assert [word[p] for p in range(7, 4000, 31)] == list(vtm().prefix(len(range(7, 4000, 31))).letters)


@pytest.mark.parametrize("letter", [0, 1, 2])
def test_first_position_uses_rotation(letter: int) -> None:
    state = embed([5], Word([letter]), 200)
    assert state.word[5] == letter
    assert state.swaps == []


def test_random_trials(rng: np.random.Generator) -> None:
    for _ in range(10):
        positions: list[int] = random_positions(rng, 200, start=int(rng.integers(0, 30)))
        v = Word(rng.integers(0, 3, size=200).astype(np.uint8).tobytes())
        length: int = positions[-1] + 30

        state = embed(positions, v, length)
        word: Word = state.result(length)
        assert verify_embedding(word, positions, v)
        assert all(1 <= swap["shift"] <= 3 for swap in state.swaps)


def test_random_positions(rng: np.random.Generator) -> None:
    positions = random_positions(rng, 50, 30, 60, start=4)
    gaps = np.diff(positions)

    assert positions[0] == 4
    assert len(positions) == 50
    assert gaps.min() >= 30 and gaps.max() <= 60
    assert random_positions(rng, 0) == []


def test_gaps_must_be_at_least_thirty() -> None:
    with pytest.raises(ConstraintError):
        force_subsequence([0, 29], Word.from_digits("00"), 100)
    with pytest.raises(ConstraintError):
        force_subsequence([-1], Word.from_digits("0"), 100)


def test_finite_requests_need_a_full_image_after_the_last_position() -> None:
    with pytest.raises(ConstraintError):
        force_subsequence([0, 30], Word.from_digits("01"), 56)

    word: Word = force_subsequence([0, 30], Word.from_digits("01"), 57)
    assert (word[0], word[30]) == (0, 1)
    assert len(force_subsequence(arithmetic_positions(0, 30), vtm(), 1000)) == 1000


def test_result_longer_than_word() -> None:
    state = embed([0], Word.from_digits("1"), 100)
    with pytest.raises(EmbeddingError):
        state.result(len(state.word) + 1)


def test_verify_embedding_is_independent() -> None:
    word: Word = base_word(300)
    positions = [0, 40, 80]
    v = Word([word[p] for p in positions])

    assert verify_embedding(word, positions, v)
    assert not verify_embedding(word, positions, Word([(word[0] + 1) % 3, word[40], word[80]]))
    assert not verify_embedding(Word.from_digits("0101"), [0], Word.from_digits("0"))
