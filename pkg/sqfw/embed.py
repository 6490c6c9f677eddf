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
from collections.abc import Iterable, Iterator
from typing import TYPE_CHECKING

import numpy as np

from .catalog import load
from .errors import ConstraintError, EmbeddingError
from .morphisms import PI, MultiMorphism, vtm
from .words import Word, WordStream, is_squarefree


if TYPE_CHECKING:
    import numpy.typing as npt

    from .types_.reports import SwapRecord


__all__ = (
    "MIN_GAP",
    "EmbedState",
    "base_word",
    "embed",
    "force_subsequence",
    "verify_embedding",
    "arithmetic_positions",
    "random_positions",
)


logger: logging.Logger = logging.getLogger(__name__)

MIN_GAP: int = 30
PREFIX: int = 12
LONGEST: int = 3  # index of the length-26 alternative, middle of length 5
TAIL: int = 26


def _default_morphism() -> MultiMorphism:
    return load(strict=False).multi("multi26")


class EmbedState:
    """The image of a rotated vtm prefix under a multi-valued morphism, with per-image choices.

    ``starts[k]`` is the offset of the image of preimage letter ``k``; every image starts as the
    longest alternative and only ever shrinks.
    """

    def __init__(self, morphism: MultiMorphism, images: int, rotation: int = 0) -> None:
        self.morphism: MultiMorphism = morphism
        self.rotation: int = rotation % 3
        self.preimage: bytes = vtm().prefix(images).permute(PI.power(self.rotation).mapping).letters

        longest: list[bytes] = [morphism[letter][LONGEST].letters for letter in range(3)]
        self.word: bytearray = bytearray(b"".join(longest[letter] for letter in self.preimage))
        self.starts: npt.NDArray[np.int64] = np.concatenate(
            ([0], np.cumsum([len(longest[letter]) for letter in self.preimage])[:-1])
        ).astype(np.int64)
        self.choices: bytearray = bytearray([LONGEST]) * images
        self.swaps: list[SwapRecord] = []

    def middle(self, k: int) -> tuple[int, int]:
        """First and last index of the middle block of image ``k``."""
        start: int = int(self.starts[k]) + PREFIX
        size: int = len(self.morphism[self.preimage[k]][self.choices[k]]) - PREFIX - 9
        return start, start + size - 1

    def first_block_after(self, position: int) -> int:
        k: int = int(np.searchsorted(self.starts, position - PREFIX, side="right"))
        while k < len(self.choices) and (self.choices[k] != LONGEST or self.middle(k)[0] <= position):
            k += 1

        return k

    def swap(self, k: int, shift: int) -> None:
        """Replace image ``k`` by the alternative ``shift`` letters shorter."""
        letter: int = self.preimage[k]
        old: int = self.choices[k]
        new: int = old - shift
        start: int = int(self.starts[k])
        old_len: int = len(self.morphism[letter][old])

        self.word[start : start + old_len] = self.morphism[letter][new].letters
        self.starts[k + 1 :] -= shift
        self.choices[k] = new
        self.swaps.append({"image": k, "old": old, "new": new, "shift": shift})

    def result(self, length: int) -> Word:
        if len(self.word) < length:
            msg: str = f"Only {len(self.word)} letters remain after swapping; {length} were requested."
            raise EmbeddingError(msg)

        return Word(bytes(self.word[:length]))


def base_word(length: int, morphism: MultiMorphism | None = None) -> Word:
    """Prefix of the image of vtm using the longest alternative everywhere."""
    morphism = morphism or _default_morphism()
    images: int = length // len(morphism[0][LONGEST]) + 1
    return EmbedState(morphism, images).result(length)


def _requested(positions: Iterable[int], length: int) -> list[int]:
    """Positions below ``length``; a finite request must also leave a full image after its last position."""
    out: list[int] = []
    for position in positions:
        if position >= length:
            return out

        if position < 0 or (out and position - out[-1] < MIN_GAP):
            previous: str = str(out[-1]) if out else "start"
            msg: str = f"Positions must be non-negative with gaps of at least {MIN_GAP}; got {position} after {previous}."
            raise ConstraintError(msg)

        out.append(position)

    if out and length <= out[-1] + TAIL:
        msg = f"The word must extend more than {TAIL} letters past the last position {out[-1]}; got length {length}."
        raise ConstraintError(msg)

    return out


def _letters(v: Word | WordStream, count: int) -> bytes:
    if isinstance(v, Word):
        return v.letters[:count]

    return v.slice(0, count)


def embed(
    positions: Iterable[int], v: Word | WordStream, length: int, *, morphism: MultiMorphism | None = None
) -> EmbedState:
    """Build a squarefree word of ``length`` letters carrying ``v[i]`` at ``positions[i]``.

    The first position is met by rotating the preimage; every later mismatch is repaired by
    shrinking one middle block lying strictly between the previous position and this one.
    """
    return _embed(_requested(positions, length), v, length, morphism)


def _embed(requested: list[int], v: Word | WordStream, length: int, morphism: MultiMorphism | None) -> EmbedState:
    morphism = morphism or _default_morphism()
    targets: bytes = _letters(v, len(requested))
    requested = requested[: len(targets)]

    longest: int = len(morphism[0][LONGEST])
    images: int = (length + 3 * len(requested)) // longest + 2

    rotation: int = 0
    if requested:
        unrotated: int = base_word(requested[0] + 1, morphism)[requested[0]]
        rotation = (targets[0] - unrotated) % 3

    state: EmbedState = EmbedState(morphism, images, rotation)
    word: bytearray = state.word

    for i in range(1, len(requested)):
        previous, position, letter = requested[i - 1], requested[i], targets[i]
        if word[position] == letter:
            continue

        shift: int | None = next((d for d in (1, 2, 3) if word[position + d] == letter), None)
        if shift is None:
            msg: str = f"No letter {letter} within 3 letters after position {position}; the base word is not squarefree."
            raise EmbeddingError(msg)

        k: int = state.first_block_after(previous)
        first, last = state.middle(k) if k < images else (-1, -1)
        if not previous < first <= last <= position:
            msg = f"No complete middle block between positions {previous} and {position}."
            raise EmbeddingError(msg)

        state.swap(k, shift)
        if word[position] != letter:
            msg = f"Swapping image {k} did not place {letter} at {position}."
            raise EmbeddingError(msg)

    logger.debug("Embedded %d letters with %d swaps (rotation %d).", len(requested), len(state.swaps), rotation)
    return state


def force_subsequence(
    positions: Iterable[int], v: Word | WordStream, length: int, *, morphism: MultiMorphism | None = None
) -> Word:
    requested: list[int] = _requested(positions, length)
    state: EmbedState = _embed(requested, v, length, morphism)
    word: Word = state.result(length)

    if not verify_embedding(word, requested, v):
        msg: str = "The constructed word failed independent validation."
        raise EmbeddingError(msg)

    return word


def verify_embedding(w: Word, positions: Iterable[int], v: Word | WordStream) -> bool:
    """``w`` is squarefree and ``w[p_i] = v[i]`` for every position inside ``w``."""
    if not is_squarefree(w):
        return False

    requested: list[int] = list(itertools.takewhile(lambda position: position < len(w), positions))
    targets: bytes = _letters(v, len(requested))
    return all(w[position] == letter for position, letter in zip(requested, targets))


def arithmetic_positions(start: int, step: int) -> Iterator[int]:
    return itertools.count(start, step)


def random_positions(rng: np.random.Generator, count: int, low: int = 30, high: int = 60, start: int = 0) -> list[int]:
    """``count`` positions from ``start`` with gaps drawn uniformly from ``[low, high]``."""
    gaps = rng.integers(low, high + 1, size=max(count - 1, 0))
    return [start, *(start + np.cumsum(gaps)).tolist()] if count else []
