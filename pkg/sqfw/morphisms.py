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

import bisect
import functools
import logging
import os.path
from collections.abc import Iterator, Sequence
from typing import TYPE_CHECKING, overload

from .errors import AlphabetError, MorphismError, ParseError
from .words import TERNARY, Alphabet, Word, WordStream


if TYPE_CHECKING:
    from .types_.core import Letter


__all__ = (
    "Permutation",
    "PI",
    "Morphism",
    "MultiMorphism",
    "FixedPointStream",
    "apply",
    "fixed_point",
    "compose",
    "subsample_morphism",
    "conjugate",
    "cyclic_shift_morphism",
    "cyclic_shift_multimorphism",
    "lcp_of",
    "lcs_of",
    "parse_morphism",
    "parse_multimorphism",
    "format_morphism",
    "format_multimorphism",
    "TAU",
    "TAU3",
    "vtm",
)


logger: logging.Logger = logging.getLogger(__name__)

_BATCH: int = 1024


class Permutation:
    """A bijection of an alphabet, applied letterwise to words."""

    __slots__ = ("_mapping",)

    def __init__(self, mapping: Sequence[int]) -> None:
        if sorted(mapping) != list(range(len(mapping))):
            msg: str = f"{tuple(mapping)} is not a permutation of 0..{len(mapping) - 1}."
            raise AlphabetError(msg)

        self._mapping: tuple[int, ...] = tuple(mapping)

    @classmethod
    def cycle(cls, size: int = 3) -> Permutation:
        return cls([(letter + 1) % size for letter in range(size)])

    @classmethod
    def identity(cls, size: int = 3) -> Permutation:
        return cls(range(size))

    @property
    def mapping(self) -> tuple[int, ...]:
        return self._mapping

    def __call__(self, letter: Letter) -> Letter:
        return self._mapping[letter]

    def apply(self, w: Word) -> Word:
        return w.permute(self._mapping)

    def compose(self, other: Permutation) -> Permutation:
        """``self`` after ``other``."""
        return Permutation([self._mapping[letter] for letter in other._mapping])

    def power(self, exponent: int) -> Permutation:
        result: Permutation = Permutation.identity(len(self._mapping))
        base: Permutation = self if exponent >= 0 else self.inverse()

        for _ in range(abs(exponent)):
            result = base.compose(result)

        return result

    def inverse(self) -> Permutation:
        inverse: list[int] = [0] * len(self._mapping)
        for letter, image in enumerate(self._mapping):
            inverse[image] = letter

        return Permutation(inverse)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and other._mapping == self._mapping

    def __hash__(self) -> int:
        return hash(self._mapping)

    def __repr__(self) -> str:
        return f"Permutation({self._mapping})"


PI: Permutation = Permutation.cycle(3)


def _common_prefix_length(words: Sequence[bytes]) -> int:
    return len(os.path.commonprefix(list(words)))


def _common_suffix_length(words: Sequence[bytes]) -> int:
    return len(os.path.commonprefix([word[::-1] for word in words]))


class Morphism:
    """A morphism given by the images of the letters ``0..k-1``."""

    __slots__ = ("_images", "_domain", "_target", "name")

    def __init__(
        self,
        images: Sequence[Word],
        *,
        target: Alphabet | None = None,
        name: str | None = None,
        allow_empty: bool = False,
    ) -> None:
        if not images:
            msg: str = "A morphism needs at least one letter image."
            raise MorphismError(msg)

        target = target or max((image.alphabet for image in images), key=lambda alphabet: alphabet.size)
        for letter, image in enumerate(images):
            if not image and not allow_empty:
                msg = f"The image of {letter} is empty."
                raise MorphismError(msg)

            target.validate(image.letters)

        self._images: tuple[Word, ...] = tuple(images)
        self._domain: Alphabet = Alphabet(len(images)) if len(images) > 1 else target
        self._target: Alphabet = target
        self.name: str | None = name

    @classmethod
    def from_digits(cls, *images: str, name: str | None = None, alphabet: Alphabet = TERNARY) -> Morphism:
        return cls([Word.from_digits(image, alphabet) for image in images], target=alphabet, name=name)

    @classmethod
    def identity(cls, alphabet: Alphabet = TERNARY) -> Morphism:
        return cls([Word([letter], alphabet) for letter in alphabet.letters], target=alphabet, name="id")

    @property
    def images(self) -> tuple[Word, ...]:
        return self._images

    @property
    def domain(self) -> Alphabet:
        return self._domain

    @property
    def target(self) -> Alphabet:
        return self._target

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(image) for image in self._images)

    def is_uniform(self) -> bool:
        return len(set(self.lengths)) == 1

    def uniform_length(self) -> int | None:
        lengths: set[int] = set(self.lengths)
        return lengths.pop() if len(lengths) == 1 else None

    def __getitem__(self, letter: Letter) -> Word:
        return self._images[letter]

    @overload
    def __call__(self, w: Word) -> Word: ...

    @overload
    def __call__(self, w: WordStream) -> WordStream: ...

    def __call__(self, w: Word | WordStream) -> Word | WordStream:
        return apply(self, w)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Morphism) and other._images == self._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        images: str = ", ".join(f"{letter}->{image}" for letter, image in enumerate(self._images))
        return f"Morphism({self.name or ''}: {images})"


class MultiMorphism:
    """A multi-valued morphism: every letter has a list of alternative images."""

    __slots__ = ("_alternatives", "_target", "name")

    def __init__(self, alternatives: Sequence[Sequence[Word]], *, target: Alphabet = TERNARY, name: str | None = None) -> None:
        for letter, options in enumerate(alternatives):
            if not options:
                msg: str = f"Letter {letter} has no alternatives."
                raise MorphismError(msg)

            if len(set(options)) != len(options):
                msg = f"Letter {letter} has repeated alternatives."
                raise MorphismError(msg)

            for option in options:
                if not option:
                    msg = f"Letter {letter} has an empty alternative."
                    raise MorphismError(msg)

                target.validate(option.letters)

        self._alternatives: tuple[tuple[Word, ...], ...] = tuple(tuple(options) for options in alternatives)
        self._target: Alphabet = target
        self.name: str | None = name

    @property
    def alternatives(self) -> tuple[tuple[Word, ...], ...]:
        return self._alternatives

    @property
    def domain(self) -> Alphabet:
        return Alphabet(len(self._alternatives))

    @property
    def target(self) -> Alphabet:
        return self._target

    def __getitem__(self, letter: Letter) -> tuple[Word, ...]:
        return self._alternatives[letter]

    def choose(self, indices: Sequence[int]) -> Morphism:
        """The single-valued morphism picking alternative ``indices[a]`` for each letter ``a``."""
        return Morphism(
            [options[index] for options, index in zip(self._alternatives, indices, strict=True)],
            target=self._target,
            name=f"{self.name}{list(indices)}",
        )

    def lcp(self, letter: Letter) -> int:
        return _common_prefix_length([option.letters for option in self._alternatives[letter]])

    def lcs(self, letter: Letter) -> int:
        return _common_suffix_length([option.letters for option in self._alternatives[letter]])

    def __repr__(self) -> str:
        counts: str = ", ".join(str(len(options)) for options in self._alternatives)
        return f"MultiMorphism({self.name or ''}: alternatives=[{counts}])"


def _check_domain(h: Morphism, letters: bytes | bytearray) -> None:
    if letters and max(letters) >= len(h.images):
        msg: str = f"Letter {max(letters)} has no image under {h!r}."
        raise MorphismError(msg)


def _apply_chunks(h: Morphism, stream: WordStream) -> Iterator[bytes]:
    images: tuple[bytes, ...] = tuple(image.letters for image in h.images)
    for chunk in stream.iter_chunks():
        _check_domain(h, chunk)
        yield b"".join([images[letter] for letter in chunk])


@overload
def apply(h: Morphism, w: Word) -> Word: ...


@overload
def apply(h: Morphism, w: WordStream) -> WordStream: ...


def apply(h: Morphism, w: Word | WordStream) -> Word | WordStream:
    if isinstance(w, WordStream):
        return WordStream(_apply_chunks(h, w), alphabet=h.target, name=f"{h.name}({w.name})")

    _check_domain(h, w.letters)
    images: tuple[bytes, ...] = tuple(image.letters for image in h.images)
    return Word(b"".join([images[letter] for letter in w.letters]), h.target)


class FixedPointStream(WordStream):
    """The fixed point h^w(a), grown by whole image blocks.

    ``block_start(i)`` is the offset of ``h(w[i])`` inside ``w = h(w)``.
    An erasing ``h`` may have a finite fixed point; reading past its end raises ``StreamExhaustedError``.
    """

    def __init__(self, h: Morphism, letter: Letter) -> None:
        image: Word = h[letter]
        if len(image) < 2 or image[0] != letter:
            msg: str = f"{h!r} is not prolongable on {letter}: its image is {image}."
            raise MorphismError(msg)

        self.morphism: Morphism = h
        self.letter: Letter = letter
        self._starts: list[int] = [0]

        super().__init__(self._generate(), alphabet=h.target, name=f"{h.name or 'h'}^w({letter})")

    def _generate(self) -> Iterator[bytes]:
        images: tuple[bytes, ...] = tuple(image.letters for image in self.morphism.images)
        cache: bytearray = self._cache
        starts: list[int] = self._starts

        offset: int = len(images[self.letter])
        position: int = 1
        yield images[self.letter]

        while True:
            block: bytes = bytes(cache[position : position + _BATCH])
            if not block:
                return

            pieces: list[bytes] = []

            for letter in block:
                starts.append(offset)
                offset += len(images[letter])
                pieces.append(images[letter])

            position += len(block)
            yield b"".join(pieces)

    def block_start(self, index: int) -> int:
        while len(self._starts) <= index:
            self.ensure(self.cached_length + 1)

        return self._starts[index]

    def block_of(self, position: int) -> int:
        """Index ``i`` of the block ``h(w[i])`` containing ``position``."""
        while not self._starts or self._starts[-1] <= position:
            self.ensure(max(position, self.cached_length) + 1)

        return bisect.bisect_right(self._starts, position) - 1


def fixed_point(h: Morphism, letter: Letter) -> FixedPointStream:
    return FixedPointStream(h, letter)


def compose(g: Morphism, h: Morphism) -> Morphism:
    """``g`` after ``h``: ``(g∘h)(a) = g(h(a))``."""
    if h.target.size > len(g.images):
        msg: str = f"Images of {h!r} use letters outside the domain of {g!r}."
        raise MorphismError(msg)

    name: str | None = f"{g.name}∘{h.name}" if g.name and h.name else None
    return Morphism([apply(g, image) for image in h.images], target=g.target, name=name)


def subsample_morphism(h: Morphism, p: int) -> Morphism:
    for letter, image in enumerate(h.images):
        if len(image) % p:
            msg: str = f"{p} does not divide |h({letter})| = {len(image)}."
            raise MorphismError(msg)

    return Morphism([image[::p] for image in h.images], target=h.target, name=f"{h.name}_{p}")


def conjugate(h: Morphism, c: Letter) -> Morphism:
    """The conjugate ``c^-1 h(a) c``; every image must begin with ``c``."""
    tail: Word = Word([c], h.target)
    for letter, image in enumerate(h.images):
        if image[0] != c:
            msg: str = f"The image of {letter} does not begin with {c}."
            raise MorphismError(msg)

    return Morphism([image[1:] + tail for image in h.images], target=h.target, name=f"{h.name}^{c}")


def cyclic_shift_morphism(image0: Word, pi: Permutation = PI, *, name: str | None = None) -> Morphism:
    images: list[Word] = [image0]
    for _ in range(len(pi.mapping) - 1):
        images.append(pi.apply(images[-1]))

    return Morphism(images, target=image0.alphabet, name=name)


def cyclic_shift_multimorphism(
    alternatives0: Sequence[Word], pi: Permutation = PI, *, name: str | None = None
) -> MultiMorphism:
    rows: list[list[Word]] = [list(alternatives0)]
    for _ in range(len(pi.mapping) - 1):
        rows.append([pi.apply(option) for option in rows[-1]])

    return MultiMorphism(rows, target=alternatives0[0].alphabet, name=name)


def lcp_of(h: Morphism) -> int:
    return _common_prefix_length([image.letters for image in h.images])


def lcs_of(h: Morphism) -> int:
    return _common_suffix_length([image.letters for image in h.images])


def _parse_lines(text: str, source: str | None) -> list[tuple[int, Word, int]]:
    rows: list[tuple[int, Word, int]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line: str = raw.split("#", 1)[0].strip()
        if not line:
            continue

        letter, arrow, image = line.partition("->")
        if not arrow or not letter.strip().isdigit():
            msg: str = f"Expected '<letter> -> <digits>', got {raw.strip()!r}."
            raise ParseError(msg, source=source, line=number)

        try:
            word: Word = Word.from_digits(image, Alphabet(4))
        except AlphabetError as e:
            raise ParseError(str(e), source=source, line=number) from e

        rows.append((int(letter), word, number))

    if not rows:
        msg = "No letter images found."
        raise ParseError(msg, source=source)

    return rows


def _grouped(rows: list[tuple[int, Word, int]], source: str | None) -> list[list[Word]]:
    size: int = max(letter for letter, _, _ in rows) + 1
    grouped: list[list[Word]] = [[] for _ in range(size)]
    for letter, word, _ in rows:
        grouped[letter].append(word)

    for letter, words in enumerate(grouped):
        if not words:
            msg: str = f"Letter {letter} has no image."
            raise ParseError(msg, source=source)

    return grouped


def _target_for(words: Sequence[Word], domain_size: int) -> Alphabet:
    top: int = max((max(word.letters) for word in words if word), default=0)
    return Alphabet(max(2, domain_size, top + 1))


def _retarget(word: Word, alphabet: Alphabet) -> Word:
    return Word(word.letters, alphabet)


def parse_morphism(text: str, *, source: str | None = None, name: str | None = None) -> Morphism:
    rows = _parse_lines(text, source)
    grouped = _grouped(rows, source)

    for (letter, _, number), seen in zip(rows, _seen_before(rows)):
        if seen:
            msg: str = f"Letter {letter} has more than one image."
            raise ParseError(msg, source=source, line=number)

    images: list[Word] = [words[0] for words in grouped]
    try:
        target: Alphabet = _target_for(images, len(images))
        return Morphism([_retarget(image, target) for image in images], target=target, name=name)
    except (AlphabetError, MorphismError) as e:
        raise ParseError(str(e), source=source) from e


def _seen_before(rows: list[tuple[int, Word, int]]) -> Iterator[bool]:
    seen: set[int] = set()
    for letter, _, _ in rows:
        yield letter in seen
        seen.add(letter)


def parse_multimorphism(text: str, *, source: str | None = None, name: str | None = None) -> MultiMorphism:
    grouped = _grouped(_parse_lines(text, source), source)

    try:
        target: Alphabet = _target_for([word for words in grouped for word in words], len(grouped))
        return MultiMorphism(
            [[_retarget(word, target) for word in words] for words in grouped], target=target, name=name
        )
    except (AlphabetError, MorphismError) as e:
        raise ParseError(str(e), source=source) from e


def format_morphism(h: Morphism, *, comment: str | None = None) -> str:
    lines: list[str] = [f"# {comment}"] if comment else []
    lines.extend(f"{letter} -> {image}" for letter, image in enumerate(h.images))
    return "\n".join(lines) + "\n"


def format_multimorphism(h: MultiMorphism, *, comment: str | None = None) -> str:
    lines: list[str] = [f"# {comment}"] if comment else []
    lines.extend(f"{letter} -> {option}" for letter, options in enumerate(h.alternatives) for option in options)
    return "\n".join(lines) + "\n"


TAU: Morphism = Morphism.from_digits("012", "02", "1", name="tau")
TAU3: Morphism = Morphism.from_digits("012021012102", "01202102", "0121", name="tau3")

if compose(TAU, compose(TAU, TAU)).images != TAU3.images:
    _msg: str = "Built-in tau3 does not match tau composed three times."
    raise MorphismError(_msg)


@functools.cache
def vtm() -> FixedPointStream:
    """The shared stream of the ternary Thue word ``tau^w(0)``."""
    return fixed_point(TAU, 0)
