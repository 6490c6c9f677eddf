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
import threading
from collections.abc import Iterable, Iterator, Sequence
from typing import TYPE_CHECKING, Self, overload

import numpy as np

from .config import get_settings
from .errors import AlphabetError, ConstraintError, ResourceLimitError, StreamExhaustedError


if TYPE_CHECKING:
    import numpy.typing as npt

    from .types_.core import Letter, SquareLocation


__all__ = (
    "Alphabet",
    "BINARY",
    "TERNARY",
    "QUATERNARY",
    "Word",
    "WordStream",
    "find_square",
    "is_squarefree",
    "square_ending_at_end",
    "suffix_square_period",
    "subsample",
    "subsequence",
    "enumerate_squarefree",
    "brute_force_squarefree",
    "factors",
    "interleave",
)


logger: logging.Logger = logging.getLogger(__name__)

_TO_LETTERS: bytes = bytes.maketrans(b"0123456789", bytes(range(10)))
_TO_DIGITS: bytes = bytes.maketrans(bytes(range(10)), b"0123456789")

# Words at least this long are checked with the hashed scan before the normative one.
_HASHED_THRESHOLD: int = 2048
_SMALL_THRESHOLD: int = 128
_CHUNK: int = 4096


class Alphabet:
    __slots__ = ("size",)

    def __init__(self, size: int) -> None:
        if not 2 <= size <= 4:
            msg: str = f"Alphabets must have between 2 and 4 letters, not {size}."
            raise AlphabetError(msg)

        self.size: int = size

    @property
    def letters(self) -> range:
        return range(self.size)

    def validate(self, letters: bytes | bytearray) -> None:
        if letters and max(letters) >= self.size:
            msg: str = f"Letter {max(letters)} is outside the alphabet {{0..{self.size - 1}}}."
            raise AlphabetError(msg)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and other.size == self.size

    def __hash__(self) -> int:
        return hash(("Alphabet", self.size))

    def __repr__(self) -> str:
        return f"Alphabet(size={self.size})"


BINARY: Alphabet = Alphabet(2)
TERNARY: Alphabet = Alphabet(3)
QUATERNARY: Alphabet = Alphabet(4)


class Word:
    """An immutable finite word. Letters are small integers stored contiguously as bytes."""

    __slots__ = ("_letters", "_alphabet")

    def __init__(self, letters: bytes | bytearray | Iterable[int] = b"", alphabet: Alphabet = TERNARY) -> None:
        data: bytes = bytes(letters)
        alphabet.validate(data)

        self._letters: bytes = data
        self._alphabet: Alphabet = alphabet

    @classmethod
    def _wrap(cls, letters: bytes, alphabet: Alphabet) -> Word:
        self = object.__new__(cls)
        self._letters = letters
        self._alphabet = alphabet
        return self

    @classmethod
    def from_digits(cls, text: str, alphabet: Alphabet = TERNARY) -> Word:
        raw: bytes = "".join(text.split()).encode("ascii", errors="replace")
        if raw.translate(None, b"0123456789"):
            msg: str = f"Not a digit string: {text!r}."
            raise AlphabetError(msg)

        return cls(raw.translate(_TO_LETTERS), alphabet)

    @property
    def letters(self) -> bytes:
        return self._letters

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def to_array(self) -> npt.NDArray[np.uint8]:
        return np.frombuffer(self._letters, dtype=np.uint8)

    def permute(self, mapping: Sequence[int]) -> Word:
        table: bytes = bytes(mapping) + bytes(range(len(mapping), 256))
        return Word(self._letters.translate(table), self._alphabet)

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self._letters)

    @overload
    def __getitem__(self, index: int) -> int: ...

    @overload
    def __getitem__(self, index: slice) -> Word: ...

    def __getitem__(self, index: int | slice) -> int | Word:
        if isinstance(index, slice):
            return Word._wrap(self._letters[index], self._alphabet)

        return self._letters[index]

    def __add__(self, other: Word) -> Word:
        if other._alphabet != self._alphabet:
            msg: str = f"Cannot concatenate words over {self._alphabet!r} and {other._alphabet!r}."
            raise AlphabetError(msg)

        return Word._wrap(self._letters + other._letters, self._alphabet)

    def __mul__(self, times: int) -> Word:
        return Word._wrap(self._letters * times, self._alphabet)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and other._letters == self._letters

    def __lt__(self, other: Word) -> bool:
        return self._letters < other._letters

    def __hash__(self) -> int:
        return hash(self._letters)

    def __str__(self) -> str:
        return self._letters.translate(_TO_DIGITS).decode("ascii")

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


class WordStream:
    """A lazily extended infinite word.

    Letters are pulled from ``chunks`` on demand and cached; the cache only grows, so
    ``prefix(n)`` is deterministic. Extension is serialized with a lock.
    """

    def __init__(self, chunks: Iterator[bytes], *, alphabet: Alphabet = TERNARY, name: str | None = None) -> None:
        self._chunks: Iterator[bytes] = chunks
        self._cache: bytearray = bytearray()
        self._lock: threading.Lock = threading.Lock()

        self.alphabet: Alphabet = alphabet
        self.name: str | None = name

    @classmethod
    def from_letters(cls, letters: Iterable[int], *, alphabet: Alphabet = TERNARY, name: str | None = None) -> Self:
        iterator: Iterator[int] = iter(letters)

        def chunks() -> Iterator[bytes]:
            while chunk := bytes(itertools.islice(iterator, _CHUNK)):
                yield chunk

        return cls(chunks(), alphabet=alphabet, name=name)

    @classmethod
    def periodic(cls, word: Word, *, name: str | None = None) -> WordStream:
        if not len(word):
            msg: str = "Cannot repeat the empty word."
            raise ValueError(msg)

        block: bytes = word.letters * max(1, _CHUNK // len(word))
        return cls(itertools.repeat(block), alphabet=word.alphabet, name=name or f"({word})^w")

    @classmethod
    def constant(cls, letter: Letter, *, alphabet: Alphabet = TERNARY) -> WordStream:
        return cls.periodic(Word([letter], alphabet), name=f"{letter}^w")

    def _extend(self, n: int) -> None:
        cache: bytearray = self._cache

        while len(cache) < n:
            try:
                chunk: bytes = next(self._chunks)
            except StopIteration:
                msg: str = f"Stream {self.name or '<anonymous>'} ended after {len(cache)} letters; {n} were requested."
                raise StreamExhaustedError(msg) from None

            self.alphabet.validate(chunk)
            cache += chunk

    def ensure(self, n: int) -> None:
        if len(self._cache) >= n:
            return

        with self._lock:
            self._extend(n)

    @property
    def cached_length(self) -> int:
        return len(self._cache)

    def slice(self, start: int, stop: int) -> bytes:
        self.ensure(stop)
        return bytes(self._cache[start:stop])

    def prefix(self, n: int) -> Word:
        return Word._wrap(self.slice(0, n), self.alphabet)

    def array(self, n: int) -> npt.NDArray[np.uint8]:
        return np.frombuffer(self.slice(0, n), dtype=np.uint8)

    def permute(self, mapping: Sequence[int]) -> WordStream:
        table: bytes = bytes(mapping) + bytes(range(len(mapping), 256))
        return WordStream(
            (chunk.translate(table) for chunk in self.iter_chunks()),
            alphabet=self.alphabet,
            name=f"permuted({self.name})",
        )

    def iter_chunks(self, start: int = 0) -> Iterator[bytes]:
        position: int = start
        while True:
            chunk: bytes = self.slice(position, position + _CHUNK)
            position += len(chunk)
            yield chunk

    def __getitem__(self, index: int) -> int:
        if index < 0:
            msg: str = "Streams are infinite; negative indices are not supported."
            raise IndexError(msg)

        self.ensure(index + 1)
        return self._cache[index]

    def __iter__(self) -> Iterator[int]:
        for chunk in self.iter_chunks():
            yield from chunk

    def __repr__(self) -> str:
        return f"WordStream: name={self.name}, cached={len(self._cache)}"


def _as_bytes(w: Word | bytes | bytearray) -> bytes:
    if isinstance(w, Word):
        return w.letters

    return bytes(w)


def suffix_square_period(buf: bytes | bytearray, end: int) -> int:
    """Smallest period of a square ending exactly at ``end`` in ``buf``, or 0."""
    if end < 2:
        return 0

    last: int = buf[end - 1]
    for p in range(1, end // 2 + 1):
        if buf[end - 1 - p] == last and buf[end - 2 * p : end - p] == buf[end - p : end]:
            return p

    return 0


def _scan_small(letters: bytes) -> SquareLocation | None:
    for end in range(2, len(letters) + 1):
        period: int = suffix_square_period(letters, end)
        if period:
            return (end - 2 * period, period)

    return None


def _scan(letters: bytes) -> SquareLocation | None:
    # Normative scan: smallest end index, then smallest period.
    n: int = len(letters)
    if n <= _SMALL_THRESHOLD:
        return _scan_small(letters)

    a: npt.NDArray[np.uint8] = np.frombuffer(letters, dtype=np.uint8)
    best: SquareLocation | None = None
    limit: int = n

    for p in range(1, n // 2 + 1):
        if 2 * p > limit:
            break

        eq = a[: limit - p] == a[p:limit]
        counts = np.concatenate((np.zeros(1, dtype=np.int64), np.cumsum(eq, dtype=np.int64)))
        windows = counts[p : limit - p + 1] - counts[: limit - 2 * p + 1]
        hits = np.flatnonzero(windows == p)

        if hits.size:
            start: int = int(hits[0])
            best = (start, p)
            # Later squares must end strictly earlier to win the tie-break.
            limit = start + 2 * p - 1

    return best


_MOD: int = 2_147_483_647
_BASE: int = 1_000_003
_QUERY_CHUNK: int = 1 << 21


def _powers(n: int) -> npt.NDArray[np.int64]:
    out = np.ones(n, dtype=np.int64)
    k: int = 1
    step: int = _BASE

    while k < n:
        m: int = min(k, n - k)
        out[k : k + m] = out[:m] * step % _MOD
        step = step * step % _MOD
        k *= 2

    return out


class _Hasher:
    __slots__ = ("powers", "prefix")

    def __init__(self, letters: bytes) -> None:
        n: int = len(letters)
        values = np.frombuffer(letters, dtype=np.uint8).astype(np.int64) + 1

        self.powers: npt.NDArray[np.int64] = _powers(n + 1)
        self.prefix: npt.NDArray[np.int64] = np.zeros(n + 1, dtype=np.int64)
        self.prefix[1:] = np.cumsum(values * self.powers[:n] % _MOD) % _MOD

    def equal(
        self, i: npt.NDArray[np.int64], j: npt.NDArray[np.int64], length: npt.NDArray[np.int64]
    ) -> npt.NDArray[np.bool_]:
        # j > i; compares w[i:i+length] with w[j:j+length]
        left = (self.prefix[i + length] - self.prefix[i]) % _MOD
        right = (self.prefix[j + length] - self.prefix[j]) % _MOD
        return right == left * self.powers[j - i] % _MOD

    def extension(
        self,
        i: npt.NDArray[np.int64],
        j: npt.NDArray[np.int64],
        cap: npt.NDArray[np.int64],
        *,
        backward: bool,
    ) -> npt.NDArray[np.int64]:
        lo = np.zeros_like(cap)
        hi = cap.copy()

        while True:
            active = lo < hi
            if not active.any():
                return lo

            mid = (lo + hi + 1) // 2
            ok = self.equal(i - mid, j - mid, mid) if backward else self.equal(i, j, mid)
            lo = np.where(active & ok, mid, lo)
            hi = np.where(active & ~ok, mid - 1, hi)


def _period_has_square(a: npt.NDArray[np.uint8], p: int) -> bool:
    n: int = len(a)
    eq = a[: n - p] == a[p:]
    counts = np.concatenate((np.zeros(1, dtype=np.int64), np.cumsum(eq, dtype=np.int64)))
    return bool(((counts[p : n - p + 1] - counts[: n - 2 * p + 1]) == p).any())


def _has_square_hashed(letters: bytes) -> bool:
    # A run of >= p positions with w[t] == w[t+p] contains a multiple of p, so it is enough
    # to measure the run through every multiple of p with hashed extension queries.
    n: int = len(letters)
    half: int = n // 2
    if half < 1:
        return False

    a: npt.NDArray[np.uint8] = np.frombuffer(letters, dtype=np.uint8)
    hasher: _Hasher = _Hasher(letters)

    periods = np.arange(1, half + 1, dtype=np.int64)
    counts = (n - 1 - periods) // periods + 1
    totals = np.cumsum(counts)

    first: int = 0
    while first < half:
        done: int = int(totals[first - 1]) if first else 0
        last: int = int(np.searchsorted(totals, done + _QUERY_CHUNK, side="right"))
        last = max(last, first + 1)

        ps = np.repeat(periods[first:last], counts[first:last])
        offsets = np.repeat(np.cumsum(counts[first:last]) - counts[first:last], counts[first:last])
        x = (np.arange(ps.size, dtype=np.int64) - offsets) * ps
        y = x + ps

        forward = hasher.extension(x, y, np.minimum(ps, n - y), backward=False)
        backward = hasher.extension(x, y, np.minimum(ps - 1, x), backward=True)

        for index in np.flatnonzero((forward >= 1) & (forward + backward >= ps)):
            p: int = int(ps[index])
            start: int = int(x[index] - backward[index])
            if letters[start : start + p] == letters[start + p : start + 2 * p]:
                return True

            logger.warning("Hash collision at period %d near %d; rescanning the period exactly.", p, start)
            if _period_has_square(a, p):
                return True

        first = last

    return False


def find_square(w: Word | bytes | bytearray) -> SquareLocation | None:
    """The square with the smallest end index (ties: smallest period), as ``(start, period)``."""
    letters: bytes = _as_bytes(w)
    if len(letters) >= _HASHED_THRESHOLD and not _has_square_hashed(letters):
        return None

    return _scan(letters)


def is_squarefree(w: Word | bytes | bytearray) -> bool:
    letters: bytes = _as_bytes(w)
    if len(letters) >= _HASHED_THRESHOLD:
        return not _has_square_hashed(letters)

    return _scan(letters) is None


def square_ending_at_end(w: Word | bytes | bytearray) -> int | None:
    letters: bytes = _as_bytes(w)
    if not letters:
        msg: str = "square_ending_at_end needs a nonempty word."
        raise ValueError(msg)

    return suffix_square_period(letters, len(letters)) or None


def _subsample_chunks(stream: WordStream, p: int, offset: int) -> Iterator[bytes]:
    start: int = offset
    while True:
        stop: int = start + p * _CHUNK
        yield stream.slice(start, stop)[::p]
        start = stop


@overload
def subsample(w: Word, p: int, offset: int = 0) -> Word: ...


@overload
def subsample(w: WordStream, p: int, offset: int = 0) -> WordStream: ...


def subsample(w: Word | WordStream, p: int, offset: int = 0) -> Word | WordStream:
    if p < 1 or offset < 0:
        msg: str = f"subsample needs p >= 1 and offset >= 0 (got p={p}, offset={offset})."
        raise ConstraintError(msg)

    if isinstance(w, Word):
        return Word._wrap(w.letters[offset::p], w.alphabet)

    return WordStream(_subsample_chunks(w, p, offset), alphabet=w.alphabet, name=f"[{w.name}]_{p}+{offset}")


def _increasing(positions: Iterable[int]) -> Iterator[int]:
    previous: int = -1
    for position in positions:
        if position <= previous:
            msg: str = f"Positions must be strictly increasing; {position} follows {previous}."
            raise ConstraintError(msg)

        previous = position
        yield position


@overload
def subsequence(w: Word, positions: Iterable[int]) -> Word: ...


@overload
def subsequence(w: WordStream, positions: Iterable[int]) -> WordStream: ...


def subsequence(w: Word | WordStream, positions: Iterable[int]) -> Word | WordStream:
    if isinstance(w, Word):
        letters: bytes = w.letters
        picked: list[int] = []
        for position in _increasing(positions):
            if position >= len(letters):
                break
            picked.append(letters[position])

        return Word._wrap(bytes(picked), w.alphabet)

    stream: WordStream = w
    return WordStream.from_letters(
        (stream[position] for position in _increasing(positions)),
        alphabet=stream.alphabet,
        name=f"subsequence({stream.name})",
    )


@functools.lru_cache(maxsize=128)
def _squarefree_level(size: int, n: int) -> tuple[bytes, ...]:
    if n == 0:
        return (b"",)

    out: list[bytes] = []
    for word in _squarefree_level(size, n - 1):
        for letter in range(size):
            candidate: bytes = word + bytes((letter,))
            if not suffix_square_period(candidate, n):
                out.append(candidate)

    return tuple(out)


def enumerate_squarefree(alphabet: Alphabet, n: int) -> list[Word]:
    """All squarefree words of length ``n`` over ``alphabet``, in lexicographic order."""
    if n < 0:
        msg: str = f"Length must be non-negative, not {n}."
        raise ValueError(msg)

    cap: int = get_settings().enumeration_cap
    if alphabet.size**n > cap:
        msg = f"Enumerating {alphabet.size}^{n} candidates exceeds the configured cap of {cap}."
        raise ResourceLimitError(msg)

    return [Word._wrap(letters, alphabet) for letters in _squarefree_level(alphabet.size, n)]


def brute_force_squarefree(alphabet: Alphabet, n: int) -> list[Word]:
    """Oracle: filter every word of length ``n`` with a quadratic factor-pair scan."""
    out: list[Word] = []

    for letters in itertools.product(alphabet.letters, repeat=n):
        data: bytes = bytes(letters)
        has_square: bool = any(
            data[i : i + p] == data[i + p : i + 2 * p] for p in range(1, n // 2 + 1) for i in range(n - 2 * p + 1)
        )
        if not has_square:
            out.append(Word._wrap(data, alphabet))

    return out


def factors(w: Word, n: int) -> set[Word]:
    letters: bytes = w.letters
    if n > len(letters):
        msg: str = f"Factor length {n} exceeds word length {len(letters)}."
        raise ValueError(msg)

    distinct: set[bytes] = {letters[i : i + n] for i in range(len(letters) - n + 1)}
    return {Word._wrap(factor, w.alphabet) for factor in distinct}


def interleave(w: Word, p: int) -> Word:
    """Shift ``w`` from {0,1,2} to {1,2,3} and put 0 at every multiple of ``p``.

    The result is a quaternary word whose ``p``-subsample is constant 0; it is squarefree
    whenever ``w`` is.
    """
    if p < 2:
        msg: str = f"Interleaving needs p >= 2, not {p}."
        raise ValueError(msg)

    shifted: bytes = w.letters.translate(bytes([1, 2, 3]) + bytes(range(3, 256)))
    out: bytearray = bytearray()
    for start in range(0, len(shifted), p - 1):
        out.append(0)
        out += shifted[start : start + p - 1]

    return Word._wrap(bytes(out), QUATERNARY)
