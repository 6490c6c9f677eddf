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

import pathlib
import shutil
from collections.abc import Iterator

import numpy as np
import pytest

from sqfw.catalog import Catalog, load
from sqfw.config import get_settings
from sqfw.words import Word, find_square, is_squarefree


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load()


@pytest.fixture
def asset_copy(tmp_path: pathlib.Path) -> pathlib.Path:
    target: pathlib.Path = tmp_path / "assets"
    shutil.copytree(get_settings().asset_dir, target)
    return target


@pytest.fixture
def fresh_settings() -> Iterator[None]:
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def reference_square(word: Word) -> tuple[int, int] | None:
    """Quadratic scan: smallest end index, then smallest period."""
    letters: bytes = word.letters
    for end in range(2, len(letters) + 1):
        for p in range(1, end // 2 + 1):
            if letters[end - 2 * p : end - p] == letters[end - p : end]:
                return end - 2 * p, p

    return None


def assert_square(word: Word) -> None:
    location = find_square(word)
    assert location is not None

    start, p = location
    assert word[start : start + p] == word[start + p : start + 2 * p]


def random_squarefree(rng: np.random.Generator, length: int) -> Word:
    """A random squarefree ternary word, grown letter by letter with a restart on dead ends."""
    while True:
        letters: bytearray = bytearray()
        while len(letters) < length:
            options = [letter for letter in range(3) if is_squarefree(bytes(letters) + bytes((letter,)))]
            if not options:
                break
            letters.append(options[int(rng.integers(len(options)))])

        if len(letters) == length:
            return Word(bytes(letters))
