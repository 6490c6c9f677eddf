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

import numpy as np
import pytest

from conftest import random_squarefree
from sqfw.catalog import Catalog
from sqfw.errors import AlphabetError, MorphismError, ParseError, StreamExhaustedError
from sqfw.morphisms import (
    PI,
    TAU,
    TAU3,
    Morphism,
    MultiMorphism,
    Permutation,
    apply,
    compose,
    conjugate,
    cyclic_shift_morphism,
    cyclic_shift_multimorphism,
    fixed_point,
    format_morphism,
    format_multimorphism,
    lcp_of,
    lcs_of,
    parse_morphism,
    parse_multimorphism,
    subsample_morphism,
    vtm,
)
from sqfw.words import BINARY, Word, subsample


VTM_24: str = "012021012102012021020121"


def digits(h: Morphism) -> list[str]:
    return [str(image) for image in h.images]


def test_vtm_prefix() -> None:
    assert str(vtm().prefix(24)) == VTM_24
    assert vtm() is vtm()


def test_tau_cubed() -> None:
    assert digits(TAU3) == ["012021012102", "01202102", "0121"]
    assert compose(TAU, compose(TAU, TAU)) == TAU3
    assert digits(compose(TAU, TAU)) == ["012021", "0121", "02"]


def test_apply_word_and_stream() -> None:
    assert str(apply(TAU, Word.from_digits("010"))) == "01202012"
    assert TAU(vtm()).prefix(500) == vtm().prefix(500)

    with pytest.raises(MorphismError):
        apply(Morphism.from_digits("01", "10", alphabet=BINARY), Word.from_digits("2"))


def test_fixed_point_blocks() -> None:
    stream = fixed_point(TAU, 0)
    assert [stream.block_start(i) for i in range(5)] == [0, 3, 5, 6, 9]
    assert stream.block_of(0) == 0
    assert stream.block_of(4) == 1
    assert stream.block_of(5) == 2
    assert stream.block_of(6) == 3

    with pytest.raises(MorphismError):
        fixed_point(TAU, 1)


def test_morphism_properties() -> None:
    assert TAU.lengths == (3, 2, 1)
    assert not TAU.is_uniform()
    assert TAU.uniform_length() is None

    h: Morphism = cyclic_shift_morphism(Word.from_digits("012"), name="shift")
    assert digits(h) == ["012", "120", "201"]
    assert h.uniform_length() == 3

    with pytest.raises(MorphismError):
        Morphism.from_digits("01", "", "2")


def test_subsample_and_conjugate() -> None:
    h: Morphism = Morphism.from_digits("012102", "120210", "201021", name="h")
    assert digits(subsample_morphism(h, 2)) == ["020", "101", "212"]
    with pytest.raises(MorphismError):
        subsample_morphism(TAU, 2)

    g: Morphism = Morphism.from_digits("01", "02", "012", name="g")
    assert digits(conjugate(g, 0)) == ["10", "20", "120"]
    with pytest.raises(MorphismError):
        conjugate(TAU, 1)


def test_common_prefix_and_suffix() -> None:
    h: Morphism = Morphism.from_digits("0121", "0122", "0102")
    assert lcp_of(h) == 2
    assert lcs_of(h) == 0
    assert lcs_of(Morphism.from_digits("1021", "0121", "2021")) == 2


def test_permutations() -> None:
    assert PI.mapping == (1, 2, 0)
    assert PI.power(3) == Permutation.identity()
    assert PI.inverse().compose(PI) == Permutation.identity()
    assert PI.power(-1) == PI.inverse()
    assert str(PI.apply(Word.from_digits("0012"))) == "1120"

    with pytest.raises(AlphabetError):
        Permutation([0, 0, 1])


def test_multimorphism() -> None:
    H: MultiMorphism = cyclic_shift_multimorphism([Word.from_digits("0120"), Word.from_digits("01210")], name="H")
    assert [str(option) for option in H[1]] == ["1201", "12021"]
    assert H.lcp(0) == 3
    assert H.lcs(0) == 1
    assert digits(H.choose((1, 0, 0))) == ["01210", "1201", "2012"]

    with pytest.raises(MorphismError):
        MultiMorphism([[Word.from_digits("0"), Word.from_digits("0")]])


def test_parse_morphism() -> None:
    h: Morphism = parse_morphism("# tau\n0 -> 012\n1 -> 02  # comment\n\n2 -> 1\n", name="tau")
    assert h == TAU
    assert parse_morphism(format_morphism(TAU, comment="tau")) == TAU


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("0 -> 012\n1 -> 02\n1 -> 01\n2 -> 1\n", 3),
        ("0 -> 012\n1 => 02\n", 2),
        ("0 -> 01x\n", 1),
    ],
)
def test_parse_morphism_errors(text: str, line: int) -> None:
    with pytest.raises(ParseError) as info:
        parse_morphism(text, source="bad.morph")

    assert info.value.line == line
    assert str(info.value).startswith(f"bad.morph:{line}:")


def test_parse_morphism_missing_letter() -> None:
    with pytest.raises(ParseError):
        parse_morphism("0 -> 01\n2 -> 10\n")
    with pytest.raises(ParseError):
        parse_morphism("# nothing\n")


def test_parse_multimorphism() -> None:
    text: str = "0 -> 010\n0 -> 0120\n1 -> 121\n2 -> 202\n"
    H: MultiMorphism = parse_multimorphism(text, name="m")
    assert [len(options) for options in H.alternatives] == [2, 1, 1]
    assert parse_multimorphism(format_multimorphism(H)).alternatives == H.alternatives


@pytest.mark.parametrize("n", [1, 2, 7, 100, 2500, 10_000])
def test_fixed_point_prefixes_are_stable(n: int) -> None:
    prefix: Word = fixed_point(TAU, 0).prefix(n)
    assert apply(TAU, prefix)[:n] == prefix


def test_erasing_fixed_point_is_finite() -> None:
    h: Morphism = Morphism([Word.from_digits("01"), Word(), Word.from_digits("2")], allow_empty=True)
    stream = fixed_point(h, 0)

    assert str(stream.prefix(2)) == "01"
    with pytest.raises(StreamExhaustedError):
        stream.prefix(3)


@pytest.mark.parametrize("p", [3, 11])
def test_subsampled_morphism_commutes_with_subsample(catalog: Catalog, rng: np.random.Generator, p: int) -> None:
    h: Morphism = catalog.morphism("pq_3_11")
    h_p: Morphism = subsample_morphism(h, p)

    for _ in range(50):
        x: Word = random_squarefree(rng, 8)
        assert apply(h_p, x) == subsample(apply(h, x), p)


def test_conjugation_identity(catalog: Catalog, rng: np.random.Generator) -> None:
    zero: Word = Word.from_digits("0")
    h11: Morphism = subsample_morphism(catalog.morphism("pq_3_11"), 11)
    h11_hat: Morphism = conjugate(h11, 0)

    for w in [Word(), vtm().prefix(300), *(random_squarefree(rng, 20) for _ in range(20))]:
        assert zero + apply(h11_hat, w) == apply(h11, w) + zero


def test_cyclic_shift_commutes_with_pi(catalog: Catalog, rng: np.random.Generator) -> None:
    h: Morphism = cyclic_shift_morphism(Word.from_digits("0120210121"))
    for _ in range(20):
        x: Word = Word(rng.integers(0, 3, size=40).astype(np.uint8).tobytes())
        assert apply(h, PI.apply(x)) == PI.apply(apply(h, x))

    H: MultiMorphism = catalog.multi("multi26")
    for image, shifted in zip(H[0], H[1], strict=True):
        assert PI.apply(image) == shifted
