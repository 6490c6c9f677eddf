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
import hashlib
import logging
import pathlib
import tomllib
from collections.abc import Iterator
from typing import Any, NamedTuple

from .config import get_settings
from .errors import ChecksumError, MorphismError, NoProgressionCaseError, ParseError
from .morphisms import (
    TAU,
    Morphism,
    MultiMorphism,
    PI,
    apply,
    compose,
    conjugate,
    lcp_of,
    parse_morphism,
    parse_multimorphism,
    subsample_morphism,
    vtm,
)
from .verify import (
    CondThreeWitness,
    Verdict,
    multi_sqf_test,
    ternary_sqf_test,
    theorem10_falsification,
    theorem10_premises,
    uniform_sqf_test,
    vtm_cond1,
    vtm_cond2,
    vtm_cond3,
)
from .words import Word, is_squarefree, subsample


__all__ = (
    "CASE_MODULI",
    "Entry",
    "Check",
    "Report",
    "Catalog",
    "load",
    "verify_entry",
    "verify_case",
    "verify_pair_3_11",
    "verify_pair_5_6",
    "verify_theorem10",
    "progression_case",
    "progression_word",
)


logger: logging.Logger = logging.getLogger(__name__)

CASE_MODULI: tuple[int, ...] = (6, 7, 9, 10, 11, 13, 15, 17, 19, 23, 25, 29)

MANIFEST: str = "catalog.toml"


class Entry(NamedTuple):
    name: str
    path: pathlib.Path
    morphism: Morphism | MultiMorphism
    expectations: dict[str, Any]
    sha256: str
    checksum_ok: bool


class Check(NamedTuple):
    name: str
    passed: bool
    details: dict[str, Any]


class Report:
    """Named pass/fail checks about one subject."""

    __slots__ = ("subject", "checks")

    def __init__(self, subject: str) -> None:
        self.subject: str = subject
        self.checks: list[Check] = []

    def check(self, name: str, passed: bool, **details: Any) -> bool:
        self.checks.append(Check(name, bool(passed), details))
        if not passed:
            logger.info("%s: check %s failed (%s).", self.subject, name, details)

        return bool(passed)

    def verdict(self, verdict: Verdict, name: str | None = None) -> bool:
        details: dict[str, Any] = dict(verdict.details)
        if verdict.counterexample is not None:
            details["counterexample"] = repr(verdict.counterexample)

        return self.check(name or f"{verdict.test}({verdict.subject})", verdict.passed, **details)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def __repr__(self) -> str:
        return f"Report: {self.subject}, checks={len(self.checks)}, passed={self.passed}"


class Catalog:
    __slots__ = ("_entries",)

    def __init__(self, entries: dict[str, Entry]) -> None:
        self._entries: dict[str, Entry] = entries

    def __getitem__(self, name: str) -> Entry:
        try:
            return self._entries[name]
        except KeyError:
            msg: str = f"No catalog entry named {name!r}."
            raise KeyError(msg) from None

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[Entry]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def names(self) -> list[str]:
        return list(self._entries)

    def morphism(self, name: str) -> Morphism:
        found = self[name].morphism
        if not isinstance(found, Morphism):
            msg: str = f"Entry {name!r} is multi-valued."
            raise MorphismError(msg)

        return found

    def multi(self, name: str) -> MultiMorphism:
        found = self[name].morphism
        if not isinstance(found, MultiMorphism):
            msg: str = f"Entry {name!r} is single-valued."
            raise MorphismError(msg)

        return found

    def case(self, p: int) -> Morphism:
        return self.morphism(f"case_p{p}")


def _read_entry(directory: pathlib.Path, name: str, spec: dict[str, Any], strict: bool) -> Entry:
    path: pathlib.Path = directory / spec["file"]
    raw: bytes = path.read_bytes()
    digest: str = hashlib.sha256(raw).hexdigest()
    checksum_ok: bool = digest == spec.get("sha256")

    if not checksum_ok:
        msg: str = f"Asset {path.name} for {name!r} has sha256 {digest}, expected {spec.get('sha256')}."
        if strict:
            raise ChecksumError(msg)

        logger.warning(msg)

    text: str = raw.decode("ascii")
    if spec.get("kind", "morphism") == "multi":
        morphism: Morphism | MultiMorphism = parse_multimorphism(text, source=path.name, name=name)
        lengths: list[int] = [len(option) for option in morphism.alternatives[0]]
    else:
        morphism = parse_morphism(text, source=path.name, name=name)
        lengths = list(morphism.lengths)

    expected: list[int] | None = spec.get("lengths")
    if expected is not None and lengths != expected:
        msg = f"Image lengths {lengths} differ from the declared {expected}."
        raise ParseError(msg, source=path.name)

    return Entry(name, path, morphism, spec, digest, checksum_ok)


@functools.cache
def _load(directory: pathlib.Path, strict: bool) -> Catalog:
    with (directory / MANIFEST).open("rb") as fp:
        manifest: dict[str, Any] = tomllib.load(fp)

    entries: dict[str, Entry] = {
        name: _read_entry(directory, name, spec, strict) for name, spec in manifest.get("entries", {}).items()
    }
    logger.debug("Loaded %d catalog entries from %s.", len(entries), directory)
    return Catalog(entries)


def load(asset_dir: pathlib.Path | None = None, *, strict: bool = True) -> Catalog:
    """Parse every manifest entry. With ``strict``, a checksum mismatch raises :class:`ChecksumError`."""
    directory: pathlib.Path = (asset_dir or get_settings().asset_dir).resolve()
    return _load(directory, strict)


def _zero_positions_ok(h: Morphism, p: int) -> bool:
    return all(len(image) % p == 0 and not any(image.letters[::p]) for image in h.images)


def verify_entry(name: str, catalog: Catalog | None = None) -> Report:
    """Run the expectations declared for ``name`` in the manifest."""
    catalog = catalog or load(strict=False)
    entry: Entry = catalog[name]
    expect: dict[str, Any] = entry.expectations
    report: Report = Report(name)

    report.check("checksum", entry.checksum_ok, sha256=entry.sha256)
    h = entry.morphism

    if isinstance(h, MultiMorphism):
        if "multi_sqf" in expect:
            verdict: Verdict = multi_sqf_test(h)
            report.check("multi_sqf_test", verdict.passed == expect["multi_sqf"], **verdict.details)
        if "lcp" in expect:
            report.check("lcp", all(h.lcp(a) == expect["lcp"] for a in range(3)), lcp=[h.lcp(a) for a in range(3)])
        if "lcs" in expect:
            report.check("lcs", all(h.lcs(a) == expect["lcs"] for a in range(3)), lcs=[h.lcs(a) for a in range(3)])
        if expect.get("cyclic_shift"):
            shifted: bool = all(
                [PI.apply(option) for option in h[a]] == list(h[(a + 1) % 3]) for a in range(3)
            )
            report.check("cyclic_shift", shifted)
        return report

    if "ternary_sqf" in expect:
        verdict = ternary_sqf_test(h)
        report.check("ternary_sqf_test", verdict.passed == expect["ternary_sqf"])
        if "minimal_counterexamples" in expect:
            minimal: list[str] = [str(word) for word in verdict.minimal_counterexamples()]
            report.check("minimal_counterexamples", minimal == expect["minimal_counterexamples"], found=minimal)
    if "uniform_sqf" in expect:
        report.check("uniform_sqf_test", uniform_sqf_test(h).passed == expect["uniform_sqf"])
    if "vtm_cond1" in expect:
        report.check("vtm_cond1", vtm_cond1(h).passed == expect["vtm_cond1"])
    if "theorem10_premises" in expect:
        premises: Verdict = theorem10_premises(h)
        report.check("theorem10_premises", premises.passed == expect["theorem10_premises"], **premises.details)
    if "lcp" in expect:
        report.check("lcp", lcp_of(h) == expect["lcp"], lcp=lcp_of(h))
    if "modulus" in expect:
        report.check("zero_positions", _zero_positions_ok(h, expect["modulus"]), modulus=expect["modulus"])
    if "moduli" in expect:
        for p in expect["moduli"]:
            report.check(f"divisible_by_{p}", all(length % p == 0 for length in h.lengths), lengths=h.lengths)
    if "power_of" in expect:
        base: Morphism = catalog.morphism(expect["power_of"])
        power: Morphism = base
        for _ in range(expect["power"] - 1):
            power = compose(base, power)
        report.check("power", power.images == h.images, power=expect["power"])

    return report


def verify_case(p: int, catalog: Catalog | None = None) -> Report:
    if p not in CASE_MODULI:
        msg: str = f"No case morphism for p={p}; cases exist for {CASE_MODULI}."
        raise NoProgressionCaseError(msg)

    catalog = catalog or load(strict=False)
    h: Morphism = catalog.case(p)
    report: Report = Report(f"case_p{p}")

    report.verdict(uniform_sqf_test(h), "uniform_sqf_test")
    report.check("length_divisible", all(length % p == 0 for length in h.lengths), length=h.uniform_length())
    report.check("zero_positions", _zero_positions_ok(h, p))
    return report


WITNESS_H: CondThreeWitness = CondThreeWitness.from_digits("02102010210120212")
WITNESS_H3: CondThreeWitness = CondThreeWitness.from_digits("210212")
WITNESS_H11_HAT: CondThreeWitness = CondThreeWitness.from_digits("1210", "1210", "20210")


def verify_pair_3_11(catalog: Catalog | None = None, *, prefix: int = 3000) -> Report:
    catalog = catalog or load(strict=False)
    h: Morphism = catalog.morphism("pq_3_11")
    x11: Morphism = catalog.morphism("x11")
    report: Report = Report("pq_3_11")

    h3: Morphism = subsample_morphism(h, 3)
    h11: Morphism = subsample_morphism(h, 11)
    h11_hat: Morphism = conjugate(h11, 0)

    for g, witness in ((h, WITNESS_H), (h3, WITNESS_H3), (h11_hat, WITNESS_H11_HAT)):
        report.verdict(vtm_cond1(g))
        verdict, solutions = vtm_cond2(g)
        report.verdict(verdict)
        report.check(f"cond2_solutions({g.name})", solutions == {(0, 1, 0)})
        report.verdict(vtm_cond3(g, witness))

    report.check("h11 = x11 o tau", compose(x11, TAU).images == h11.images)
    report.verdict(ternary_sqf_test(x11))

    image: Word = apply(h, vtm().prefix(prefix))
    for p in (1, 3, 11):
        report.check(f"squarefree [h(vtm)]_{p}", is_squarefree(subsample(image, p)), length=len(image) // p)

    return report


def verify_pair_5_6(catalog: Catalog | None = None) -> Report:
    catalog = catalog or load(strict=False)
    h: Morphism = catalog.morphism("pq_5_6")
    report: Report = Report("pq_5_6")

    if not report.check("lengths_divisible_by_30", all(length % 30 == 0 for length in h.lengths), lengths=h.lengths):
        return report

    report.verdict(ternary_sqf_test(h), "ternary_sqf_test(h)")
    for p in (5, 6):
        report.verdict(ternary_sqf_test(subsample_morphism(h, p)), f"ternary_sqf_test(h_{p})")

    return report


def verify_theorem10(catalog: Catalog | None = None, *, max_modulus: int = 50, bound: int = 10_000) -> Report:
    catalog = catalog or load(strict=False)
    h: Morphism = catalog.morphism("brandenburg11")
    report: Report = Report("brandenburg11")

    report.verdict(theorem10_premises(h))
    refutations = theorem10_falsification(h, max_modulus, bound)
    unrefuted: list[int] = [p for p, index in refutations.items() if index is None]
    report.check("no_zero_progression", not unrefuted, unrefuted=unrefuted)
    return report


def progression_case(p: int) -> int | None:
    """The least case modulus dividing ``p``, if any."""
    return next((m for m in CASE_MODULI if p % m == 0), None)


def progression_word(p: int, length: int, catalog: Catalog | None = None) -> Word:
    """A squarefree word of ``length`` letters whose ``p``-subsample is all 0."""
    m: int | None = progression_case(p) if p >= 6 else None

    if m is not None:
        h: Morphism = (catalog or load(strict=False)).case(m)
        needed: int = length // len(h[0]) + 1
        logger.debug("Modulus %d uses case %d.", p, m)
        return apply(h, vtm().prefix(needed))[:length]

    if p >= 6 and p % 4 == 0:
        # vtm has 1 at every n = 1 (mod 4); drop the first letter and exchange 0 and 1.
        logger.debug("Modulus %d uses the progression of 1's in vtm.", p)
        return vtm().prefix(length + 1)[1:].permute((1, 0, 2))

    msg: str = f"No construction for p={p}: no case modulus in {CASE_MODULI} divides it and 4 does not."
    if p < 6:
        msg = f"progression_word needs p >= 6, got {p}."
    raise NoProgressionCaseError(msg)
