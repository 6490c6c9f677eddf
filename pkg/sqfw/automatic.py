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

import logging
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING, Unpack

import numpy as np

from .config import get_settings
from .errors import ParseError, ResourceLimitError, StabilizationError
from .words import Word, WordStream


if TYPE_CHECKING:
    import numpy.typing as npt

    from .types_.core import Letter, SynthesisOptions
    from .types_.reports import WitnessRecord


__all__ = (
    "Dfao",
    "dfao_eval",
    "kernel_synthesize",
    "dfao_equiv_prefix",
    "validate_synthesis",
    "same_first_last_bounded",
    "residue_coverage",
    "doubling_check",
    "aligned_witnesses",
    "subsample_square_witnesses",
    "power_of_two_check",
    "letter_progression",
    "witness_records",
)


logger: logging.Logger = logging.getLogger(__name__)

# Upper bound on the cells of one 2-D window in same_first_last_bounded.
_WINDOW_CELLS: int = 1 << 24


class Dfao:
    """A deterministic finite automaton with output reading base-2 digits, most significant first.

    ``n = 0`` is read as the empty input, so its value is the output of the initial state.
    """

    __slots__ = ("transitions", "outputs", "initial")

    def __init__(self, transitions: Sequence[Sequence[int]], outputs: Sequence[int], initial: int = 0) -> None:
        table = np.asarray(transitions, dtype=np.int64).reshape(-1, 2)
        states: int = table.shape[0]

        if len(outputs) != states:
            msg: str = f"{states} states but {len(outputs)} outputs."
            raise ValueError(msg)

        if not 0 <= initial < states or (table.size and (table.min() < 0 or table.max() >= states)):
            msg = "Transitions and the initial state must name existing states."
            raise ValueError(msg)

        self.transitions: npt.NDArray[np.int64] = table
        self.outputs: npt.NDArray[np.uint8] = np.asarray(outputs, dtype=np.uint8)
        self.initial: int = initial

    @property
    def state_count(self) -> int:
        return int(self.transitions.shape[0])

    def path(self, n: int) -> list[int]:
        """States visited on the canonical binary expansion of ``n``, initial state first."""
        states: list[int] = [self.initial]
        if n:
            for digit in bin(n)[2:]:
                states.append(int(self.transitions[states[-1], int(digit)]))

        return states

    def eval(self, n: int) -> Letter:
        return int(self.outputs[self.path(n)[-1]])

    def eval_range(self, count: int) -> npt.NDArray[np.uint8]:
        """Values for ``0 <= n < count``."""
        states = np.empty(max(count, 1), dtype=np.int64)
        states[0] = self.initial

        low: int = 1
        while low < count:
            high: int = min(2 * low, count)
            n = np.arange(low, high, dtype=np.int64)
            states[low:high] = self.transitions[states[n >> 1], n & 1]
            low = high

        return self.outputs[states[:count]]

    def minimize(self) -> Dfao:
        """Moore refinement over the reachable states."""
        reachable: list[int] = [self.initial]
        seen: set[int] = {self.initial}
        for state in reachable:
            for target in self.transitions[state]:
                if int(target) not in seen:
                    seen.add(int(target))
                    reachable.append(int(target))

        blocks: dict[int, int] = {state: int(self.outputs[state]) for state in reachable}
        while True:
            signatures: dict[int, tuple[int, int, int]] = {
                state: (blocks[state], *(blocks[int(t)] for t in self.transitions[state])) for state in reachable
            }
            numbering: dict[tuple[int, int, int], int] = {}
            for state in reachable:
                numbering.setdefault(signatures[state], len(numbering))

            refined: dict[int, int] = {state: numbering[signatures[state]] for state in reachable}
            if len(numbering) == len(set(blocks.values())):
                blocks = refined
                break

            blocks = refined

        count: int = len(set(blocks.values()))
        transitions: list[list[int]] = [[0, 0] for _ in range(count)]
        outputs: list[int] = [0] * count
        for state in reachable:
            block: int = blocks[state]
            transitions[block] = [blocks[int(t)] for t in self.transitions[state]]
            outputs[block] = int(self.outputs[state])

        return Dfao(transitions, outputs, blocks[self.initial])

    def to_text(self) -> str:
        lines: list[str] = [f"states {self.state_count} init {self.initial}"]
        for state in range(self.state_count):
            lines.extend(f"{state} {digit} -> {int(self.transitions[state, digit])}" for digit in (0, 1))

        lines.extend(f"out {state} -> {int(self.outputs[state])}" for state in range(self.state_count))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, *, source: str | None = None) -> Dfao:
        header: tuple[int, int] | None = None
        moves: dict[tuple[int, int], int] = {}
        outputs: dict[int, int] = {}

        for number, raw in enumerate(text.splitlines(), start=1):
            parts: list[str] = raw.split("#", 1)[0].split()
            if not parts:
                continue

            try:
                if parts[0] == "states" and len(parts) == 4 and parts[2] == "init":
                    header = (int(parts[1]), int(parts[3]))
                elif parts[0] == "out" and len(parts) == 4 and parts[2] == "->":
                    outputs[int(parts[1])] = int(parts[3])
                elif len(parts) == 4 and parts[2] == "->" and parts[1] in ("0", "1"):
                    moves[(int(parts[0]), int(parts[1]))] = int(parts[3])
                else:
                    raise ValueError(raw)
            except ValueError:
                msg: str = f"Unrecognised DFAO line {raw.strip()!r}."
                raise ParseError(msg, source=source, line=number) from None

        if header is None:
            msg = "Missing 'states N init I' header."
            raise ParseError(msg, source=source)

        states, initial = header
        try:
            transitions = [[moves[(state, digit)] for digit in (0, 1)] for state in range(states)]
            letters = [outputs[state] for state in range(states)]
            return cls(transitions, letters, initial)
        except (KeyError, ValueError) as e:
            msg = f"Incomplete or inconsistent automaton: {e}."
            raise ParseError(msg, source=source) from e

    def __repr__(self) -> str:
        return f"Dfao: states={self.state_count}, initial={self.initial}"


def dfao_eval(A: Dfao, n: int) -> Letter:
    return A.eval(n)


def _kernel_automaton(w: WordStream, compare_len: int, state_cap: int) -> tuple[list[list[int]], list[int]]:
    # Kernel element (e, r) is n -> w[2^e n + r]; reading digit d leads to (e + 1, r + d 2^e).
    representatives: list[tuple[int, int]] = [(0, 0)]
    keys: dict[bytes, int] = {w.array(compare_len).tobytes(): 0}
    transitions: list[list[int]] = []

    index: int = 0
    while index < len(representatives):
        e, r = representatives[index]
        prefix = w.array(2 ** (e + 1) * compare_len)
        row: list[int] = []

        for digit in (0, 1):
            offset: int = r + digit * 2**e
            key: bytes = prefix[offset :: 2 ** (e + 1)][:compare_len].tobytes()
            state: int | None = keys.get(key)

            if state is None:
                state = len(representatives)
                if state >= state_cap:
                    msg: str = (
                        f"2-kernel exceeds {state_cap} classes at compare length {compare_len}; "
                        "the stream may not be 2-automatic."
                    )
                    raise ResourceLimitError(msg)

                keys[key] = state
                representatives.append((e + 1, offset))

            row.append(state)

        transitions.append(row)
        index += 1

    outputs: list[int] = [w[r] for _, r in representatives]
    logger.debug("2-kernel closed with %d classes.", len(representatives))
    return transitions, outputs


def _reverse(transitions: list[list[int]], outputs: list[int], state_cap: int) -> Dfao:
    # Least-significant-first automaton to most-significant-first: states are the maps
    # q -> delta*(q, reversed input), with F_xd = F_x after delta_d.
    size: int = len(transitions)
    identity: tuple[int, ...] = tuple(range(size))
    functions: list[tuple[int, ...]] = [identity]
    numbering: dict[tuple[int, ...], int] = {identity: 0}
    table: list[list[int]] = []

    index: int = 0
    while index < len(functions):
        current = functions[index]
        row: list[int] = []

        for digit in (0, 1):
            following = tuple(current[transitions[q][digit]] for q in range(size))
            state: int | None = numbering.get(following)
            if state is None:
                state = len(functions)
                if state >= state_cap**2:
                    msg: str = f"Reversed automaton exceeds {state_cap ** 2} states."
                    raise ResourceLimitError(msg)

                numbering[following] = state
                functions.append(following)

            row.append(state)

        table.append(row)
        index += 1

    return Dfao(table, [outputs[function[0]] for function in functions], 0)


def kernel_synthesize(w: WordStream, compare_len: int | None = None, **options: Unpack[SynthesisOptions]) -> Dfao:
    """Build a minimal msd-first 2-DFAO for ``w`` from its 2-kernel.

    Kernel elements are identified by their first ``compare_len`` letters, so the result is only
    as good as that horizon; validate it with :func:`dfao_equiv_prefix`.
    """
    settings = get_settings()
    compare_len = compare_len or options.get("compare_len", settings.compare_len)
    state_cap: int = options.get("state_cap", settings.kernel_state_cap)

    transitions, outputs = _kernel_automaton(w, compare_len, state_cap)
    automaton: Dfao = _reverse(transitions, outputs, state_cap).minimize()

    logger.info("Synthesized a %d-state DFAO for %s.", automaton.state_count, w.name or "stream")
    return automaton


def dfao_equiv_prefix(A: Dfao, w: WordStream, n: int) -> bool:
    return bool(np.array_equal(A.eval_range(n), w.array(n)))


def validate_synthesis(A: Dfao, w: WordStream, n: int | None = None) -> None:
    n = n or get_settings().validate_len
    if not dfao_equiv_prefix(A, w, n):
        values = A.eval_range(n)
        first: int = int(np.flatnonzero(values != w.array(n))[0])
        msg: str = f"Synthesized DFAO disagrees with {w.name or 'the stream'} at n={first}."
        raise StabilizationError(msg)


def same_first_last_bounded(w: WordStream, max_gap: int, bound: int) -> dict[int, int | None]:
    """For each ``2 <= k <= max_gap``, the least ``i <= bound`` with ``w[i] = w[i+k]`` in {0, 2}."""
    letters = w.array(bound + max_gap + 1)
    report: dict[int, int | None] = dict.fromkeys(range(2, max_gap + 1))

    pending = np.arange(2, max_gap + 1, dtype=np.int64)
    low: int = 0
    width: int = 64

    while pending.size and low <= bound:
        width = min(width, bound + 1 - low, max(1, _WINDOW_CELLS // pending.size))
        i = np.arange(low, low + width, dtype=np.int64)
        first = letters[i]
        second = letters[i[None, :] + pending[:, None]]
        hits = (second == first[None, :]) & (first[None, :] != 1)

        found = hits.any(axis=1)
        for k, offset in zip(pending[found], hits[found].argmax(axis=1), strict=True):
            report[int(k)] = low + int(offset)

        pending = pending[~found]
        low += width
        width *= 2

    return report


def residue_coverage(w: WordStream, u: Word, k: int, bound: int) -> dict[int, int | None]:
    """For each residue ``r`` modulo odd ``k``, the least occurrence of ``u`` at a position ``= r`` below ``bound``."""
    if k < 1 or k % 2 == 0:
        msg: str = f"Residue coverage is defined for odd moduli, not {k}."
        raise ValueError(msg)

    letters = w.array(bound + len(u))
    mask = np.ones(bound, dtype=bool)
    for j, letter in enumerate(u.letters):
        mask &= letters[j : j + bound] == letter

    positions = np.flatnonzero(mask)
    residues, first = np.unique(positions % k, return_index=True)

    report: dict[int, int | None] = dict.fromkeys(range(k))
    for residue, index in zip(residues, first, strict=True):
        report[int(residue)] = int(positions[index])

    return report


def doubling_check(w: WordStream, bound: int) -> int | None:
    """First ``i < bound`` with ``w[i]`` in {0, 2} but ``w[2i] != w[i]``, or ``None``."""
    letters = w.array(2 * bound)
    head = letters[:bound]
    violations = np.flatnonzero((head != 1) & (letters[: 2 * bound : 2] != head))
    return int(violations[0]) if violations.size else None


def aligned_witnesses(w: WordStream, moduli: Iterable[int], bound: int) -> dict[int, int | None]:
    """For each ``k``, the least ``i = 0 (mod k)``, ``i <= bound``, with ``w[i] = w[i+k]`` in {0, 2}.

    Such an ``i`` is a factor 00 or 22 of the subsample ``[w]_k``.
    """
    moduli = list(moduli)
    letters = w.array(bound + max(moduli, default=0) + 1)
    report: dict[int, int | None] = {}

    for k in moduli:
        sample = letters[: bound + k + 1 : k]
        hits = np.flatnonzero((sample[:-1] == sample[1:]) & (sample[:-1] != 1))
        report[k] = int(hits[0]) * k if hits.size else None

    return report


def subsample_square_witnesses(w: WordStream, max_gap: int, bound: int) -> dict[int, int | None]:
    return aligned_witnesses(w, range(2, max_gap + 1), bound)


def power_of_two_check(w: WordStream, max_exponent: int) -> list[int]:
    """Powers ``k = 2^l``, ``1 <= l <= max_exponent``, where ``w[k] = w[2k] = 2`` fails."""
    letters = w.array(2 ** (max_exponent + 1) + 1)
    return [
        2**exponent
        for exponent in range(1, max_exponent + 1)
        if not letters[2**exponent] == letters[2 ** (exponent + 1)] == 2
    ]


def letter_progression(w: WordStream, letter: Letter, p: int, offset: int, bound: int) -> int | None:
    """First ``n < bound`` with ``n = offset (mod p)`` and ``w[n] != letter``, or ``None``."""
    letters = w.array(bound)
    misses = np.flatnonzero(letters[offset:bound:p] != letter)
    return offset + int(misses[0]) * p if misses.size else None


def witness_records(report: dict[int, int | None]) -> list[WitnessRecord]:
    return [{"k": k, "witness": witness} for k, witness in sorted(report.items())]
