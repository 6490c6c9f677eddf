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


__all__ = (
    "SqfwError",
    "AlphabetError",
    "MorphismError",
    "ParseError",
    "ChecksumError",
    "ResourceLimitError",
    "StabilizationError",
    "ConstraintError",
    "NoProgressionCaseError",
    "EmbeddingError",
    "StreamExhaustedError",
)


class SqfwError(Exception):
    """Base class for every error raised by this library."""


class AlphabetError(SqfwError, ValueError):
    """A letter falls outside its alphabet, or two alphabets do not agree."""


class MorphismError(SqfwError, ValueError):
    """A morphism cannot be built or used with the given arguments."""


class ParseError(SqfwError, ValueError):
    def __init__(self, message: str, *, source: str | None = None, line: int | None = None) -> None:
        self.source: str | None = source
        self.line: int | None = line

        where: str = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "

        super().__init__(f"{where}{message}")


class ChecksumError(SqfwError, RuntimeError):
    """An asset on disk does not match its pinned checksum."""


class ResourceLimitError(SqfwError, RuntimeError):
    """A configured cap would be exceeded."""


class StabilizationError(SqfwError, RuntimeError):
    """A factor set computed from a prefix changed when the prefix grew."""


class ConstraintError(SqfwError, ValueError):
    """A constraint on positions, moduli or search arguments is inconsistent or malformed."""


class NoProgressionCaseError(SqfwError, ValueError):
    """No construction is known for the requested modulus."""


class EmbeddingError(SqfwError, RuntimeError):
    """The position-forcing construction broke one of its invariants."""


class StreamExhaustedError(SqfwError, RuntimeError):
    """A stream's producer ended before the requested prefix was available."""
