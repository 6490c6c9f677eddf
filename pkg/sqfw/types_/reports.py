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

from typing import Any, NotRequired, TypedDict

from .core import ClaimStatus


class CounterexampleRecord(TypedDict):
    input: str
    image: str
    start: int
    period: int


VerdictRecord = TypedDict(
    "VerdictRecord",
    {
        "test": str,
        "subject": str,
        "pass": bool,
        "counterexample": NotRequired[CounterexampleRecord],
    },
)


class ClaimRecord(TypedDict):
    claim: str
    locus: str
    status: ClaimStatus
    details: dict[str, Any]
    wall_time: float


class SwapRecord(TypedDict):
    image: int
    old: int
    new: int
    shift: int


class WitnessRecord(TypedDict):
    k: int
    witness: int | None
