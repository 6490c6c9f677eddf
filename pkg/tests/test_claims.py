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

import io
import json
import logging

import pytest

from sqfw import claims
from sqfw.claims import CLAIMS, Claim, ClaimContext, claims_for, run_claim, summary, verify_paper, write_report


def test_claim_ids_are_unique_and_sorted() -> None:
    ids: list[str] = [claim.id for claim in CLAIMS]
    assert len(ids) == len(set(ids))

    fast: list[str] = [claim.id for claim in claims_for("fast")]
    assert fast == sorted(fast)
    assert "lcp.bound" not in fast
    assert "lcp.bound" in [claim.id for claim in claims_for("all")]
    assert all(claim.scope == "fast" for claim in claims_for("fast"))


@pytest.mark.parametrize(
    "claim_id",
    ["sqf.tau_counterexamples", "sqf.tau_vtm_factors", "catalog.checksums", "lcp.n70", "constant.p3", "mod4.tau3"],
)
def test_quick_claims_pass(claim_id: str) -> None:
    record = run_claim(claim_id, ClaimContext())
    assert record["status"] == "pass", record["details"]
    assert record["claim"] == claim_id
    assert record["wall_time"] >= 0


def test_observational_claims() -> None:
    record = run_claim("constant.p5_blocks", ClaimContext())
    assert record["status"] == "observational"


def test_raising_claim_is_a_failure(monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture) -> None:
    def explode(ctx: ClaimContext) -> tuple[bool | None, dict[str, object]]:
        raise RuntimeError("boom")

    monkeypatch.setattr(claims, "CLAIMS", (Claim("test.explode", "nowhere", "fast", explode),))

    with caplog.at_level(logging.INFO):
        record = run_claim("test.explode", ClaimContext())

    assert record["status"] == "fail"
    assert record["details"] == {"error": "RuntimeError: boom"}

    statuses = [getattr(entry, "status", None) for entry in caplog.records if entry.name == "Claim"]
    assert statuses == ["fail"]


def test_report_and_summary() -> None:
    records = [
        {"claim": "a", "locus": "x", "status": "pass", "details": {}, "wall_time": 0.1},
        {"claim": "b", "locus": "x", "status": "fail", "details": {"why": 1}, "wall_time": 0.2},
        {"claim": "c", "locus": "x", "status": "observational", "details": {}, "wall_time": 0.0},
    ]
    fp = io.StringIO()
    write_report(records, fp)  # type: ignore[arg-type]

    lines = fp.getvalue().splitlines()
    assert [json.loads(line)["claim"] for line in lines] == ["a", "b", "c"]

    text: str = summary(records)  # type: ignore[arg-type]
    assert text.splitlines()[0] == "3 claims: 1 pass, 1 fail, 1 observational"
    assert "FAIL b" in text


@pytest.mark.slow
def test_fast_scope_passes() -> None:
    records = verify_paper("fast", seed=0)

    assert [record["claim"] for record in records] == [claim.id for claim in claims_for("fast")]
    assert not [record for record in records if record["status"] == "fail"]
