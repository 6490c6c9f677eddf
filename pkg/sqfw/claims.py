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

import json
import logging
import pathlib
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import IO, TYPE_CHECKING, Any, NamedTuple

import numpy as np

from .automatic import (
    aligned_witnesses,
    dfao_equiv_prefix,
    doubling_check,
    kernel_synthesize,
    letter_progression,
    power_of_two_check,
    residue_coverage,
    same_first_last_bounded,
)
from .catalog import (
    CASE_MODULI,
    Catalog,
    Report,
    load,
    progression_case,
    progression_word,
    verify_case,
    verify_entry,
    verify_pair_3_11,
    verify_pair_5_6,
    verify_theorem10,
)
from .embed import EmbedState, base_word, force_subsequence, random_positions, verify_embedding
from .morphisms import TAU, TAU3, vtm
from .search import (
    Constraint,
    block_structure,
    brute_force_max,
    canonical_maximal_words,
    exhaustive_max,
    lcp_bound_check,
    lcp_flank_solutions,
    lcp_search,
    pq_probe,
)
from .utils import claim_logger
from .verify import ternary_sqf_test, vtm_cond1, vtm_factors
from .words import Word, is_squarefree, subsample


if TYPE_CHECKING:
    from .types_.core import ClaimStatus, Scope
    from .types_.reports import ClaimRecord


__all__ = ("Claim", "ClaimContext", "CLAIMS", "claims_for", "run_claim", "verify_paper", "write_report", "summary")


logger: logging.Logger = logging.getLogger(__name__)

Outcome = tuple[bool | None, dict[str, Any]]

P5_MAXIMAL: tuple[str, ...] = (
    "0102101201020120210201021012010201202101",
    "0102101201020120210201021012010201202120",
    "0120102012021020102101201020120210201210",
)
P5_BLOCKS: frozenset[str] = frozenset({"01021", "01201", "02102", "02012"})

# Regression constants established by exhaustion.
P2_MAX: int = 7
P3_MAX: int = 12
MOD4_ALTERNATING_MAX: int = 20


class ClaimContext(NamedTuple):
    seed: int = 0
    asset_dir: pathlib.Path | None = None
    workers: int | None = None

    def catalog(self) -> Catalog:
        return load(self.asset_dir, strict=False)


class Claim(NamedTuple):
    id: str
    locus: str
    scope: Scope
    run: Callable[[ClaimContext], Outcome]


def _report(report: Report) -> Outcome:
    return report.passed, {"failed": [check.name for check in report.failed()], "checks": len(report.checks)}


def _checksums(ctx: ClaimContext) -> Outcome:
    bad: list[str] = [entry.name for entry in ctx.catalog() if not entry.checksum_ok]
    return not bad, {"mismatched": bad}


def _entries(ctx: ClaimContext) -> Outcome:
    catalog: Catalog = ctx.catalog()
    failed: dict[str, list[str]] = {}
    for name in catalog.names:
        report: Report = verify_entry(name, catalog)
        if not report.passed:
            failed[name] = [check.name for check in report.failed()]

    return not failed, {"entries": len(catalog), "failed": failed}


def _tau_counterexamples(ctx: ClaimContext) -> Outcome:
    verdict = ternary_sqf_test(TAU)
    minimal: list[str] = [str(word) for word in verdict.minimal_counterexamples()]
    return not verdict.passed and minimal == ["010", "02120"], {
        "minimal": minimal,
        "first": repr(verdict.counterexample),
    }


def _tau_cond1(ctx: ClaimContext) -> Outcome:
    # 02120 never occurs in vtm, so the factor test cannot see tau's second counterexample.
    return vtm_cond1(TAU).passed, {"factors": len(vtm_factors(5))}


def _cases(ctx: ClaimContext) -> Outcome:
    catalog: Catalog = ctx.catalog()
    failed: list[int] = [p for p in CASE_MODULI if not verify_case(p, catalog).passed]
    return not failed, {"failed": failed}


def _case_positional(ctx: ClaimContext) -> Outcome:
    catalog: Catalog = ctx.catalog()
    rng = np.random.default_rng(ctx.seed)
    failed: list[str] = []

    for p in CASE_MODULI:
        h = catalog.case(p)
        for _ in range(100):
            x: Word = _random_squarefree(rng, 20)
            if any(h(x).letters[::p]):
                failed.append(f"p={p} x={x}")
                break

    return not failed, {"failed": failed}


def _progression_words(ctx: ClaimContext) -> Outcome:
    catalog: Catalog = ctx.catalog()
    failed: list[int] = []
    checked: list[int] = []

    for p in range(6, 61):
        if progression_case(p) is None and p % 4:
            continue

        word: Word = progression_word(p, 10_000, catalog)
        checked.append(p)
        if len(word) != 10_000 or any(subsample(word, p).letters) or not is_squarefree(word):
            failed.append(p)

    return not failed, {"moduli": checked, "failed": failed}


def _pair_3_11(ctx: ClaimContext) -> Outcome:
    return _report(verify_pair_3_11(ctx.catalog()))


def _pair_3_11_images(ctx: ClaimContext) -> Outcome:
    h = ctx.catalog().morphism("pq_3_11")
    image: Word = h(vtm().prefix(10_000 // 66 + 1))[:10_000]
    lengths: dict[int, bool] = {p: is_squarefree(subsample(image, p)) for p in (1, 3, 11)}
    return all(lengths.values()), {"squarefree": lengths}


def _pair_5_6(ctx: ClaimContext) -> Outcome:
    return _report(verify_pair_5_6(ctx.catalog()))


def _constant(p: int, ctx: ClaimContext) -> tuple[Outcome, list[Word]]:
    outcome = exhaustive_max(Constraint.constant(p), 200, workers=ctx.workers)
    details: dict[str, Any] = {
        "kind": outcome.kind,
        "max_length": outcome.max_length,
        "maximal_words": [str(word) for word in outcome.maximal_words],
        "nodes": outcome.nodes,
    }
    return (outcome.kind == "exhausted", details), outcome.maximal_words


def _constant_p2(ctx: ClaimContext) -> Outcome:
    (ok, details), _ = _constant(2, ctx)
    oracle: int = brute_force_max(Constraint.constant(2), 10)
    details["oracle"] = oracle
    return ok and details["max_length"] == oracle == P2_MAX, details


def _constant_p3(ctx: ClaimContext) -> Outcome:
    (ok, details), _ = _constant(3, ctx)
    return ok and details["max_length"] == P3_MAX, details


def _constant_p5(ctx: ClaimContext) -> Outcome:
    (ok, details), words = _constant(5, ctx)
    canonical: list[str] = [str(word) for word in canonical_maximal_words(words)]
    details["canonical"] = canonical
    return ok and details["max_length"] == 40 and tuple(canonical) == P5_MAXIMAL, details


def _constant_p5_blocks(ctx: ClaimContext) -> Outcome:
    words: list[Word] = [Word.from_digits(word) for word in P5_MAXIMAL]
    blocks: dict[str, list[str]] = {str(word): block_structure(word, 5) for word in words}
    outside: dict[str, list[str]] = {
        word: [block for block in split[:-1] if block not in P5_BLOCKS] for word, split in blocks.items()
    }
    return None, {"blocks": blocks, "outside_expected_blocks": outside}


def _mod4_alternating(ctx: ClaimContext) -> Outcome:
    outcome = exhaustive_max(Constraint(progressions=[(4, 0, "01")]), 500, workers=ctx.workers)
    details: dict[str, Any] = {
        "kind": outcome.kind,
        "max_length": outcome.max_length,
        "maximal_words": [str(word) for word in outcome.maximal_words],
    }
    return outcome.kind == "exhausted" and outcome.max_length == MOD4_ALTERNATING_MAX, details


def _vtm_ones(ctx: ClaimContext) -> Outcome:
    miss: int | None = letter_progression(vtm(), 1, 4, 1, 2**20)
    return miss is None, {"first_miss": miss, "bound": 2**20}


def _tau3(ctx: ClaimContext) -> Outcome:
    listed = ctx.catalog().morphism("tau3")
    return TAU3.images == listed.images, {"images": [str(image) for image in TAU3.images]}


def _dfao(ctx: ClaimContext) -> Outcome:
    automaton = kernel_synthesize(vtm())
    agrees: bool = dfao_equiv_prefix(automaton, vtm(), 2**20)
    values: dict[int, int] = {n: automaton.eval(n) for n in (0, 2, 4)}
    return agrees and values == {0: 0, 2: 2, 4: 2}, {"states": automaton.state_count, "values": values}


def _same_first_last(ctx: ClaimContext) -> Outcome:
    report = same_first_last_bounded(vtm(), 4096, 10**6)
    missing: list[int] = [k for k, witness in report.items() if witness is None]
    return not missing, {"missing": missing, "largest_witness": max(w or 0 for w in report.values())}


def _residues(ctx: ClaimContext) -> Outcome:
    missing: list[str] = []
    for size in range(1, 5):
        for u in vtm_factors(size):
            for k in range(3, 16, 2):
                coverage = residue_coverage(vtm(), u, k, 10**6)
                if None in coverage.values():
                    missing.append(f"{u} mod {k}")

    return not missing, {"missing": missing}


def _doubling(ctx: ClaimContext) -> Outcome:
    violation: int | None = doubling_check(vtm(), 2**19)
    powers: list[int] = power_of_two_check(vtm(), 18)
    return violation is None and not powers, {"violation": violation, "failing_powers": powers}


def _aligned(ctx: ClaimContext) -> Outcome:
    report = aligned_witnesses(vtm(), range(3, 16, 2), 10**6)
    return None not in report.values(), {"witnesses": report}


def _prime_uniform(ctx: ClaimContext) -> Outcome:
    return _report(verify_theorem10(ctx.catalog()))


def _n70(ctx: ClaimContext) -> Outcome:
    return _report(verify_entry("n70", ctx.catalog()))


def _lcp_bound(ctx: ClaimContext) -> Outcome:
    return lcp_bound_check(), {}


def _lcp_relaxed(ctx: ClaimContext) -> Outcome:
    solutions = lcp_flank_solutions(5, 7, 2, limit=1)
    return None, {"example": [str(solutions[0][0]), str(solutions[0][1])] if solutions else None}


def _lcp_search(ctx: ClaimContext) -> Outcome:
    found = lcp_search(30, 24, 10**8)
    return None, {"witness": [str(image) for image in found.images] if found else None}


def _multi(ctx: ClaimContext) -> Outcome:
    return _report(verify_entry("multi26", ctx.catalog()))


def _base_word(ctx: ClaimContext) -> Outcome:
    word: Word = base_word(10**5)
    state = EmbedState(ctx.catalog().multi("multi26"), 10**5 // 26 + 1)
    ends = np.asarray([state.middle(k)[1] for k in range(len(state.choices))])
    # A window of 30 letters holds a full middle block when consecutive blocks start at most 26 apart.
    gaps_ok: bool = bool((np.diff(ends) <= 26).all()) and int(ends[0]) < 30
    return is_squarefree(word) and gaps_ok, {"length": len(word)}


def _embedding_trials(ctx: ClaimContext) -> Outcome:
    rng = np.random.default_rng(ctx.seed)
    failures: list[int] = []

    for trial in range(100):
        positions: list[int] = random_positions(rng, 200, 30, 60, start=int(rng.integers(0, 30)))
        v: Word = Word(rng.integers(0, 3, size=200).astype(np.uint8).tobytes())
        word: Word = force_subsequence(positions, v, positions[-1] + 30)
        if not verify_embedding(word, positions, v):
            failures.append(trial)

    return not failures, {"trials": 100, "failed": failures, "seed": ctx.seed}


def _probe(p: int, q: int, budget: int, ctx: ClaimContext) -> Outcome:
    outcome = pq_probe(p, q, budget)
    return None, {"kind": outcome.kind, "deepest": outcome.plateau(), "nodes": outcome.nodes, "profile": outcome.profile}


def _probe_5_6(ctx: ClaimContext) -> Outcome:
    return _probe(5, 6, 10**6, ctx)


def _probe_3_11(ctx: ClaimContext) -> Outcome:
    return _probe(3, 11, 10**6, ctx)


def _probe_5_8(ctx: ClaimContext) -> Outcome:
    return _probe(5, 8, 10**8, ctx)


def _random_squarefree(rng: np.random.Generator, length: int) -> Word:
    """A random squarefree ternary word, grown letter by letter with restarts on dead ends."""
    while True:
        letters: bytearray = bytearray()
        while len(letters) < length:
            options: list[int] = [
                letter for letter in range(3) if is_squarefree(bytes(letters) + bytes((letter,)))
            ]
            if not options:
                break
            letters.append(options[int(rng.integers(0, len(options)))])

        if len(letters) == length:
            return Word(bytes(letters))


CLAIMS: tuple[Claim, ...] = (
    Claim("catalog.checksums", "transcribed assets", "fast", _checksums),
    Claim("catalog.entries", "transcribed assets", "fast", _entries),
    Claim("constant.p2", "constant subsample impossibility", "fast", _constant_p2),
    Claim("constant.p3", "constant subsample impossibility", "fast", _constant_p3),
    Claim("constant.p5", "constant subsample impossibility", "fast", _constant_p5),
    Claim("constant.p5_blocks", "constant subsample impossibility", "fast", _constant_p5_blocks),
    Claim("automatic.aligned", "vtm subsamples contain squares", "fast", _aligned),
    Claim("automatic.dfao", "vtm is 2-automatic", "fast", _dfao),
    Claim("automatic.doubling", "vtm subsamples contain squares", "fast", _doubling),
    Claim("automatic.residues", "vtm subsamples contain squares", "fast", _residues),
    Claim("automatic.same_first_last", "vtm subsamples contain squares", "fast", _same_first_last),
    Claim("cases.positional", "uniform case morphisms", "fast", _case_positional),
    Claim("cases.progression_words", "uniform case morphisms", "fast", _progression_words),
    Claim("cases.uniform", "uniform case morphisms", "fast", _cases),
    Claim("embed.base_word", "forcing a subsequence", "fast", _base_word),
    Claim("embed.multi_sqf", "forcing a subsequence", "fast", _multi),
    Claim("embed.trials", "forcing a subsequence", "fast", _embedding_trials),
    Claim("lcp.bound", "common prefix bound", "all", _lcp_bound),
    Claim("lcp.n70", "common prefix bound", "fast", _n70),
    Claim("lcp.relaxed", "common prefix bound", "all", _lcp_relaxed),
    Claim("lcp.search_30_24", "common prefix bound", "all", _lcp_search),
    Claim("mod4.alternating", "progressions modulo 4", "fast", _mod4_alternating),
    Claim("mod4.vtm_ones", "progressions modulo 4", "fast", _vtm_ones),
    Claim("mod4.tau3", "progressions modulo 4", "fast", _tau3),
    Claim("pair.3_11", "two squarefree subsamples", "fast", _pair_3_11),
    Claim("pair.3_11_images", "two squarefree subsamples", "fast", _pair_3_11_images),
    Claim("pair.5_6", "two squarefree subsamples", "fast", _pair_5_6),
    Claim("pair.probe_3_11", "two squarefree subsamples", "all", _probe_3_11),
    Claim("pair.probe_5_6", "two squarefree subsamples", "all", _probe_5_6),
    Claim("pair.probe_5_8", "two squarefree subsamples", "all", _probe_5_8),
    Claim("prime_uniform.no_zero_progression", "prime-length uniform morphisms", "fast", _prime_uniform),
    Claim("sqf.tau_counterexamples", "squarefree morphism tests", "fast", _tau_counterexamples),
    Claim("sqf.tau_vtm_factors", "squarefree morphism tests", "fast", _tau_cond1),
)


def claims_for(scope: Scope) -> list[Claim]:
    return sorted((claim for claim in CLAIMS if scope == "all" or claim.scope == "fast"), key=lambda claim: claim.id)


def run_claim(claim_id: str, ctx: ClaimContext) -> ClaimRecord:
    claim: Claim = next(claim for claim in CLAIMS if claim.id == claim_id)
    started: float = time.perf_counter()

    try:
        passed, details = claim.run(ctx)
    except Exception as e:
        logger.exception("Claim %s raised.", claim.id)
        passed, details = False, {"error": f"{type(e).__name__}: {e}"}

    status: ClaimStatus = "observational" if passed is None else "pass" if passed else "fail"
    elapsed: float = round(time.perf_counter() - started, 3)

    claim_logger.info("%s (%s) in %.2fs", claim.id, claim.locus, elapsed, extra={"status": status})
    return {"claim": claim.id, "locus": claim.locus, "status": status, "details": details, "wall_time": elapsed}


def _run_packed(args: tuple[str, ClaimContext]) -> ClaimRecord:
    return run_claim(*args)


def verify_paper(scope: Scope = "fast", *, seed: int = 0, workers: int | None = None, asset_dir: pathlib.Path | None = None) -> list[ClaimRecord]:
    """Run every claim in ``scope``; records are ordered by claim id whatever the completion order."""
    ids: list[str] = [claim.id for claim in claims_for(scope)]

    if workers and workers > 1:
        # Claims run in parallel, so each one searches serially.
        ctx: ClaimContext = ClaimContext(seed, asset_dir, None)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_run_packed, [(claim_id, ctx) for claim_id in ids]))

    ctx = ClaimContext(seed, asset_dir, workers)
    return [run_claim(claim_id, ctx) for claim_id in ids]


def write_report(records: Iterable[ClaimRecord], fp: IO[str]) -> None:
    for record in records:
        fp.write(json.dumps(record, default=str) + "\n")


def summary(records: Iterable[ClaimRecord]) -> str:
    records = list(records)
    counts: dict[str, int] = {status: 0 for status in ("pass", "fail", "observational")}
    for record in records:
        counts[record["status"]] += 1

    lines: list[str] = [f"{len(records)} claims: {counts['pass']} pass, {counts['fail']} fail, {counts['observational']} observational"]
    lines.extend(f"  FAIL {record['claim']}: {record['details']}" for record in records if record["status"] == "fail")
    return "\n".join(lines)
