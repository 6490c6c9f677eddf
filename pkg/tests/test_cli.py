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
import pathlib

import pytest

from sqfw.cli import dispatch
from sqfw.morphisms import vtm


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    code: int = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_word(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "check-word", "0102012")
    assert code == 0
    assert out.strip() == "squarefree"

    code, out, _ = run(capsys, "check-word", "0120121")
    assert code == 1
    assert "square at 0 with period 3: 012012" in out


def test_check_morphism(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "check-morphism", "--name", "tau")
    assert code == 1
    assert out.startswith("ternary_sqf_test(tau): fail")

    code, _, _ = run(capsys, "check-morphism", "--name", "case_p7", "--mode", "uniform")
    assert code == 0

    code, _, _ = run(capsys, "check-morphism", "--file", "multi26.morph", "--mode", "multi")
    assert code == 0


def test_check_morphism_vtm_mode(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path) -> None:
    path: pathlib.Path = tmp_path / "h11_hat.morph"
    path.write_text("0 -> 201021012021201210\n1 -> 201021201210\n2 -> 120210\n")

    code, out, _ = run(
        capsys, "check-morphism", "--file", str(path), "--mode", "vtm", "--witness", "1210", "1210", "20210"
    )
    assert code == 0, out
    assert "vtm_cond3(h11_hat): pass" in out


def test_gen_and_subsample(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "gen", "--name", "tau", "--len", "12")
    assert (code, out.strip()) == (0, "012021012102")

    code, out, _ = run(capsys, "subsample", "vtm", "--p", "4", "--offset", "1", "--len", "10")
    assert (code, out.strip()) == (0, "1" * 10)

    code, out, _ = run(capsys, "subsample", "0120210121", "--p", "3")
    assert (code, out.strip()) == (0, "0001")


def test_search(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path) -> None:
    code, out, _ = run(capsys, "search", "--constant", "2", "--exhaustive", "--cap", "30")
    assert code == 0
    assert out.splitlines()[0].startswith("exhausted max_length=7")
    assert "0102010" in out.splitlines()

    constraint: pathlib.Path = tmp_path / "c.txt"
    constraint.write_text("sqfmod 3\n")
    code, out, _ = run(capsys, "search", "--constraint", str(constraint), "--fix", "0", "1", "--target", "50")
    assert code == 0
    assert out.splitlines()[1].startswith("1")


def test_embed(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "embed", "--positions", "arith:0,31", "--v", "vtm", "--len", "1000")
    assert code == 0

    word, log = out.splitlines()
    assert len(word) == 1000
    assert [int(word[p]) for p in range(0, 1000, 31)] == list(vtm().prefix(len(range(0, 1000, 31))).letters)
    assert set(json.loads(log)) == {"rotation", "swaps"}


def test_lcp_bound(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "lcp")
    assert code == 0
    assert "no (p, s)" in out


def test_dfao(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path) -> None:
    code, out, _ = run(capsys, "dfao", "--stream", "01", "--compare-len", "64", "--eval", "3", "--validate", "500")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("states ")
    assert lines[-2:] == ["1", "agrees below 500: True"]

    path: pathlib.Path = tmp_path / "a.dfao"
    path.write_text("\n".join(lines[:-2]) + "\n")
    code, out, _ = run(capsys, "dfao", "--file", str(path), "--stream", "01", "--eval", "4")
    assert (code, out.strip()) == (0, "0")


def test_usage_errors(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path) -> None:
    code, _, err = run(capsys, "frobnicate")
    assert code == 2
    assert "invalid choice" in err

    bad: pathlib.Path = tmp_path / "bad.morph"
    bad.write_text("0 -> 01x\n")
    code, _, err = run(capsys, "check-morphism", "--file", str(bad))
    assert code == 2
    assert err.startswith("sqfw: error: bad.morph:1:")

    code, _, err = run(capsys, "check-word", "0123")
    assert code == 2


def test_help_exits_cleanly(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "verify-paper" in out


def test_bad_arguments_exit_with_usage_code(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path) -> None:
    code, _, err = run(capsys, "subsample", "012", "--p", "0")
    assert code == 2
    assert err.startswith("sqfw: error: subsample needs p >= 1")

    code, _, _ = run(capsys, "subsample", "vtm", "--p", "2", "--offset", "-1", "--len", "5")
    assert code == 2

    code, _, err = run(capsys, "embed", "--positions", "arith:0", "--v", "01", "--len", "100")
    assert code == 2
    assert "arith:P0,STEP" in err

    positions: pathlib.Path = tmp_path / "positions.txt"
    positions.write_text("0 thirty\n")
    code, _, _ = run(capsys, "embed", "--positions", str(positions), "--v", "01", "--len", "100")
    assert code == 2

    positions.write_text("0 30\n")
    code, _, err = run(capsys, "embed", "--positions", str(positions), "--v", "01", "--len", "50")
    assert code == 2
    assert "past the last position 30" in err
