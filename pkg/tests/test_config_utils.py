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
import logging
import pathlib
import sys

import pytest

from sqfw.config import Settings, get_settings
from sqfw.errors import ParseError
from sqfw.utils import ColourFormatter, claim_logger, setup_logging, stream_supports_colour


def test_defaults(fresh_settings: None, monkeypatch: pytest.MonkeyPatch) -> None:
    for name in ("SQFW_ASSET_DIR", "SQFW_COMPARE_LEN"):
        monkeypatch.delenv(name, raising=False)

    settings: Settings = get_settings()
    assert settings.asset_dir.name == "assets"
    assert (settings.asset_dir / "catalog.toml").is_file()
    assert settings.compare_len == 2**16
    assert get_settings() is settings


def test_environment_overrides(
    fresh_settings: None, monkeypatch: pytest.MonkeyPatch, tmp_path: pathlib.Path, caplog: pytest.LogCaptureFixture
) -> None:
    monkeypatch.setenv("SQFW_ASSET_DIR", str(tmp_path))
    monkeypatch.setenv("SQFW_COMPARE_LEN", "1_024")
    monkeypatch.setenv("SQFW_VALIDATE_LEN", "lots")

    with caplog.at_level(logging.WARNING, logger="sqfw.config"):
        settings: Settings = get_settings()

    assert settings.asset_dir == tmp_path
    assert settings.compare_len == 1024
    assert settings.validate_len == 2**20
    assert "SQFW_VALIDATE_LEN" in caplog.text


def test_parse_error_location() -> None:
    assert str(ParseError("bad", source="f.txt", line=3)) == "f.txt:3: bad"
    assert str(ParseError("bad", source="f.txt")) == "f.txt: bad"
    assert str(ParseError("bad")) == "bad"


def test_setup_logging_targets_the_package(monkeypatch: pytest.MonkeyPatch) -> None:
    stream = io.StringIO()
    handler = logging.StreamHandler(stream)
    package = logging.getLogger("sqfw")

    monkeypatch.setattr(package, "handlers", [])
    monkeypatch.setattr(claim_logger, "handlers", [])
    setup_logging(handler=handler, level=logging.DEBUG, root=False)

    assert package.handlers == [handler]
    assert claim_logger.handlers == [handler]
    assert handler not in logging.getLogger().handlers

    claim_logger.info("sqf.example", extra={"status": "pass"})
    assert "sqf.example" in stream.getvalue()

    package.setLevel(logging.NOTSET)
    claim_logger.setLevel(logging.NOTSET)


def test_colour_formatter_marks_claim_status() -> None:
    formatter = ColourFormatter(handler=logging.StreamHandler(io.StringIO()))
    record = logging.LogRecord("Claim", logging.INFO, __file__, 1, "sqf.example", None, None)
    record.status = "fail"

    assert formatter.format(record).endswith("FAIL\x1b[0m")

    plain = logging.LogRecord("sqfw.words", logging.INFO, __file__, 1, "hello", None, None)
    assert formatter.format(plain).endswith("hello")


class Terminal(io.StringIO):
    def isatty(self) -> bool:
        return True


def test_colour_follows_the_terminal(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(sys, "platform", "linux")
    monkeypatch.setenv("NO_COLOR", "1")
    assert not stream_supports_colour(Terminal())

    monkeypatch.delenv("NO_COLOR")
    assert stream_supports_colour(Terminal())

    formatter = ColourFormatter(handler=logging.StreamHandler(Terminal()))
    record = logging.LogRecord("Claim", logging.WARNING, __file__, 1, "sqf.example", None, None)
    record.status = "observational"

    output: str = formatter.format(record)
    assert "\x1b[33;1mWARNING" in output
    assert output.endswith("\x1b[33mOBSERVATIONAL\x1b[0m")
