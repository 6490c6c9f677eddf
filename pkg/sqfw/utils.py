"""
The MIT License (MIT)

Copyright (c) 2015-present Rapptz
Copyright (c) 2024 PythonistaGuild

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS
OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
DEALINGS IN THE SOFTWARE.
"""

from __future__ import annotations

import logging
import os
import pathlib
import sys
from typing import Any


__all__ = ("setup_logging", "ColourFormatter", "claim_logger")


claim_logger: logging.Logger = logging.getLogger("Claim")

RESET: str = "\x1b[0m"

LEVEL_COLOURS: dict[int, str] = {
    logging.DEBUG: "\x1b[40;1m",
    logging.INFO: "\x1b[34;1m",
    logging.WARNING: "\x1b[33;1m",
    logging.ERROR: "\x1b[31m",
    logging.CRITICAL: "\x1b[41m",
}

STATUS_COLOURS: dict[str, str] = {"pass": "\x1b[32m", "fail": "\x1b[31m", "observational": "\x1b[33m"}


def is_docker() -> bool:
    cgroup: pathlib.Path = pathlib.Path("/proc/self/cgroup")
    return pathlib.Path("/.dockerenv").exists() or (cgroup.is_file() and "docker" in cgroup.read_text())


def stream_supports_colour(stream: Any) -> bool:
    if "NO_COLOR" in os.environ:
        return False

    tty: bool = hasattr(stream, "isatty") and stream.isatty()
    if sys.platform == "win32":
        return tty and ("ANSICON" in os.environ or "WT_SESSION" in os.environ)

    # containers often run without a tty
    return tty or is_docker()


class ColourFormatter(logging.Formatter):
    """Level-coloured records; claim records also get their status appended."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        handler: logging.StreamHandler[Any] = kwargs.pop("handler", logging.StreamHandler())
        super().__init__(*args, **kwargs)

        self._colour: bool = stream_supports_colour(handler.stream)
        self._formats: dict[int, logging.Formatter] = {
            level: logging.Formatter(f"\x1b[30;1m%(asctime)s{RESET} {colour}%(levelname)-8s{RESET} %(name)s %(message)s")
            for level, colour in LEVEL_COLOURS.items()
        }
        self._plain: logging.Formatter = logging.Formatter("%(asctime)s %(levelname)-8s %(name)s %(message)s")

    def format(self, record: logging.LogRecord) -> str:
        formatter: logging.Formatter = self._formats.get(record.levelno, self._plain) if self._colour else self._plain
        if record.exc_info and self._colour:
            record.exc_text = f"\x1b[31m{formatter.formatException(record.exc_info)}{RESET}"

        output: str = formatter.format(record)
        record.exc_text = None

        status: str | None = record.__dict__.get("status")
        if record.name != claim_logger.name or not status:
            return output

        colour: str = STATUS_COLOURS.get(status, "") if self._colour else ""
        return f"{output}{RESET} {colour}{status.upper()}{RESET}"


def setup_logging(
    *,
    handler: logging.Handler | None = None,
    formatter: logging.Formatter | None = None,
    level: int | None = None,
    root: bool = True,
) -> None:
    if level is None:
        level = logging.INFO

    if handler is None:
        handler = logging.StreamHandler()

    if formatter is None:
        if isinstance(handler, logging.StreamHandler) and stream_supports_colour(handler.stream):  # type: ignore
            formatter = ColourFormatter(handler=handler)
        else:
            dt_fmt = "%Y-%m-%d %H:%M:%S"
            formatter = logging.Formatter("[{asctime}] [{levelname:<8}] {name}: {message}", dt_fmt, style="{")

    handler.setFormatter(formatter)

    if root:
        loggers: list[logging.Logger] = [logging.getLogger()]
    else:
        library, _, _ = __name__.partition(".")
        loggers = [logging.getLogger(library), claim_logger]

    for logger in loggers:
        logger.setLevel(level)
        logger.addHandler(handler)
