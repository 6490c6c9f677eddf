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
import logging
import os
import pathlib


__all__ = ("Settings", "get_settings")


logger: logging.Logger = logging.getLogger(__name__)

_PACKAGE_ASSETS: pathlib.Path = pathlib.Path(__file__).parent / "assets"


def _env_int(name: str, default: int) -> int:
    raw: str | None = os.environ.get(name)
    if raw is None or not raw.strip():
        return default

    try:
        return int(raw.replace("_", ""))
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer. Using %d.", name, raw, default)
        return default


class Settings:
    __slots__ = (
        "asset_dir",
        "enumeration_cap",
        "kernel_state_cap",
        "factor_prefix",
        "factor_check_prefix",
        "compare_len",
        "validate_len",
    )

    def __init__(
        self,
        *,
        asset_dir: pathlib.Path | None = None,
        enumeration_cap: int = 3**22,
        kernel_state_cap: int = 64,
        factor_prefix: int = 10_000,
        factor_check_prefix: int = 1_000_000,
        compare_len: int = 2**16,
        validate_len: int = 2**20,
    ) -> None:
        self.asset_dir: pathlib.Path = asset_dir or _PACKAGE_ASSETS
        self.enumeration_cap: int = enumeration_cap
        self.kernel_state_cap: int = kernel_state_cap
        self.factor_prefix: int = factor_prefix
        self.factor_check_prefix: int = factor_check_prefix
        self.compare_len: int = compare_len
        self.validate_len: int = validate_len

    @classmethod
    def from_env(cls) -> Settings:
        asset_dir: str | None = os.environ.get("SQFW_ASSET_DIR")

        return cls(
            asset_dir=pathlib.Path(asset_dir) if asset_dir else None,
            enumeration_cap=_env_int("SQFW_ENUMERATION_CAP", 3**22),
            kernel_state_cap=_env_int("SQFW_KERNEL_STATE_CAP", 64),
            factor_prefix=_env_int("SQFW_FACTOR_PREFIX", 10_000),
            factor_check_prefix=_env_int("SQFW_FACTOR_CHECK_PREFIX", 1_000_000),
            compare_len=_env_int("SQFW_COMPARE_LEN", 2**16),
            validate_len=_env_int("SQFW_VALIDATE_LEN", 2**20),
        )

    def __repr__(self) -> str:
        return f"Settings: asset_dir={str(self.asset_dir)!r}, compare_len={self.compare_len}"


@functools.cache
def get_settings() -> Settings:
    return Settings.from_env()
