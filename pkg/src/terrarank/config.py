"""Application configuration: JSON file plus environment overrides.

Every problem in a config is reported in one shot rather than one at a
time. Relative paths (and file:// URLs) resolve against the config file's
directory, so a checked-in config works from any working directory.
"""

from __future__ import annotations

import json
import math
import os
import pathlib
from dataclasses import dataclass, field, fields

from .errors import ConfigError
from .weighting import GRADE_MODES

ENV_PREFIX = "TERRARANK_"

_PATH_KEYS = ("graph_path", "dem_path", "cache_path")
_URL_KEYS = ("elevation_url", "directions_url")


@dataclass(frozen=True)
class AppConfig:
    """Validated runtime settings; api_key never appears in repr."""

    graph_path: str | None = None
    dem_path: str | None = None
    elevation_url: str | None = None
    directions_url: str | None = None
    api_key: str | None = field(default=None, repr=False)
    alpha: float = 10.0
    grade_mode: str = "absolute"
    resample_interval_m: float = 30.0
    k: int = 3
    listen_addr: str = "127.0.0.1:8787"
    cache_path: str | None = None
    cors_origin: str | None = None

    @property
    def host(self) -> str:
        return self.listen_addr.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_addr.rsplit(":", 1)[1])


_STRING_KEYS = {
    "graph_path", "dem_path", "elevation_url", "directions_url", "api_key",
    "grade_mode", "listen_addr", "cache_path", "cors_origin",
}
_FLOAT_KEYS = {"alpha", "resample_interval_m"}
_INT_KEYS = {"k"}
_ALL_KEYS = _STRING_KEYS | _FLOAT_KEYS | _INT_KEYS


def _coerce(key: str, value: object, problems: list[str]) -> object:
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            problems.append(f"{key}: expected string, got {type(value).__name__}")
            return None
        return value
    if key in _FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{key}: expected number, got {type(value).__name__}")
            return None
        return float(value)
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{key}: expected integer, got {type(value).__name__}")
        return None
    return value


def _coerce_env(key: str, raw: str, problems: list[str]) -> object:
    if key in _STRING_KEYS:
        return raw
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            problems.append(f"{key}: expected number, got {raw!r}")
            return None
    try:
        return int(raw)
    except ValueError:
        problems.append(f"{key}: expected integer, got {raw!r}")
        return None


def _resolve_paths(values: dict, base_dir: pathlib.Path) -> None:
    for key in _PATH_KEYS:
        v = values.get(key)
        if v is not None and not pathlib.Path(v).is_absolute():
            values[key] = str((base_dir / v).resolve())
    for key in _URL_KEYS:
        v = values.get(key)
        if v is not None and v.startswith("file://"):
            raw = v[len("file://"):]
            if not pathlib.Path(raw).is_absolute():
                values[key] = "file://" + str((base_dir / raw).resolve())


def _validate(values: dict, problems: list[str]) -> None:
    alpha = values.get("alpha")
    if alpha is not None and not (math.isfinite(alpha) and alpha >= 0):
        problems.append(f"alpha: must be finite and >= 0, got {alpha}")
    interval = values.get("resample_interval_m")
    if interval is not None and not (math.isfinite(interval) and interval > 0):
        problems.append(f"resample_interval_m: must be > 0, got {interval}")
    k = values.get("k")
    if k is not None and k < 1:
        problems.append(f"k: must be >= 1, got {k}")
    grade_mode = values.get("grade_mode")
    if grade_mode is not None and grade_mode not in GRADE_MODES:
        problems.append(f"grade_mode: expected one of {GRADE_MODES}, got {grade_mode!r}")
    listen = values.get("listen_addr")
    if listen is not None:
        host, _, port = listen.rpartition(":")
        if not host or not port.isdigit() or not 1 <= int(port) <= 65535:
            problems.append(f"listen_addr: expected host:port, got {listen!r}")
    if values.get("dem_path") is None and values.get("elevation_url") is None:
        problems.append(
            "no elevation source: set dem_path or elevation_url"
        )
    if values.get("graph_path") is None and values.get("directions_url") is None:
        problems.append(
            "no route source: set graph_path or directions_url"
        )


def load_config(
    text: str,
    env: dict[str, str] | None = None,
    base_dir: str | os.PathLike | None = None,
) -> AppConfig:
    """Parse config JSON, apply TERRARANK_* overrides, validate everything.

    All problems are collected and raised together as one ConfigError.
    """
    problems: list[str] = []
    values: dict[str, object] = {}
    try:
        body = json.loads(text) if text.strip() else {}
    except ValueError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from None
    if not isinstance(body, dict):
        raise ConfigError(["config must be a JSON object"])
    for key, value in body.items():
        if key not in _ALL_KEYS:
            problems.append(f"unknown key {key!r}")
            continue
        if value is None:
            continue
        coerced = _coerce(key, value, problems)
        if coerced is not None:
            values[key] = coerced
    env = dict(env) if env is not None else dict(os.environ)
    for env_key, raw in sorted(env.items()):
        if not env_key.startswith(ENV_PREFIX):
            continue
        key = env_key[len(ENV_PREFIX):].lower()
        if key not in _ALL_KEYS:
            problems.append(f"unknown environment override {env_key}")
            continue
        if raw == "":
            continue
        coerced = _coerce_env(key, raw, problems)
        if coerced is not None:
            values[key] = coerced
    defaults = {f.name: f.default for f in fields(AppConfig)}
    merged = {**defaults, **values}
    _resolve_paths(merged, pathlib.Path(base_dir) if base_dir is not None else pathlib.Path.cwd())
    _validate(merged, problems)
    if problems:
        raise ConfigError(problems)
    return AppConfig(**merged)


def load_config_file(path: str, env: dict[str, str] | None = None) -> AppConfig:
    """Load a config from disk; relative paths resolve against its directory."""
    p = pathlib.Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {type(exc).__name__}"]) from None
    return load_config(text, env=env, base_dir=p.parent)


def config_to_dict(config: AppConfig) -> dict:
    """Set fields as a JSON-ready dict; parsing it back gives an equal config."""
    return {
        f.name: getattr(config, f.name)
        for f in fields(AppConfig)
        if getattr(config, f.name) is not None
    }
