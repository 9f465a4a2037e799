"""Run configuration and the flat key=value config-file format.

Config files are one ``key = value`` per line, ``#`` comments and blank
lines allowed. Values are coerced by the target field's type (int, float,
bool with true/false, plain strings with optional quotes). Command-line
flags override file values.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, TypeVar, get_type_hints

UNION = "union"
PER_PAIR = "per_pair"


class ConfigError(ValueError):
    """Bad config file or invalid configuration value."""


@dataclass(frozen=True)
class RunConfig:
    keep_threshold: float = 0.70
    css_depth: int = 3
    follower_semantics: str = UNION
    m1_compose_follower_filter: bool = False
    m2b_strict: bool = True
    out_dir: str = ""
    log_level: str = "WARNING"

    def validate(self) -> None:
        if not 0.0 < self.keep_threshold <= 1.0:
            raise ConfigError("keep_threshold must be in (0, 1]")
        if self.css_depth < 1:
            raise ConfigError("css_depth must be >= 1")
        if self.follower_semantics not in (UNION, PER_PAIR):
            raise ConfigError(
                f"follower_semantics must be '{UNION}' or '{PER_PAIR}',"
                f" got {self.follower_semantics!r}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_T = TypeVar("_T")


def _coerce(text: str, typ: type) -> Any:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        text = text[1:-1]
    if typ is bool:
        low = text.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigError(f"expected a boolean, got {text!r}")
    try:
        return typ(text)
    except ValueError as exc:
        raise ConfigError(f"expected {typ.__name__}, got {text!r}") from exc


def parse_kv_file(path: str | Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            pairs[key.strip()] = value.strip()
    return pairs


def load_config_file(path: str | Path, cls: type[_T]) -> _T:
    """Instantiate a config dataclass from a key=value file."""
    hints = get_type_hints(cls)
    known = {f.name: hints[f.name] for f in fields(cls)}  # type: ignore[arg-type]
    values: dict[str, Any] = {}
    for key, raw in parse_kv_file(path).items():
        if key not in known:
            raise ConfigError(f"{path}: unknown config key {key!r}")
        values[key] = _coerce(raw, known[key])
    return cls(**values)


def with_overrides(config: _T, **overrides: Any) -> _T:
    """Apply non-None overrides (command-line flags win over file values)."""
    real = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **real)  # type: ignore[type-var]
