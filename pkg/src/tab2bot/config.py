"""Configuration types for every pipeline stage, plus the key-value config
file format shared by ``TAB2BOT_CONFIG``, CLI overrides, and the bundle's
``bot.config``.

The file format is one ``key = value`` per line; ``#`` starts a comment.
List values (date formats, null markers) are comma-separated.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigFormatError
from .values import DEFAULT_DATE_FORMATS

DEFAULT_NULL_MARKERS = ("", "NA", "N/A", "null")


@dataclass(frozen=True)
class ParseConfig:
    """How to read a tabular byte stream."""

    delimiter: str = ","
    quote: str = '"'
    has_header: bool = True
    max_rows: int | None = None

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1 or len(self.quote) != 1:
            raise ConfigFormatError("delimiter and quote must be single characters")
        if self.delimiter == self.quote:
            raise ConfigFormatError("delimiter and quote must differ")


@dataclass(frozen=True)
class InferenceConfig:
    """Knobs for column profiling and schema inference."""

    diversity_threshold: int = 10
    type_tolerance: float = 0.0
    date_formats: tuple[str, ...] = DEFAULT_DATE_FORMATS
    decimal_separator: str = "."
    null_markers: tuple[str, ...] = DEFAULT_NULL_MARKERS

    def __post_init__(self) -> None:
        if self.diversity_threshold < 1:
            raise ConfigFormatError("diversity_threshold must be >= 1")
        if not (0.0 <= self.type_tolerance < 0.5):
            raise ConfigFormatError("type_tolerance must be in [0, 0.5)")
        if len(self.decimal_separator) != 1:
            raise ConfigFormatError("decimal_separator must be a single character")

    def fingerprint(self) -> str:
        """Stable short hash used in schema provenance."""
        blob = "|".join(
            [
                str(self.diversity_threshold),
                repr(self.type_tolerance),
                ",".join(self.date_formats),
                self.decimal_separator,
                ",".join(self.null_markers),
            ]
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class HeuristicConfig:
    """Knobs for conversation-model generation."""

    max_conjunctive_filters: int = 2
    sentence_variants_per_intent: int = 3
    language: str = "en"

    def __post_init__(self) -> None:
        if self.max_conjunctive_filters not in (1, 2):
            raise ConfigFormatError("max_conjunctive_filters must be 1 or 2")
        if self.sentence_variants_per_intent < 0:
            raise ConfigFormatError("sentence_variants_per_intent must be >= 0")


@dataclass(frozen=True)
class RuntimeConfig:
    """Execution-time settings carried inside the bundle's bot.config."""

    match_threshold: float = 0.5
    enable_mutation: bool = False
    date_formats: tuple[str, ...] = DEFAULT_DATE_FORMATS
    decimal_separator: str = "."
    language: str = "en"

    def __post_init__(self) -> None:
        if not (0.0 < self.match_threshold <= 1.0):
            raise ConfigFormatError("match_threshold must be in (0, 1]")


# --- key-value file handling -------------------------------------------------


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a dict; raises on malformed lines."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigFormatError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigFormatError(f"line {lineno}: empty key")
        out[key] = value.strip()
    return out


def render_kv(pairs: dict[str, str]) -> str:
    """Canonical key-value rendering: sorted keys, one per line, trailing newline."""
    lines = [f"{key} = {pairs[key]}" for key in sorted(pairs)]
    return "\n".join(lines) + "\n"


def load_kv_file(path: Path) -> dict[str, str]:
    return parse_kv_text(path.read_text(encoding="utf-8"))


def _parse_bool(value: str) -> bool:
    lowered = value.strip().casefold()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigFormatError(f"not a boolean: {value!r}")


def _parse_list(value: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


def inference_config_from_kv(pairs: dict[str, str], base: InferenceConfig | None = None) -> InferenceConfig:
    """Apply recognized keys from a config dict over a base InferenceConfig."""
    cfg = base or InferenceConfig()
    updates: dict[str, object] = {}
    if "diversity_threshold" in pairs:
        updates["diversity_threshold"] = int(pairs["diversity_threshold"])
    if "type_tolerance" in pairs:
        updates["type_tolerance"] = float(pairs["type_tolerance"])
    if "date_formats" in pairs:
        updates["date_formats"] = _parse_list(pairs["date_formats"])
    if "decimal_separator" in pairs:
        updates["decimal_separator"] = pairs["decimal_separator"]
    if "null_markers" in pairs:
        # Empty string is always a null marker; the file lists the extras.
        updates["null_markers"] = ("",) + _parse_list(pairs["null_markers"])
    return replace(cfg, **updates) if updates else cfg


def heuristic_config_from_kv(pairs: dict[str, str], base: HeuristicConfig | None = None) -> HeuristicConfig:
    cfg = base or HeuristicConfig()
    updates: dict[str, object] = {}
    if "max_conjunctive_filters" in pairs:
        updates["max_conjunctive_filters"] = int(pairs["max_conjunctive_filters"])
    if "sentence_variants_per_intent" in pairs:
        updates["sentence_variants_per_intent"] = int(pairs["sentence_variants_per_intent"])
    if "language" in pairs:
        updates["language"] = pairs["language"]
    return replace(cfg, **updates) if updates else cfg


def runtime_config_from_kv(pairs: dict[str, str], base: RuntimeConfig | None = None) -> RuntimeConfig:
    cfg = base or RuntimeConfig()
    updates: dict[str, object] = {}
    if "match_threshold" in pairs:
        updates["match_threshold"] = float(pairs["match_threshold"])
    if "enable_mutation" in pairs:
        updates["enable_mutation"] = _parse_bool(pairs["enable_mutation"])
    if "date_formats" in pairs:
        updates["date_formats"] = _parse_list(pairs["date_formats"])
    if "decimal_separator" in pairs:
        updates["decimal_separator"] = pairs["decimal_separator"]
    if "language" in pairs:
        updates["language"] = pairs["language"]
    return replace(cfg, **updates) if updates else cfg


def runtime_config_to_kv(cfg: RuntimeConfig) -> dict[str, str]:
    return {
        "match_threshold": repr(cfg.match_threshold),
        "enable_mutation": "true" if cfg.enable_mutation else "false",
        "date_formats": ",".join(cfg.date_formats),
        "decimal_separator": cfg.decimal_separator,
        "language": cfg.language,
    }
