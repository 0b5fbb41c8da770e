"""Lexical utilities: the numeric cell grammar, date-format patterns,
identifier normalization, and the tokenizer used by intent matching.

The numeric grammar accepts an optional sign, digits, and at most one
decimal separator (configurable, "." by default). Thousands separators are
not accepted. Date formats are written in a small pattern language
(``YYYY``, ``MM``, ``DD``, ``hh``, ``mm``, ``ss``; any other character is
literal) and a cell matches a format only with exact shape, including zero
padding.
"""

from __future__ import annotations

import re
from datetime import datetime
from functools import lru_cache

DEFAULT_DATE_FORMATS = ("YYYY-MM-DD", "YYYY-MM-DDThh:mm:ss", "DD/MM/YYYY")

_PATTERN_TOKENS = [
    ("YYYY", r"\d{4}", "%Y"),
    ("MM", r"\d{2}", "%m"),
    ("DD", r"\d{2}", "%d"),
    ("hh", r"\d{2}", "%H"),
    ("mm", r"\d{2}", "%M"),
    ("ss", r"\d{2}", "%S"),
]


@lru_cache(maxsize=32)
def _numeric_re(decimal_separator: str) -> re.Pattern[str]:
    sep = re.escape(decimal_separator)
    return re.compile(rf"[+-]?(?:\d+(?:{sep}\d*)?|{sep}\d+)")


def is_numeric(text: str, decimal_separator: str = ".") -> bool:
    """True if the whole cell text satisfies the numeric grammar."""
    return _numeric_re(decimal_separator).fullmatch(text) is not None


def parse_number(text: str, decimal_separator: str = ".") -> float:
    """Parse a cell accepted by the numeric grammar into a float.

    Raises ValueError when the text does not satisfy the grammar.
    """
    if not is_numeric(text, decimal_separator):
        raise ValueError(f"not a number under the grammar: {text!r}")
    normalized = text.replace(decimal_separator, ".", 1)
    if normalized.endswith("."):
        normalized += "0"
    return float(normalized)


@lru_cache(maxsize=64)
def compile_date_format(pattern: str) -> tuple[re.Pattern[str], str]:
    """Translate a date pattern into (shape regex, strptime format)."""
    regex_parts: list[str] = []
    strptime_parts: list[str] = []
    i = 0
    while i < len(pattern):
        for token, shape, directive in _PATTERN_TOKENS:
            if pattern.startswith(token, i):
                regex_parts.append(shape)
                strptime_parts.append(directive)
                i += len(token)
                break
        else:
            regex_parts.append(re.escape(pattern[i]))
            strptime_parts.append(pattern[i].replace("%", "%%"))
            i += 1
    return re.compile("".join(regex_parts)), "".join(strptime_parts)


def parse_datetime(text: str, formats: tuple[str, ...] | list[str]) -> datetime | None:
    """Parse a cell against the configured formats, first match wins.

    A cell matches a format only when its shape (digit counts, literals)
    is exact and the calendar values are valid; returns None otherwise.
    """
    for pattern in formats:
        shape, directive = compile_date_format(pattern)
        if shape.fullmatch(text) is None:
            continue
        try:
            return datetime.strptime(text, directive)
        except ValueError:
            continue
    return None


def is_datetime(text: str, formats: tuple[str, ...] | list[str]) -> bool:
    """True if the cell matches any configured date format."""
    return parse_datetime(text, formats) is not None


_WS_RUN = re.compile(r"[^0-9a-z]+")


def normalize_identifier(text: str) -> str:
    """Turn arbitrary header text into a stable identifier.

    Trims, case-folds, and collapses runs of whitespace and other
    non-alphanumeric characters into single underscores so the result is
    safe to embed in operation names and sentence slot markers.
    """
    folded = text.strip().casefold()
    return _WS_RUN.sub("_", folded).strip("_")


_TOKEN = re.compile(r"[0-9a-z_]+")


def tokenize(text: str) -> list[str]:
    """Lowercased tokens with punctuation stripped, for overlap scoring."""
    return _TOKEN.findall(text.casefold())


def format_number(value: float) -> str:
    """Render a number without a spurious trailing .0 for integral values."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)
