"""Tabular ingestion: parse a delimited byte stream into a rectangular
in-memory table and compute the per-column profiles that schema inference
consumes.

The parser implements RFC-4180 quoting (doubled quotes, delimiters and
newlines inside quoted fields) over UTF-8 text with a hand-rolled state
machine so errors can carry precise row indices and byte offsets. Blank
lines are skipped; every kept row must match the header width.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import InferenceConfig, ParseConfig
from .errors import (
    ColumnOutOfRangeError,
    DuplicateHeaderError,
    EmptyInputError,
    EncodingError,
    NonRectangularError,
)
from .values import is_datetime, is_numeric, normalize_identifier


@dataclass(frozen=True)
class RawTable:
    """A rectangular grid of cell texts under a header row."""

    name: str
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def column(self, index: int) -> list[str]:
        """All cells of one column, in row order."""
        if not 0 <= index < len(self.headers):
            raise ColumnOutOfRangeError(
                f"column {index} out of range for {len(self.headers)} headers"
            )
        return [row[index] for row in self.rows]


@dataclass
class ColumnStats:
    """Parse tallies and distinct-value census for one column."""

    column_index: int
    non_empty_count: int = 0
    distinct_values: set[str] = field(default_factory=set)
    numeric_parse_count: int = 0
    datetime_parse_count: int = 0

    @property
    def diversity(self) -> int:
        return len(self.distinct_values)


def parse_table(data: bytes, cfg: ParseConfig | None = None, name: str = "table") -> RawTable:
    """Parse delimited UTF-8 bytes into a RawTable.

    Quoted fields follow RFC-4180: doubled quotes escape a quote, and
    delimiters or newlines inside quotes are literal. Raises
    EncodingError, EmptyInputError, NonRectangularError, or
    DuplicateHeaderError.
    """
    cfg = cfg or ParseConfig()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(exc.start) from exc
    if text.startswith("﻿"):
        text = text[1:]

    records = _scan_records(text, cfg.delimiter, cfg.quote)
    if not records:
        raise EmptyInputError("no records in input")

    if cfg.has_header:
        headers = tuple(records[0])
        data_records = records[1:]
    else:
        headers = tuple(f"col_{i + 1}" for i in range(len(records[0])))
        data_records = records

    # Empty header cells get positional names so identifiers stay unique.
    headers = tuple(
        h if normalize_identifier(h) else f"col_{i + 1}" for i, h in enumerate(headers)
    )
    seen: dict[str, str] = {}
    for header in headers:
        key = normalize_identifier(header)
        if key in seen:
            raise DuplicateHeaderError(key)
        seen[key] = header

    width = len(headers)
    rows: list[tuple[str, ...]] = []
    offset = 1 if cfg.has_header else 0
    for i, record in enumerate(data_records):
        if cfg.max_rows is not None and len(rows) >= cfg.max_rows:
            break
        if len(record) != width:
            raise NonRectangularError(i + offset, width, len(record))
        rows.append(tuple(record))

    return RawTable(name=name, headers=headers, rows=tuple(rows))


def _scan_records(text: str, delimiter: str, quote: str) -> list[list[str]]:
    """State-machine scan of the whole input into records of fields.

    Record terminators are CRLF, LF, or CR outside quotes. A record that
    consumed no characters at all (a blank line) is dropped, mirroring how
    reference CSV readers report empty lines.
    """
    records: list[list[str]] = []
    fields: list[str] = []
    buf: list[str] = []
    in_quotes = False
    saw_any = False  # current record consumed at least one character
    i = 0
    n = len(text)

    def end_field() -> None:
        fields.append("".join(buf))
        buf.clear()

    def end_record() -> None:
        nonlocal saw_any
        end_field()
        if saw_any:
            records.append(fields.copy())
        fields.clear()
        saw_any = False

    while i < n:
        ch = text[i]
        if in_quotes:
            if ch == quote:
                if i + 1 < n and text[i + 1] == quote:
                    buf.append(quote)
                    i += 2
                    continue
                in_quotes = False
                i += 1
                continue
            buf.append(ch)
            i += 1
            continue
        if ch == quote:
            in_quotes = True
            saw_any = True
            i += 1
            continue
        if ch == delimiter:
            saw_any = True
            end_field()
            i += 1
            continue
        if ch == "\r":
            if i + 1 < n and text[i + 1] == "\n":
                i += 1
            end_record()
            i += 1
            continue
        if ch == "\n":
            end_record()
            i += 1
            continue
        buf.append(ch)
        saw_any = True
        i += 1

    if saw_any or buf or fields:
        end_record()
    return records


def column_profile(table: RawTable, col: int, icfg: InferenceConfig | None = None) -> ColumnStats:
    """Profile one column: distinct census plus numeric/datetime parse tallies.

    Cells equal (verbatim) to a configured null marker are empty and do not
    enter any tally. Grammars are evaluated on the verbatim cell text.
    """
    icfg = icfg or InferenceConfig()
    cells = table.column(col)  # raises ColumnOutOfRangeError
    stats = ColumnStats(column_index=col)
    markers = set(icfg.null_markers)
    for cell in cells:
        if cell in markers:
            continue
        stats.non_empty_count += 1
        stats.distinct_values.add(cell)
        if is_numeric(cell, icfg.decimal_separator):
            stats.numeric_parse_count += 1
        if is_datetime(cell, icfg.date_formats):
            stats.datetime_parse_count += 1
    return stats


def write_table_csv(table: RawTable) -> str:
    """Serialize a table back to canonical RFC-4180 text (LF line ends,
    minimal quoting). parse_table(write_table_csv(t).encode()) reproduces
    t structurally.
    """

    def render(cell: str) -> str:
        if any(ch in cell for ch in ',"\r\n'):
            return '"' + cell.replace('"', '""') + '"'
        return cell

    def render_row(cells: tuple[str, ...]) -> str:
        # A lone empty cell must be quoted or the line would read as blank.
        if len(cells) == 1 and cells[0] == "":
            return '""'
        return ",".join(render(c) for c in cells)

    lines = [render_row(table.headers)]
    lines.extend(render_row(row) for row in table.rows)
    return "\n".join(lines) + "\n"
