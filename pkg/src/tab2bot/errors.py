"""Exception types and validation diagnostics shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class Tab2BotError(Exception):
    """Base class for all errors raised by this package."""


# --- ingest -----------------------------------------------------------------


class EmptyInputError(Tab2BotError):
    """The byte stream contains no header row."""


class EncodingError(Tab2BotError):
    """Input is not valid UTF-8; carries the byte offset of the first bad byte."""

    def __init__(self, offset: int):
        super().__init__(f"invalid UTF-8 byte at offset {offset}")
        self.offset = offset


class NonRectangularError(Tab2BotError):
    """A data row has a different cell count than the header."""

    def __init__(self, row_index: int, expected: int, got: int):
        super().__init__(
            f"row {row_index} has {got} cells, expected {expected}"
        )
        self.row_index = row_index
        self.expected = expected
        self.got = got


class DuplicateHeaderError(Tab2BotError):
    """Two headers collide after normalization."""

    def __init__(self, name: str):
        super().__init__(f"duplicate header after normalization: {name!r}")
        self.name = name


class ColumnOutOfRangeError(Tab2BotError):
    """Requested column index does not exist in the table."""


# --- schema inference -------------------------------------------------------


class ThesaurusFormatError(Tab2BotError):
    """A thesaurus file line does not follow `term: syn1, syn2, ...`."""

    def __init__(self, line_number: int, line: str):
        super().__init__(f"malformed thesaurus line {line_number}: {line!r}")
        self.line_number = line_number
        self.line = line


class ConfigFormatError(Tab2BotError):
    """A key-value config file line or value is malformed."""


# --- conversation / runtime -------------------------------------------------


class InconsistentInputsError(Tab2BotError):
    """Entities or operations handed to the intent generator do not match the schema."""


class MutationDisabledError(Tab2BotError):
    """A mutating operation was requested while mutation is disabled."""


class EmptyAggregateError(Tab2BotError):
    """min/max/avg requested over a column with zero parseable cells."""

    def __init__(self, field: str):
        super().__init__(f"no parseable data in field {field!r}")
        self.field = field


# --- bundle -----------------------------------------------------------------


class ManifestMissingError(Tab2BotError):
    """Bundle directory has no manifest file."""


class BundleParseError(Tab2BotError):
    """A bundle file failed to parse; carries file name and location."""

    def __init__(self, file: str, location: str, reason: str):
        super().__init__(f"{file} at {location}: {reason}")
        self.file = file
        self.location = location
        self.reason = reason


class ValidationFailedError(Tab2BotError):
    """Model validation produced diagnostics; refuses emit/load."""

    def __init__(self, diagnostics: list["Diagnostic"]):
        super().__init__(
            "; ".join(str(d) for d in diagnostics) or "validation failed"
        )
        self.diagnostics = diagnostics


class FingerprintMismatchWarning(UserWarning):
    """Bundle data file changed after emit (warning, not an error)."""


# --- diagnostics ------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: a rule violated by a named model element."""

    code: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.code}({self.subject}){tail}"
