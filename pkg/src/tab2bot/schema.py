"""Schema inference: derive per-field data types, diversity, and categorical
classification from column profiles, and enrich field names with thesaurus
synonyms.

Type precedence is fixed Numeric > DateTime > Textual so that, e.g., a
column of "2021" values is Numeric. A field is categorical when its
diversity is at or under the configured threshold (inclusive boundary).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .config import InferenceConfig
from .errors import BundleParseError, Diagnostic, ThesaurusFormatError
from .ingest import ColumnStats, RawTable, column_profile
from .values import normalize_identifier


class DataType(str, Enum):
    NUMERIC = "Numeric"
    DATETIME = "DateTime"
    TEXTUAL = "Textual"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Field:
    """One inferred column of the data schema."""

    name: str
    display_name: str
    datatype: DataType
    diversity: int
    categorical: bool
    category_values: tuple[str, ...] = ()
    synonyms: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "display_name": self.display_name,
            "datatype": self.datatype.value,
            "diversity": self.diversity,
            "categorical": self.categorical,
            "category_values": list(self.category_values),
            "synonyms": list(self.synonyms),
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "Field":
        try:
            return Field(
                name=data["name"],
                display_name=data["display_name"],
                datatype=DataType(data["datatype"]),
                diversity=int(data["diversity"]),
                categorical=bool(data["categorical"]),
                category_values=tuple(data.get("category_values", [])),
                synonyms=tuple(data.get("synonyms", [])),
            )
        except (KeyError, ValueError) as exc:
            raise BundleParseError("schema", f"field {data.get('name', '?')}", str(exc)) from exc


@dataclass(frozen=True)
class Provenance:
    """Where a schema came from: source identifier plus config fingerprint."""

    source: str
    config_fingerprint: str

    def to_dict(self) -> dict[str, str]:
        return {"source": self.source, "config_fingerprint": self.config_fingerprint}

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "Provenance":
        return Provenance(
            source=data.get("source", ""),
            config_fingerprint=data.get("config_fingerprint", ""),
        )


@dataclass(frozen=True)
class DataSchema:
    """The inferred data model of one table."""

    name: str
    fields: tuple[Field, ...]
    row_count: int
    provenance: Provenance

    def field_named(self, name: str) -> Field | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "row_count": self.row_count,
            "provenance": self.provenance.to_dict(),
            "fields": [f.to_dict() for f in self.fields],
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "DataSchema":
        return DataSchema(
            name=data.get("name", ""),
            fields=tuple(Field.from_dict(f) for f in data.get("fields", [])),
            row_count=int(data.get("row_count", 0)),
            provenance=Provenance.from_dict(data.get("provenance", {})),
        )


def infer_field_type(stats: ColumnStats, cfg: InferenceConfig | None = None) -> DataType:
    """Assign a data type from parse tallies under the fixed precedence.

    A type wins when at least (1 - tolerance) of the non-empty cells parse
    as it; the comparison is done as failures <= tolerance * non_empty to
    keep the boundary exact at tolerance 0.
    """
    cfg = cfg or InferenceConfig()
    n = stats.non_empty_count
    if n == 0:
        return DataType.UNKNOWN
    allowed_failures = cfg.type_tolerance * n
    if n - stats.numeric_parse_count <= allowed_failures:
        return DataType.NUMERIC
    if n - stats.datetime_parse_count <= allowed_failures:
        return DataType.DATETIME
    return DataType.TEXTUAL


def classify_categorical(diversity: int, threshold: int) -> bool:
    """Categorical when 1 <= diversity <= threshold (inclusive boundary)."""
    return 1 <= diversity <= threshold


def infer_schema(table: RawTable, cfg: InferenceConfig | None = None) -> DataSchema:
    """Build the DataSchema for a table: one Field per column, in order.

    Category values are sorted lexicographically so the schema is stable
    under any permutation of the data rows.
    """
    cfg = cfg or InferenceConfig()
    fields: list[Field] = []
    for index, header in enumerate(table.headers):
        stats = column_profile(table, index, cfg)
        datatype = infer_field_type(stats, cfg)
        categorical = classify_categorical(stats.diversity, cfg.diversity_threshold)
        fields.append(
            Field(
                name=normalize_identifier(header),
                display_name=header.strip(),
                datatype=datatype,
                diversity=stats.diversity,
                categorical=categorical,
                category_values=tuple(sorted(stats.distinct_values)) if categorical else (),
            )
        )
    return DataSchema(
        name=table.name,
        fields=tuple(fields),
        row_count=table.row_count,
        provenance=Provenance(source=table.name, config_fingerprint=cfg.fingerprint()),
    )


def validate_schema(schema: DataSchema) -> list[Diagnostic]:
    """Check DataSchema invariants (needed again after hand edits)."""
    diagnostics: list[Diagnostic] = []
    seen: set[str] = set()
    for f in schema.fields:
        if f.name in seen:
            diagnostics.append(Diagnostic("DuplicateField", f.name))
        seen.add(f.name)
        if f.categorical:
            if not f.category_values:
                diagnostics.append(
                    Diagnostic("MissingCategoryValues", f.name, "categorical field needs values")
                )
            elif len(set(f.category_values)) != f.diversity:
                diagnostics.append(
                    Diagnostic(
                        "DiversityMismatch",
                        f.name,
                        f"{len(set(f.category_values))} values vs diversity {f.diversity}",
                    )
                )
        elif f.category_values:
            diagnostics.append(
                Diagnostic("UnexpectedCategoryValues", f.name, "non-categorical field has values")
            )
        if f.name in f.synonyms or len(set(f.synonyms)) != len(f.synonyms):
            diagnostics.append(
                Diagnostic("BadSynonyms", f.name, "synonyms must be unique and not the name itself")
            )
    return diagnostics


# --- thesaurus ---------------------------------------------------------------

Thesaurus = dict[str, tuple[str, ...]]


def load_thesaurus(path: Path) -> Thesaurus:
    """Load a thesaurus file: one `term: syn1, syn2, ...` record per line.

    Lines starting with `#` and blank lines are ignored. Terms are
    normalized; self-referential synonyms are dropped at load time.
    """
    return parse_thesaurus(path.read_text(encoding="utf-8"))


def parse_thesaurus(text: str) -> Thesaurus:
    entries: Thesaurus = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ThesaurusFormatError(lineno, raw)
        term, _, tail = line.partition(":")
        key = normalize_identifier(term)
        if not key:
            raise ThesaurusFormatError(lineno, raw)
        synonyms: list[str] = []
        for item in tail.split(","):
            synonym = item.strip()
            if not synonym or normalize_identifier(synonym) == key:
                continue
            if synonym not in synonyms:
                synonyms.append(synonym)
        entries[key] = tuple(synonyms)
    return entries


def enrich_with_synonyms(schema: DataSchema, thesaurus: Thesaurus) -> DataSchema:
    """Attach thesaurus synonyms to fields whose normalized name has an entry.

    Fields without an entry are unchanged; everything else in the schema is
    preserved. Idempotent: re-running with the same thesaurus is a no-op.
    """
    fields: list[Field] = []
    for f in schema.fields:
        entry = thesaurus.get(f.name)
        if entry is None:
            fields.append(f)
            continue
        synonyms: list[str] = []
        for synonym in entry:
            if normalize_identifier(synonym) == f.name:
                continue
            if synonym not in synonyms:
                synonyms.append(synonym)
        fields.append(replace(f, synonyms=tuple(synonyms)))
    return replace(schema, fields=tuple(fields))
