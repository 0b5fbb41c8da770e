"""Bot bundle emission and loading.

A bundle is a self-contained directory: `manifest`, `schema.model`,
`intents.model`, `operations.model`, `data.csv`, `bot.config`. Model files
are canonical JSON (sorted keys, two-space indent, UTF-8, trailing
newline) so equal models always serialize to identical bytes; the data is
copied in and fingerprinted so later hand edits are detectable. Loading
re-runs every validator, because bundles are meant to be hand-refined.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .config import (
    ParseConfig,
    RuntimeConfig,
    runtime_config_from_kv,
    runtime_config_to_kv,
    parse_kv_text,
    render_kv,
)
from .conversation import IntentModel, validate_intent_model
from .crud import OperationModel, validate_operation_model
from .errors import (
    BundleParseError,
    ConfigFormatError,
    Diagnostic,
    FingerprintMismatchWarning,
    ManifestMissingError,
    Tab2BotError,
    ValidationFailedError,
)
from .ingest import RawTable, parse_table, write_table_csv
from .schema import DataSchema, validate_schema

BUNDLE_VERSION = "1"
MANIFEST_NAME = "manifest"

_FILES = {
    "schema_file": "schema.model",
    "intents_file": "intents.model",
    "operations_file": "operations.model",
    "data_file": "data.csv",
    "config_file": "bot.config",
}


@dataclass(frozen=True)
class BundleManifest:
    version: str
    schema_file: str
    intents_file: str
    operations_file: str
    data_file: str
    config_file: str
    fingerprint: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "schema_file": self.schema_file,
            "intents_file": self.intents_file,
            "operations_file": self.operations_file,
            "data_file": self.data_file,
            "config_file": self.config_file,
            "fingerprint": self.fingerprint,
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "BundleManifest":
        try:
            return BundleManifest(
                version=data["version"],
                schema_file=data["schema_file"],
                intents_file=data["intents_file"],
                operations_file=data["operations_file"],
                data_file=data["data_file"],
                config_file=data["config_file"],
                fingerprint=data["fingerprint"],
            )
        except KeyError as exc:
            raise BundleParseError(MANIFEST_NAME, "top level", f"missing key {exc}") from exc


@dataclass(frozen=True)
class LoadedBundle:
    schema: DataSchema
    intents: IntentModel
    ops: OperationModel
    table: RawTable
    manifest: BundleManifest
    runtime_config: RuntimeConfig


def canonical_json(obj: Any) -> str:
    """One canonical textual encoding: sorted keys, indent 2, LF, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def data_fingerprint(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def validate_models(
    schema: DataSchema, intents: IntentModel, ops: OperationModel
) -> list[Diagnostic]:
    return (
        validate_schema(schema)
        + validate_operation_model(ops, schema)
        + validate_intent_model(intents, ops)
    )


def emit_bundle(
    schema: DataSchema,
    intents: IntentModel,
    ops: OperationModel,
    table: RawTable,
    directory: Path,
    runtime_config: RuntimeConfig | None = None,
) -> BundleManifest:
    """Write all models plus the data into `directory` canonically.

    Refuses to emit mutually inconsistent models (ValidationFailedError).
    Emitting the same values twice produces byte-identical files.
    """
    diagnostics = validate_models(schema, intents, ops)
    if diagnostics:
        raise ValidationFailedError(diagnostics)
    runtime_config = runtime_config or RuntimeConfig()

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    data_text = write_table_csv(table)
    data_bytes = data_text.encode("utf-8")
    manifest = BundleManifest(
        version=BUNDLE_VERSION,
        fingerprint=data_fingerprint(data_bytes),
        **_FILES,
    )

    (directory / manifest.schema_file).write_text(
        canonical_json(schema.to_dict()), encoding="utf-8"
    )
    (directory / manifest.intents_file).write_text(
        canonical_json(intents.to_dict()), encoding="utf-8"
    )
    (directory / manifest.operations_file).write_text(
        canonical_json(ops.to_dict()), encoding="utf-8"
    )
    (directory / manifest.data_file).write_bytes(data_bytes)
    (directory / manifest.config_file).write_text(
        render_kv(runtime_config_to_kv(runtime_config)), encoding="utf-8"
    )
    (directory / MANIFEST_NAME).write_text(
        canonical_json(manifest.to_dict()), encoding="utf-8"
    )
    return manifest


def _read_json(directory: Path, name: str) -> Any:
    try:
        text = (directory / name).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise BundleParseError(name, "file", "missing") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleParseError(name, f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc


def load_bundle(directory: Path) -> LoadedBundle:
    """Load and re-validate a (possibly hand-edited) bundle directory.

    Raises ManifestMissingError, BundleParseError, or ValidationFailedError;
    emits FingerprintMismatchWarning when the data file changed after emit.
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ManifestMissingError(f"no manifest in {directory}")
    manifest = BundleManifest.from_dict(_read_json(directory, MANIFEST_NAME))
    if manifest.version != BUNDLE_VERSION:
        raise BundleParseError(MANIFEST_NAME, "version", f"unrecognized version {manifest.version!r}")

    schema = DataSchema.from_dict(_read_json(directory, manifest.schema_file))
    intents = IntentModel.from_dict(_read_json(directory, manifest.intents_file))
    ops = OperationModel.from_dict(_read_json(directory, manifest.operations_file))

    try:
        config_text = (directory / manifest.config_file).read_text(encoding="utf-8")
        runtime_config = runtime_config_from_kv(parse_kv_text(config_text))
    except FileNotFoundError as exc:
        raise BundleParseError(manifest.config_file, "file", "missing") from exc
    except ConfigFormatError as exc:
        raise BundleParseError(manifest.config_file, "config", str(exc)) from exc

    try:
        data_bytes = (directory / manifest.data_file).read_bytes()
    except FileNotFoundError as exc:
        raise BundleParseError(manifest.data_file, "file", "missing") from exc
    try:
        table = parse_table(data_bytes, ParseConfig(), name=schema.name or "table")
    except Tab2BotError as exc:
        raise BundleParseError(manifest.data_file, "content", str(exc)) from exc

    diagnostics = validate_models(schema, intents, ops)
    if diagnostics:
        located = [
            Diagnostic(d.code, d.subject, f"{_locate(d.code)}: {d.detail}".rstrip(": "))
            for d in diagnostics
        ]
        raise ValidationFailedError(located)

    if data_fingerprint(data_bytes) != manifest.fingerprint:
        warnings.warn(
            f"data file {manifest.data_file} changed after emit",
            FingerprintMismatchWarning,
            stacklevel=2,
        )
    return LoadedBundle(
        schema=schema,
        intents=intents,
        ops=ops,
        table=table,
        manifest=manifest,
        runtime_config=runtime_config,
    )


def _locate(code: str) -> str:
    """Map a diagnostic code to the bundle file it refers to."""
    schema_codes = {
        "DuplicateField",
        "MissingCategoryValues",
        "DiversityMismatch",
        "UnexpectedCategoryValues",
        "BadSynonyms",
    }
    op_codes = {"DuplicateOp", "MutabilityMismatch", "MissingAggFn", "UnexpectedAggFn", "MissingTarget"}
    if code in schema_codes:
        return "schema.model"
    if code in op_codes:
        return "operations.model"
    if code in {"UnknownField", "TypeMismatch"}:
        return "operations.model (against schema.model)"
    return "intents.model"
