"""CRUD operation model generated from a data schema by fixed conventions:
every table gets the create/update/delete/list core plus a whole-table
count, every categorical field a read-by-value operation, and every numeric
field the min/max/sum/avg aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from .errors import BundleParseError, Diagnostic
from .schema import DataSchema, DataType


class CrudKind(str, Enum):
    CREATE = "Create"
    READ_BY_ID = "ReadById"
    READ_BY_FIELD = "ReadByField"
    LIST = "List"
    UPDATE = "Update"
    DELETE = "Delete"
    AGGREGATE = "Aggregate"


MUTATING_KINDS = frozenset({CrudKind.CREATE, CrudKind.UPDATE, CrudKind.DELETE})
NUMERIC_AGG_FNS = ("min", "max", "sum", "avg")
AGG_FNS = ("count",) + NUMERIC_AGG_FNS


@dataclass(frozen=True)
class CrudOp:
    """One operation over the table."""

    name: str
    kind: CrudKind
    target_field: str | None = None
    agg_fn: str | None = None
    mutating: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "target_field": self.target_field,
            "agg_fn": self.agg_fn,
            "mutating": self.mutating,
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "CrudOp":
        try:
            return CrudOp(
                name=data["name"],
                kind=CrudKind(data["kind"]),
                target_field=data.get("target_field"),
                agg_fn=data.get("agg_fn"),
                mutating=bool(data.get("mutating", False)),
            )
        except (KeyError, ValueError) as exc:
            raise BundleParseError("operations", f"op {data.get('name', '?')}", str(exc)) from exc


@dataclass(frozen=True)
class OperationModel:
    """All operations generated for (or hand-refined against) one schema."""

    schema_name: str
    ops: tuple[CrudOp, ...]

    def op_named(self, name: str) -> CrudOp | None:
        for op in self.ops:
            if op.name == name:
                return op
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_name": self.schema_name,
            "ops": [op.to_dict() for op in self.ops],
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "OperationModel":
        return OperationModel(
            schema_name=data.get("schema_name", ""),
            ops=tuple(CrudOp.from_dict(op) for op in data.get("ops", [])),
        )


def generate_crud(schema: DataSchema) -> OperationModel:
    """Derive the operation model from the schema, deterministically.

    Field-derived operations follow schema field order; aggregate order per
    numeric field is min, max, sum, avg.
    """
    ops: list[CrudOp] = [
        CrudOp("create_row", CrudKind.CREATE, mutating=True),
        CrudOp("update_row", CrudKind.UPDATE, mutating=True),
        CrudOp("delete_row", CrudKind.DELETE, mutating=True),
        CrudOp("list_rows", CrudKind.LIST),
        CrudOp("count", CrudKind.AGGREGATE, agg_fn="count"),
    ]
    for f in schema.fields:
        if f.categorical:
            ops.append(CrudOp(f"read_by_{f.name}", CrudKind.READ_BY_FIELD, target_field=f.name))
    for f in schema.fields:
        if f.datatype is DataType.NUMERIC:
            for fn in NUMERIC_AGG_FNS:
                ops.append(
                    CrudOp(f"{fn}_{f.name}", CrudKind.AGGREGATE, target_field=f.name, agg_fn=fn)
                )
    return OperationModel(schema_name=schema.name, ops=tuple(ops))


def validate_operation_model(model: OperationModel, schema: DataSchema) -> list[Diagnostic]:
    """Check every OperationModel invariant against a schema.

    Returns one diagnostic per violated rule; empty list means valid.
    """
    diagnostics: list[Diagnostic] = []
    seen: set[str] = set()
    for op in model.ops:
        if op.name in seen:
            diagnostics.append(Diagnostic("DuplicateOp", op.name, "operation name reused"))
        seen.add(op.name)

        if (op.kind in MUTATING_KINDS) != op.mutating:
            diagnostics.append(
                Diagnostic("MutabilityMismatch", op.name, f"kind {op.kind.value} vs mutating={op.mutating}")
            )

        if op.target_field is not None and schema.field_named(op.target_field) is None:
            diagnostics.append(
                Diagnostic("UnknownField", op.name, f"target field {op.target_field!r} not in schema")
            )

        if op.kind is CrudKind.AGGREGATE:
            if op.agg_fn not in AGG_FNS:
                diagnostics.append(
                    Diagnostic("MissingAggFn", op.name, f"aggregate needs agg_fn in {AGG_FNS}")
                )
            elif op.agg_fn in NUMERIC_AGG_FNS:
                target = schema.field_named(op.target_field or "")
                if target is None:
                    diagnostics.append(
                        Diagnostic("MissingTarget", op.name, f"{op.agg_fn} requires a numeric target field")
                    )
                elif target.datatype is not DataType.NUMERIC:
                    diagnostics.append(
                        Diagnostic(
                            "TypeMismatch",
                            op.name,
                            f"{op.agg_fn} over {target.name} ({target.datatype.value})",
                        )
                    )
        else:
            if op.agg_fn is not None:
                diagnostics.append(
                    Diagnostic("UnexpectedAggFn", op.name, "agg_fn only valid on Aggregate ops")
                )
            if op.kind is CrudKind.READ_BY_FIELD and op.target_field is None:
                diagnostics.append(
                    Diagnostic("MissingTarget", op.name, "ReadByField requires target_field")
                )
    return diagnostics
