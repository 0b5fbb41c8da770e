"""Conversation model generation: entity types, intents, training sentences,
and parameters derived from the data schema by a fixed heuristic catalog.

Heuristics (applied in this order, deterministically):
  H1  one filter intent per categorical field, with a custom-values param;
      field synonyms add sentence variants (capped).
  H2  per numeric field: min/max/sum/avg question intents bound to the
      aggregate operations, plus greater-than / less-than filter intents
      with a number param.
  H3  per date-time field: a between filter with two date params.
  H5  pairwise combined categorical filters (when enabled).
  H4  builtins: row count, schema help, fallback.

Sentence texts come from a hand-editable template catalog keyed by
heuristic id; generated models embed the rendered sentences so refining a
bundle never requires touching code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from itertools import combinations
from typing import Any, Mapping

from .config import HeuristicConfig
from .crud import NUMERIC_AGG_FNS, OperationModel
from .errors import BundleParseError, Diagnostic, InconsistentInputsError
from .schema import DataSchema, DataType

BUILTIN_ACTIONS = ("help", "fallback")
NUMBER_ENTITY = "number"
DATE_ENTITY = "date"

SLOT_RE = re.compile(r"\{([0-9a-z_]+)\}")


class EntityKind(str, Enum):
    CUSTOM = "CustomValues"
    NUMBER = "NumberLiteral"
    DATE = "DateLiteral"


@dataclass(frozen=True)
class EntityEntry:
    """One recognizable value of a CustomValues entity."""

    value: str
    synonyms: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "synonyms": list(self.synonyms)}

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "EntityEntry":
        return EntityEntry(value=data["value"], synonyms=tuple(data.get("synonyms", [])))


@dataclass(frozen=True)
class EntityType:
    name: str
    kind: EntityKind
    entries: tuple[EntityEntry, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "entries": [e.to_dict() for e in self.entries],
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "EntityType":
        try:
            return EntityType(
                name=data["name"],
                kind=EntityKind(data["kind"]),
                entries=tuple(EntityEntry.from_dict(e) for e in data.get("entries", [])),
            )
        except (KeyError, ValueError) as exc:
            raise BundleParseError("intents", f"entity {data.get('name', '?')}", str(exc)) from exc


@dataclass(frozen=True)
class TrainingSentence:
    """A template utterance; slot markers look like ``{param_name}``."""

    template: str

    def slots(self) -> list[str]:
        return SLOT_RE.findall(self.template)

    def to_dict(self) -> str:
        return self.template


@dataclass(frozen=True)
class Parameter:
    name: str
    entity: str
    required: bool = True
    prompt: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "entity": self.entity,
            "required": self.required,
            "prompt": self.prompt,
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "Parameter":
        return Parameter(
            name=data["name"],
            entity=data["entity"],
            required=bool(data.get("required", True)),
            prompt=data.get("prompt", ""),
        )


@dataclass(frozen=True)
class Intent:
    name: str
    training_sentences: tuple[TrainingSentence, ...]
    parameters: tuple[Parameter, ...] = ()
    action: str = "fallback"

    def parameter_named(self, name: str) -> Parameter | None:
        for p in self.parameters:
            if p.name == name:
                return p
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "training_sentences": [s.to_dict() for s in self.training_sentences],
            "parameters": [p.to_dict() for p in self.parameters],
            "action": self.action,
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "Intent":
        try:
            return Intent(
                name=data["name"],
                training_sentences=tuple(
                    TrainingSentence(t) for t in data.get("training_sentences", [])
                ),
                parameters=tuple(Parameter.from_dict(p) for p in data.get("parameters", [])),
                action=data.get("action", "fallback"),
            )
        except KeyError as exc:
            raise BundleParseError("intents", f"intent {data.get('name', '?')}", str(exc)) from exc


@dataclass(frozen=True)
class IntentModel:
    intents: tuple[Intent, ...]
    entities: tuple[EntityType, ...]
    fallback: str

    def intent_named(self, name: str) -> Intent | None:
        for intent in self.intents:
            if intent.name == name:
                return intent
        return None

    def entity_named(self, name: str) -> EntityType | None:
        for entity in self.entities:
            if entity.name == name:
                return entity
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "intents": [i.to_dict() for i in self.intents],
            "entities": [e.to_dict() for e in self.entities],
            "fallback": self.fallback,
        }

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "IntentModel":
        return IntentModel(
            intents=tuple(Intent.from_dict(i) for i in data.get("intents", [])),
            entities=tuple(EntityType.from_dict(e) for e in data.get("entities", [])),
            fallback=data.get("fallback", "fallback"),
        )


# --- template catalog ---------------------------------------------------------


def load_template_catalog() -> dict[str, list[str]]:
    """Load the packaged sentence-template catalog (`key: template` lines)."""
    text = (
        resources.files("tab2bot").joinpath("templates/sentences_en.txt").read_text("utf-8")
    )
    return parse_template_catalog(text)


def parse_template_catalog(text: str) -> dict[str, list[str]]:
    catalog: dict[str, list[str]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, template = line.partition(":")
        catalog.setdefault(key.strip(), []).append(template.strip())
    return catalog


def _render(template: str, literals: Mapping[str, str], slot_names: Mapping[str, str]) -> str:
    """Fill literal placeholders and rename catalog slots to param names."""

    def sub(match: re.Match[str]) -> str:
        key = match.group(1)
        if key in literals:
            return literals[key]
        if key in slot_names:
            return "{" + slot_names[key] + "}"
        return match.group(0)

    return SLOT_RE.sub(sub, template)


# --- generation ----------------------------------------------------------------


def build_entity_types(schema: DataSchema) -> list[EntityType]:
    """Entity types implied by the schema: one CustomValues entity per
    categorical field, plus shared number/date literal entities when any
    numeric or date-time field exists."""
    entities: list[EntityType] = []
    for f in schema.fields:
        if f.categorical:
            entities.append(
                EntityType(
                    name=f"{f.name}_value",
                    kind=EntityKind.CUSTOM,
                    entries=tuple(EntityEntry(value=v) for v in f.category_values),
                )
            )
    if any(f.datatype is DataType.NUMERIC for f in schema.fields):
        entities.append(EntityType(name=NUMBER_ENTITY, kind=EntityKind.NUMBER))
    if any(f.datatype is DataType.DATETIME for f in schema.fields):
        entities.append(EntityType(name=DATE_ENTITY, kind=EntityKind.DATE))
    return entities


def _check_inputs(schema: DataSchema, ops: OperationModel, entities: list[EntityType]) -> None:
    by_name = {e.name: e for e in entities}
    op_names = {op.name for op in ops.ops}
    if "count" not in op_names:
        raise InconsistentInputsError("operation model lacks the count op")
    for f in schema.fields:
        if f.categorical:
            entity = by_name.get(f"{f.name}_value")
            if entity is None or entity.kind is not EntityKind.CUSTOM:
                raise InconsistentInputsError(f"no CustomValues entity for field {f.name}")
            values = {e.value for e in entity.entries}
            if not set(f.category_values) <= values:
                raise InconsistentInputsError(f"entity {f.name}_value missing category values")
            if f"read_by_{f.name}" not in op_names:
                raise InconsistentInputsError(f"operation model lacks read_by_{f.name}")
        if f.datatype is DataType.NUMERIC:
            if NUMBER_ENTITY not in by_name:
                raise InconsistentInputsError("no number entity for numeric fields")
            for fn in NUMERIC_AGG_FNS:
                if f"{fn}_{f.name}" not in op_names:
                    raise InconsistentInputsError(f"operation model lacks {fn}_{f.name}")
        if f.datatype is DataType.DATETIME and DATE_ENTITY not in by_name:
            raise InconsistentInputsError("no date entity for date-time fields")


def generate_intents(
    schema: DataSchema,
    ops: OperationModel,
    entities: list[EntityType],
    hcfg: HeuristicConfig | None = None,
    catalog: Mapping[str, list[str]] | None = None,
) -> IntentModel:
    """Apply the heuristic catalog to the schema and produce the IntentModel.

    Raises InconsistentInputsError when entities/ops do not cover the schema.
    """
    hcfg = hcfg or HeuristicConfig()
    catalog = catalog or load_template_catalog()
    _check_inputs(schema, ops, entities)

    intents: list[Intent] = []
    categorical = [f for f in schema.fields if f.categorical]

    # H1: one filter intent per categorical field.
    for f in categorical:
        sentences = [
            TrainingSentence(_render(t, {"field": f.display_name}, {"value": "value"}))
            for t in catalog.get("h1_filter", [])
        ]
        primary = catalog.get("h1_filter", ["show rows where {field} is {value}"])[0]
        for synonym in f.synonyms[: hcfg.sentence_variants_per_intent]:
            sentences.append(
                TrainingSentence(_render(primary, {"field": synonym}, {"value": "value"}))
            )
        intents.append(
            Intent(
                name=f"filter_by_{f.name}",
                training_sentences=tuple(sentences),
                parameters=(
                    Parameter(
                        name="value",
                        entity=f"{f.name}_value",
                        required=True,
                        prompt=f"Which {f.display_name}?",
                    ),
                ),
                action=f"read_by_{f.name}",
            )
        )

    # H2: aggregate questions plus numeric threshold filters.
    for f in schema.fields:
        if f.datatype is not DataType.NUMERIC:
            continue
        for fn in NUMERIC_AGG_FNS:
            sentences = [
                TrainingSentence(_render(t, {"field": f.display_name}, {}))
                for t in catalog.get(f"h2_{fn}", [])
            ]
            intents.append(
                Intent(
                    name=f"{fn}_{f.name}",
                    training_sentences=tuple(sentences),
                    parameters=(),
                    action=f"{fn}_{f.name}",
                )
            )
        for suffix, key, phrase in (("gt", "h2_gt", "above"), ("lt", "h2_lt", "below")):
            param = f"{f.name}_{suffix}"
            sentences = [
                TrainingSentence(_render(t, {"field": f.display_name}, {"value": param}))
                for t in catalog.get(key, [])
            ]
            intents.append(
                Intent(
                    name=f"filter_{f.name}_{suffix}",
                    training_sentences=tuple(sentences),
                    parameters=(
                        Parameter(
                            name=param,
                            entity=NUMBER_ENTITY,
                            required=True,
                            prompt=f"{f.display_name} {phrase} what value?",
                        ),
                    ),
                    action="list_rows",
                )
            )

    # H3: date range filter per date-time field.
    for f in schema.fields:
        if f.datatype is not DataType.DATETIME:
            continue
        start, end = f"{f.name}_from", f"{f.name}_to"
        sentences = [
            TrainingSentence(
                _render(t, {"field": f.display_name}, {"start": start, "end": end})
            )
            for t in catalog.get("h3_between", [])
        ]
        intents.append(
            Intent(
                name=f"filter_{f.name}_between",
                training_sentences=tuple(sentences),
                parameters=(
                    Parameter(start, DATE_ENTITY, True, f"Start date for {f.display_name}?"),
                    Parameter(end, DATE_ENTITY, True, f"End date for {f.display_name}?"),
                ),
                action="list_rows",
            )
        )

    # H5: pairwise combined categorical filters, lexicographic pair order.
    if hcfg.max_conjunctive_filters == 2 and len(categorical) >= 2:
        by_name = {f.name: f for f in categorical}
        for a, b in combinations(sorted(by_name), 2):
            fa, fb = by_name[a], by_name[b]
            pa, pb = f"{a}_value", f"{b}_value"
            sentences = [
                TrainingSentence(
                    _render(
                        t,
                        {"field_a": fa.display_name, "field_b": fb.display_name},
                        {"value_a": pa, "value_b": pb},
                    )
                )
                for t in catalog.get("h5_pair", [])
            ]
            intents.append(
                Intent(
                    name=f"filter_by_{a}_and_{b}",
                    training_sentences=tuple(sentences),
                    parameters=(
                        Parameter(pa, f"{a}_value", True, f"Which {fa.display_name}?"),
                        Parameter(pb, f"{b}_value", True, f"Which {fb.display_name}?"),
                    ),
                    action="list_rows",
                )
            )

    # H4: builtins.
    intents.append(
        Intent(
            name="row_count",
            training_sentences=tuple(TrainingSentence(t) for t in catalog.get("h4_count", [])),
            action="count",
        )
    )
    intents.append(
        Intent(
            name="show_schema",
            training_sentences=tuple(TrainingSentence(t) for t in catalog.get("h4_schema", [])),
            action="help",
        )
    )
    intents.append(
        Intent(
            name="fallback",
            training_sentences=tuple(
                TrainingSentence(t) for t in catalog.get("h4_fallback", ["sorry"])
            ),
            action="fallback",
        )
    )

    return IntentModel(intents=tuple(intents), entities=tuple(entities), fallback="fallback")


# --- validation -----------------------------------------------------------------


def validate_intent_model(model: IntentModel, ops: OperationModel) -> list[Diagnostic]:
    """Check every IntentModel invariant; empty list means valid."""
    diagnostics: list[Diagnostic] = []
    op_names = {op.name for op in ops.ops}

    entity_names: set[str] = set()
    for entity in model.entities:
        if entity.name in entity_names:
            diagnostics.append(Diagnostic("DuplicateEntity", entity.name))
        entity_names.add(entity.name)
        if entity.kind is EntityKind.CUSTOM:
            if not entity.entries:
                diagnostics.append(
                    Diagnostic("EmptyEntity", entity.name, "CustomValues needs entries")
                )
            values = [e.value for e in entity.entries]
            if len(values) != len(set(values)):
                diagnostics.append(
                    Diagnostic("DuplicateEntityValue", entity.name, "entry values must be unique")
                )
        elif entity.entries:
            diagnostics.append(
                Diagnostic("UnexpectedEntries", entity.name, f"{entity.kind.value} takes no entries")
            )

    intent_names: set[str] = set()
    for intent in model.intents:
        if intent.name in intent_names:
            diagnostics.append(Diagnostic("DuplicateIntent", intent.name))
        intent_names.add(intent.name)

        if not intent.training_sentences:
            diagnostics.append(Diagnostic("NoTrainingSentences", intent.name))

        param_names: set[str] = set()
        for param in intent.parameters:
            if param.name in param_names:
                diagnostics.append(Diagnostic("DuplicateParam", intent.name, param.name))
            param_names.add(param.name)
            if param.entity not in entity_names:
                diagnostics.append(
                    Diagnostic("UnknownEntity", intent.name, f"parameter {param.name} -> {param.entity}")
                )

        for sentence in intent.training_sentences:
            for slot in sentence.slots():
                if slot not in param_names:
                    diagnostics.append(Diagnostic("UnboundSlot", intent.name, slot))

        if intent.action not in op_names and intent.action not in BUILTIN_ACTIONS:
            diagnostics.append(Diagnostic("UnknownAction", intent.name, intent.action))

    if model.fallback not in intent_names:
        diagnostics.append(
            Diagnostic("BadFallback", model.fallback, "fallback must name an intent")
        )
    return diagnostics
