"""Bot runtime: recognize entities in an utterance, match it to an intent by
token overlap, execute the bound operation over the table, and render a
reply. Matching is purely lexical and deterministic.

Scoring replaces recognized entity spans with their parameter slot names
before comparing token sets, so the spelling of a value never influences
which intent wins. An intent wins when its best sentence reaches the match
threshold; ties break on more bound required parameters, then intent name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum

from .config import RuntimeConfig
from .conversation import EntityKind, EntityType, Intent, IntentModel
from .crud import CrudKind, OperationModel
from .errors import EmptyAggregateError, MutationDisabledError
from .ingest import RawTable
from .schema import DataSchema, DataType
from .values import (
    compile_date_format,
    format_number,
    is_numeric,
    parse_datetime,
    parse_number,
    tokenize,
)


@dataclass(frozen=True)
class EntityMatch:
    """One recognized entity occurrence inside an utterance."""

    entity: str
    start: int
    length: int
    surface: str
    value: str | float

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class MatchResult:
    intent: str
    score: float
    bindings: dict[str, EntityMatch] = field(default_factory=dict)
    missing_required: tuple[str, ...] = ()


class ReplyKind(str, Enum):
    ROWS = "Rows"
    SCALAR = "Scalar"
    PROMPT = "Prompt"
    HELP = "Help"
    FALLBACK = "Fallback"


@dataclass(frozen=True)
class BotReply:
    kind: ReplyKind
    text: str
    rows: tuple[tuple[int, tuple[str, ...]], ...] | None = None
    scalar: float | int | str | None = None
    matched_intent: str = ""
    score: float = 0.0


@dataclass
class PendingClarification:
    """A match waiting for one missing required parameter."""

    result: MatchResult
    param: str
    reprompted: bool = False


@dataclass
class Session:
    id: str
    pending: PendingClarification | None = None


# --- entity recognition -------------------------------------------------------


def _boundary_ok(text: str, start: int, end: int) -> bool:
    if start > 0 and (text[start - 1].isalnum() or text[start - 1] == "_"):
        return False
    if end < len(text) and (text[end].isalnum() or text[end] == "_"):
        return False
    return True


def _literal_candidates(utterance: str, entity: EntityType) -> list[EntityMatch]:
    lowered = utterance.lower()
    out: list[EntityMatch] = []
    for entry in entity.entries:
        for literal in (entry.value, *entry.synonyms):
            needle = literal.lower()
            if not needle:
                continue
            pos = lowered.find(needle)
            while pos != -1:
                end = pos + len(needle)
                if _boundary_ok(lowered, pos, end):
                    out.append(
                        EntityMatch(
                            entity=entity.name,
                            start=pos,
                            length=len(needle),
                            surface=utterance[pos:end],
                            value=entry.value,
                        )
                    )
                pos = lowered.find(needle, pos + 1)
    return out


def _number_candidates(utterance: str, entity: EntityType, cfg: RuntimeConfig) -> list[EntityMatch]:
    sep = re.escape(cfg.decimal_separator)
    pattern = re.compile(
        rf"(?<![0-9A-Za-z_{sep}])[+-]?(?:\d+(?:{sep}\d+)?|{sep}\d+)(?![0-9A-Za-z_{sep}])"
    )
    out = []
    for m in pattern.finditer(utterance):
        out.append(
            EntityMatch(
                entity=entity.name,
                start=m.start(),
                length=m.end() - m.start(),
                surface=m.group(0),
                value=parse_number(m.group(0), cfg.decimal_separator),
            )
        )
    return out


def _date_candidates(utterance: str, entity: EntityType, cfg: RuntimeConfig) -> list[EntityMatch]:
    out = []
    for fmt in cfg.date_formats:
        shape, directive = compile_date_format(fmt)
        for m in re.finditer(rf"(?<![0-9A-Za-z_]){shape.pattern}(?![0-9A-Za-z_])", utterance):
            try:
                parsed = datetime.strptime(m.group(0), directive)
            except ValueError:
                continue
            out.append(
                EntityMatch(
                    entity=entity.name,
                    start=m.start(),
                    length=m.end() - m.start(),
                    surface=m.group(0),
                    value=parsed.isoformat(),
                )
            )
    return out


def recognize_entities(
    utterance: str,
    entities: list[EntityType] | tuple[EntityType, ...],
    cfg: RuntimeConfig | None = None,
) -> list[EntityMatch]:
    """Scan an utterance for entity occurrences, case-insensitively.

    Overlapping candidates are resolved by longer span, then earlier start,
    then entity name; the survivors never overlap and are returned in
    utterance order.
    """
    cfg = cfg or RuntimeConfig()
    candidates: list[EntityMatch] = []
    for entity in entities:
        if entity.kind is EntityKind.CUSTOM:
            candidates.extend(_literal_candidates(utterance, entity))
        elif entity.kind is EntityKind.NUMBER:
            candidates.extend(_number_candidates(utterance, entity, cfg))
        elif entity.kind is EntityKind.DATE:
            candidates.extend(_date_candidates(utterance, entity, cfg))

    candidates.sort(key=lambda m: (-m.length, m.start, m.entity))
    chosen: list[EntityMatch] = []
    for cand in candidates:
        if all(cand.end <= kept.start or cand.start >= kept.end for kept in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda m: m.start)
    return chosen


# --- intent matching ------------------------------------------------------------


def _assign_bindings(
    intent: Intent, matches: list[EntityMatch]
) -> tuple[dict[str, EntityMatch], tuple[str, ...]]:
    """Bind matches to parameters by entity type, in span order."""
    bindings: dict[str, EntityMatch] = {}
    consumed: set[int] = set()
    for param in intent.parameters:
        for i, m in enumerate(matches):
            if i in consumed or m.entity != param.entity:
                continue
            bindings[param.name] = m
            consumed.add(i)
            break
    missing = tuple(
        p.name for p in intent.parameters if p.required and p.name not in bindings
    )
    return bindings, missing


def _slotted_utterance(utterance: str, bindings: dict[str, EntityMatch]) -> str:
    """Replace bound entity spans with their parameter names."""
    spans = sorted(((m.start, m.end, name) for name, m in bindings.items()))
    out: list[str] = []
    cursor = 0
    for start, end, name in spans:
        out.append(utterance[cursor:start])
        out.append(name)
        cursor = end
    out.append(utterance[cursor:])
    return "".join(out)


def match_intent(
    utterance: str,
    model: IntentModel,
    matches: list[EntityMatch],
    cfg: RuntimeConfig | None = None,
) -> MatchResult:
    """Pick the intent whose training sentences best overlap the utterance.

    Below the threshold the fallback intent is returned with score 0.
    """
    cfg = cfg or RuntimeConfig()
    best: tuple[float, int, str] | None = None
    best_result: MatchResult | None = None
    for intent in model.intents:
        if intent.name == model.fallback:
            continue
        bindings, missing = _assign_bindings(intent, matches)
        utter_tokens = set(tokenize(_slotted_utterance(utterance, bindings)))
        score = 0.0
        for sentence in intent.training_sentences:
            template_tokens = set(tokenize(sentence.template))
            if not template_tokens:
                continue
            overlap = len(utter_tokens & template_tokens) / len(template_tokens)
            score = max(score, overlap)
        bound_required = sum(
            1 for p in intent.parameters if p.required and p.name in bindings
        )
        key = (-score, -bound_required, intent.name)
        if best is None or key < best:
            best = key
            best_result = MatchResult(
                intent=intent.name,
                score=score,
                bindings=bindings,
                missing_required=missing,
            )
    if best_result is not None and best_result.score >= cfg.match_threshold:
        return best_result
    return MatchResult(intent=model.fallback, score=0.0)


# --- execution --------------------------------------------------------------------


_FILTER_SUFFIXES = ("_gt", "_lt", "_from", "_to")


def _column_index(table: RawTable, schema: DataSchema, field_name: str) -> int | None:
    for i, f in enumerate(schema.fields):
        if f.name == field_name and i < len(table.headers):
            return i
    return None


def _list_predicates(
    intent: Intent,
    bindings: dict[str, EntityMatch],
    model: IntentModel,
    table: RawTable,
    schema: DataSchema,
    cfg: RuntimeConfig,
):
    """Decode filter predicates from a List action's bound parameters.

    Parameter naming conventions carry the semantics: `<field>_gt` /
    `<field>_lt` with a number entity compare numerically; `<field>_from` /
    `<field>_to` with a date entity bound an inclusive date range; a
    CustomValues-typed parameter filters its field by equality.
    """
    predicates = []
    for name, match in bindings.items():
        param = intent.parameter_named(name)
        if param is None:
            continue
        entity = model.entity_named(param.entity)
        if entity is None:
            continue
        if entity.kind is EntityKind.CUSTOM:
            field_name = entity.name[: -len("_value")] if entity.name.endswith("_value") else name
            col = _column_index(table, schema, field_name)
            if col is None:
                continue
            wanted = str(match.value).lower()
            predicates.append(lambda row, c=col, w=wanted: row[c].lower() == w)
        elif entity.kind is EntityKind.NUMBER and name.endswith(("_gt", "_lt")):
            field_name, _, op = name.rpartition("_")
            col = _column_index(table, schema, field_name)
            if col is None:
                continue
            bound = float(match.value)
            if op == "gt":
                predicates.append(
                    lambda row, c=col, b=bound, s=cfg.decimal_separator: is_numeric(row[c], s)
                    and parse_number(row[c], s) > b
                )
            else:
                predicates.append(
                    lambda row, c=col, b=bound, s=cfg.decimal_separator: is_numeric(row[c], s)
                    and parse_number(row[c], s) < b
                )
        elif entity.kind is EntityKind.DATE and name.endswith(("_from", "_to")):
            field_name, _, op = name.rpartition("_")
            col = _column_index(table, schema, field_name)
            if col is None:
                continue
            bound_dt = datetime.fromisoformat(str(match.value))

            def date_pred(row, c=col, b=bound_dt, lower=(op == "from")):
                parsed = parse_datetime(row[c], cfg.date_formats)
                if parsed is None:
                    return False
                return parsed >= b if lower else parsed <= b

            predicates.append(date_pred)
    return predicates


def _numeric_values(table: RawTable, col: int, cfg: RuntimeConfig) -> list[float]:
    return [
        parse_number(cell, cfg.decimal_separator)
        for cell in table.column(col)
        if is_numeric(cell, cfg.decimal_separator)
    ]


def _rows_reply(indices: list[int], table: RawTable, intent: str, score: float) -> BotReply:
    rows = tuple((i, table.rows[i]) for i in indices)
    n = len(indices)
    text = "No matching rows." if n == 0 else f"Found {n} matching row{'s' if n != 1 else ''}."
    return BotReply(
        kind=ReplyKind.ROWS, text=text, rows=rows, matched_intent=intent, score=score
    )


_AGG_WORDS = {"min": "minimum", "max": "maximum", "sum": "total", "avg": "average"}


def execute(
    result: MatchResult,
    table: RawTable,
    schema: DataSchema,
    intents: IntentModel,
    ops: OperationModel,
    cfg: RuntimeConfig | None = None,
) -> BotReply:
    """Run the operation bound to a completed match and build the reply.

    Pre: result.missing_required is empty. Raises MutationDisabledError and
    EmptyAggregateError; the chat loop turns those into reply text.
    """
    cfg = cfg or RuntimeConfig()
    intent = intents.intent_named(result.intent)
    if intent is None or intent.action == "fallback":
        return BotReply(
            kind=ReplyKind.FALLBACK,
            text="Sorry, I did not understand that. Try asking about the data fields.",
            matched_intent=result.intent,
            score=result.score,
        )
    if intent.action == "help":
        parts = []
        for f in schema.fields:
            kind = f.datatype.value + (", categorical" if f.categorical else "")
            parts.append(f"{f.display_name} ({kind})")
        return BotReply(
            kind=ReplyKind.HELP,
            text="You can ask about: " + "; ".join(parts) + ".",
            matched_intent=result.intent,
            score=result.score,
        )

    op = ops.op_named(intent.action)
    if op is None:
        return BotReply(
            kind=ReplyKind.FALLBACK,
            text=f"No operation named {intent.action!r} is available.",
            matched_intent=result.intent,
            score=result.score,
        )

    if op.mutating and not cfg.enable_mutation:
        raise MutationDisabledError(f"operation {op.name} is mutating and mutation is disabled")

    if op.kind is CrudKind.LIST:
        predicates = _list_predicates(intent, result.bindings, intents, table, schema, cfg)
        indices = [
            i for i, row in enumerate(table.rows) if all(p(row) for p in predicates)
        ]
        return _rows_reply(indices, table, result.intent, result.score)

    if op.kind is CrudKind.READ_BY_FIELD:
        col = _column_index(table, schema, op.target_field or "")
        if col is None:
            return BotReply(
                kind=ReplyKind.FALLBACK,
                text=f"Field {op.target_field!r} is not in the table.",
                matched_intent=result.intent,
                score=result.score,
            )
        binding = None
        for name, match in result.bindings.items():
            param = intent.parameter_named(name)
            if param is not None and param.entity == f"{op.target_field}_value":
                binding = match
                break
        if binding is None and result.bindings:
            binding = next(iter(result.bindings.values()))
        if binding is None:
            return BotReply(
                kind=ReplyKind.FALLBACK,
                text=f"I need a value for {op.target_field}.",
                matched_intent=result.intent,
                score=result.score,
            )
        wanted = str(binding.value).lower()
        indices = [i for i, row in enumerate(table.rows) if row[col].lower() == wanted]
        return _rows_reply(indices, table, result.intent, result.score)

    if op.kind is CrudKind.AGGREGATE:
        if op.agg_fn == "count":
            if op.target_field is None:
                n = table.row_count
                return BotReply(
                    kind=ReplyKind.SCALAR,
                    text=f"There are {n} rows.",
                    scalar=n,
                    matched_intent=result.intent,
                    score=result.score,
                )
            col = _column_index(table, schema, op.target_field)
            target = schema.field_named(op.target_field)
            if col is None or target is None:
                raise EmptyAggregateError(op.target_field)
            if target.datatype is DataType.NUMERIC:
                n = len(_numeric_values(table, col, cfg))
            elif target.datatype is DataType.DATETIME:
                n = sum(
                    1 for c in table.column(col) if parse_datetime(c, cfg.date_formats)
                )
            else:
                n = sum(1 for c in table.column(col) if c != "")
            return BotReply(
                kind=ReplyKind.SCALAR,
                text=f"{n} values in {target.display_name}.",
                scalar=n,
                matched_intent=result.intent,
                score=result.score,
            )
        col = _column_index(table, schema, op.target_field or "")
        target = schema.field_named(op.target_field or "")
        if col is None or target is None:
            raise EmptyAggregateError(op.target_field or "?")
        values = _numeric_values(table, col, cfg)
        if op.agg_fn == "sum":
            value = float(sum(values))
        elif not values:
            raise EmptyAggregateError(target.name)
        elif op.agg_fn == "min":
            value = min(values)
        elif op.agg_fn == "max":
            value = max(values)
        else:  # avg
            value = sum(values) / len(values)
        word = _AGG_WORDS.get(op.agg_fn or "", op.agg_fn or "")
        return BotReply(
            kind=ReplyKind.SCALAR,
            text=f"The {word} of {target.display_name} is {format_number(value)}.",
            scalar=value,
            matched_intent=result.intent,
            score=result.score,
        )

    return BotReply(
        kind=ReplyKind.FALLBACK,
        text=f"Operation kind {op.kind.value} is not supported by this runtime.",
        matched_intent=result.intent,
        score=result.score,
    )


# --- chat orchestration ---------------------------------------------------------


class BotEngine:
    """Holds one loaded bundle context and serves chat turns.

    The loaded table is immutable; enabled mutations replace the engine's
    working copy and never touch the original objects or disk.
    """

    def __init__(
        self,
        table: RawTable,
        schema: DataSchema,
        intents: IntentModel,
        ops: OperationModel,
        cfg: RuntimeConfig | None = None,
    ):
        self.loaded_table = table
        self.table = table
        self.schema = schema
        self.intents = intents
        self.ops = ops
        self.cfg = cfg or RuntimeConfig()

    def new_session(self, session_id: str) -> Session:
        return Session(id=session_id)

    def chat(self, session: Session, utterance: str) -> BotReply:
        """One conversation turn: recognize, match, clarify or execute."""
        if session.pending is not None:
            return self._continue_clarification(session, utterance)

        matches = recognize_entities(utterance, list(self.intents.entities), self.cfg)
        result = match_intent(utterance, self.intents, matches, self.cfg)
        if result.intent == self.intents.fallback:
            return self._fallback()
        if result.missing_required:
            param_name = result.missing_required[0]
            intent = self.intents.intent_named(result.intent)
            param = intent.parameter_named(param_name) if intent else None
            prompt = (param.prompt if param and param.prompt else f"Please provide {param_name}.")
            session.pending = PendingClarification(result=result, param=param_name)
            return BotReply(
                kind=ReplyKind.PROMPT,
                text=prompt,
                matched_intent=result.intent,
                score=result.score,
            )
        return self._execute_safe(result)

    def _continue_clarification(self, session: Session, utterance: str) -> BotReply:
        pending = session.pending
        assert pending is not None
        intent = self.intents.intent_named(pending.result.intent)
        param = intent.parameter_named(pending.param) if intent else None
        entity = self.intents.entity_named(param.entity) if param else None
        if intent is None or param is None or entity is None:
            session.pending = None
            return self._fallback()

        matches = recognize_entities(utterance, [entity], self.cfg)
        right = [m for m in matches if m.entity == entity.name]
        if len(right) != 1:
            if pending.reprompted:
                session.pending = None
                return self._fallback()
            pending.reprompted = True
            return BotReply(
                kind=ReplyKind.PROMPT,
                text=param.prompt or f"Please provide {param.name}.",
                matched_intent=intent.name,
                score=pending.result.score,
            )

        bindings = dict(pending.result.bindings)
        bindings[param.name] = right[0]
        missing = tuple(
            p.name
            for p in intent.parameters
            if p.required and p.name not in bindings
        )
        session.pending = None
        if missing:
            # One clarification turn maximum; further gaps fall back.
            return self._fallback()
        result = replace(pending.result, bindings=bindings, missing_required=())
        return self._execute_safe(result)

    def _execute_safe(self, result: MatchResult) -> BotReply:
        intent = self.intents.intent_named(result.intent)
        op = self.ops.op_named(intent.action) if intent else None
        if op is not None and op.mutating:
            return self._execute_mutation(result, intent, op)
        try:
            return execute(result, self.table, self.schema, self.intents, self.ops, self.cfg)
        except EmptyAggregateError as exc:
            return BotReply(
                kind=ReplyKind.FALLBACK,
                text=f"No data to aggregate for {exc.field}.",
                matched_intent=result.intent,
                score=result.score,
            )

    def _execute_mutation(self, result: MatchResult, intent: Intent, op) -> BotReply:
        if not self.cfg.enable_mutation:
            return BotReply(
                kind=ReplyKind.FALLBACK,
                text="Mutating operations are disabled for this bot.",
                matched_intent=result.intent,
                score=result.score,
            )
        reply, new_rows = apply_mutation(
            op, intent, result, self.table, self.schema, self.intents, self.cfg
        )
        if new_rows is not None:
            self.table = replace(self.table, rows=new_rows)
        return reply

    def _fallback(self) -> BotReply:
        return BotReply(
            kind=ReplyKind.FALLBACK,
            text="Sorry, I did not understand that. Try asking about the data fields.",
            matched_intent=self.intents.fallback,
            score=0.0,
        )


def apply_mutation(
    op,
    intent: Intent,
    result: MatchResult,
    table: RawTable,
    schema: DataSchema,
    intents: IntentModel,
    cfg: RuntimeConfig,
) -> tuple[BotReply, tuple[tuple[str, ...], ...] | None]:
    """Minimal mutation semantics over an in-memory row tuple.

    Create appends a row (bound categorical values fill their columns);
    Delete removes the row named by a bound number (1-based) or the last
    row; Update writes bound categorical values into the addressed row.
    Returns the reply and the new row tuple (None = unchanged).
    """
    rows = list(table.rows)
    width = len(table.headers)

    def bound_number() -> int | None:
        for name, match in result.bindings.items():
            param = intent.parameter_named(name)
            entity = intents.entity_named(param.entity) if param else None
            if entity is not None and entity.kind is EntityKind.NUMBER:
                return int(float(match.value))
        return None

    def categorical_writes() -> list[tuple[int, str]]:
        writes = []
        for name, match in result.bindings.items():
            param = intent.parameter_named(name)
            entity = intents.entity_named(param.entity) if param else None
            if entity is None or entity.kind is not EntityKind.CUSTOM:
                continue
            field_name = (
                entity.name[: -len("_value")] if entity.name.endswith("_value") else name
            )
            col = _column_index(table, schema, field_name)
            if col is not None:
                writes.append((col, str(match.value)))
        return writes

    if op.kind is CrudKind.CREATE:
        cells = [""] * width
        for col, value in categorical_writes():
            cells[col] = value
        rows.append(tuple(cells))
        reply = BotReply(
            kind=ReplyKind.SCALAR,
            text=f"Created row {len(rows)}.",
            scalar=len(rows),
            matched_intent=result.intent,
            score=result.score,
        )
        return reply, tuple(rows)

    if op.kind is CrudKind.DELETE:
        index = bound_number()
        target = (index - 1) if index is not None else len(rows) - 1
        if not 0 <= target < len(rows):
            reply = BotReply(
                kind=ReplyKind.FALLBACK,
                text=f"Row {target + 1} does not exist.",
                matched_intent=result.intent,
                score=result.score,
            )
            return reply, None
        del rows[target]
        reply = BotReply(
            kind=ReplyKind.SCALAR,
            text=f"Deleted row {target + 1}.",
            scalar=len(rows),
            matched_intent=result.intent,
            score=result.score,
        )
        return reply, tuple(rows)

    # Update: needs a row address and at least one categorical value to write.
    index = bound_number()
    writes = categorical_writes()
    if index is None or not writes:
        reply = BotReply(
            kind=ReplyKind.FALLBACK,
            text="Updating needs a row number and a value to write.",
            matched_intent=result.intent,
            score=result.score,
        )
        return reply, None
    target = index - 1
    if not 0 <= target < len(rows):
        reply = BotReply(
            kind=ReplyKind.FALLBACK,
            text=f"Row {index} does not exist.",
            matched_intent=result.intent,
            score=result.score,
        )
        return reply, None
    cells = list(rows[target])
    for col, value in writes:
        cells[col] = value
    rows[target] = tuple(cells)
    reply = BotReply(
        kind=ReplyKind.SCALAR,
        text=f"Updated row {index}.",
        scalar=index,
        matched_intent=result.intent,
        score=result.score,
    )
    return reply, tuple(rows)
