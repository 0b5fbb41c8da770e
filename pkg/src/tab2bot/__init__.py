"""tab2bot: from a tabular data source to a running chatbot through
explicit, hand-refinable models.

Pipeline stages: parse a CSV into a table, infer the data schema, derive
the CRUD operation model, generate the conversation model, emit everything
as a self-contained bundle, and execute it via the REPL or HTTP service.
"""

from .bundle import BundleManifest, LoadedBundle, emit_bundle, load_bundle
from .config import HeuristicConfig, InferenceConfig, ParseConfig, RuntimeConfig
from .conversation import (
    EntityEntry,
    EntityKind,
    EntityType,
    Intent,
    IntentModel,
    Parameter,
    TrainingSentence,
    build_entity_types,
    generate_intents,
    validate_intent_model,
)
from .crud import CrudKind, CrudOp, OperationModel, generate_crud, validate_operation_model
from .ingest import ColumnStats, RawTable, column_profile, parse_table, write_table_csv
from .runtime import (
    BotEngine,
    BotReply,
    EntityMatch,
    MatchResult,
    ReplyKind,
    Session,
    execute,
    match_intent,
    recognize_entities,
)
from .schema import (
    DataSchema,
    DataType,
    Field,
    classify_categorical,
    enrich_with_synonyms,
    infer_field_type,
    infer_schema,
    load_thesaurus,
    validate_schema,
)

__version__ = "0.1.0"

__all__ = [
    "BotEngine",
    "BotReply",
    "BundleManifest",
    "ColumnStats",
    "CrudKind",
    "CrudOp",
    "DataSchema",
    "DataType",
    "EntityEntry",
    "EntityKind",
    "EntityMatch",
    "EntityType",
    "Field",
    "HeuristicConfig",
    "InferenceConfig",
    "Intent",
    "IntentModel",
    "LoadedBundle",
    "MatchResult",
    "OperationModel",
    "Parameter",
    "ParseConfig",
    "RawTable",
    "ReplyKind",
    "RuntimeConfig",
    "Session",
    "TrainingSentence",
    "build_entity_types",
    "classify_categorical",
    "column_profile",
    "emit_bundle",
    "enrich_with_synonyms",
    "execute",
    "generate_crud",
    "generate_intents",
    "infer_field_type",
    "infer_schema",
    "load_bundle",
    "load_thesaurus",
    "match_intent",
    "parse_table",
    "recognize_entities",
    "validate_intent_model",
    "validate_operation_model",
    "validate_schema",
    "write_table_csv",
]
