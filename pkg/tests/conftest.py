from __future__ import annotations

from pathlib import Path

import pytest

from tab2bot import (
    BotEngine,
    build_entity_types,
    enrich_with_synonyms,
    generate_crud,
    generate_intents,
    infer_schema,
    load_thesaurus,
    parse_table,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
SAMPLE_CSV = DATA_DIR / "city_sites.csv"
SAMPLE_THESAURUS = DATA_DIR / "thesaurus_en.txt"


@pytest.fixture(scope="session")
def sample_bytes() -> bytes:
    return SAMPLE_CSV.read_bytes()


@pytest.fixture(scope="session")
def sample_table(sample_bytes):
    return parse_table(sample_bytes, name="city_sites")


@pytest.fixture(scope="session")
def sample_schema(sample_table):
    schema = infer_schema(sample_table)
    return enrich_with_synonyms(schema, load_thesaurus(SAMPLE_THESAURUS))


@pytest.fixture(scope="session")
def sample_ops(sample_schema):
    return generate_crud(sample_schema)


@pytest.fixture(scope="session")
def sample_entities(sample_schema):
    return build_entity_types(sample_schema)


@pytest.fixture(scope="session")
def sample_intents(sample_schema, sample_ops, sample_entities):
    return generate_intents(sample_schema, sample_ops, sample_entities)


@pytest.fixture()
def sample_engine(sample_table, sample_schema, sample_intents, sample_ops):
    return BotEngine(sample_table, sample_schema, sample_intents, sample_ops)
