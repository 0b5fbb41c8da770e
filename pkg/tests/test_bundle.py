from __future__ import annotations

import json

import pytest

from tab2bot import (
    Intent,
    IntentModel,
    RuntimeConfig,
    TrainingSentence,
    emit_bundle,
    load_bundle,
)
from tab2bot.bundle import BUNDLE_VERSION, MANIFEST_NAME, canonical_json
from tab2bot.errors import (
    BundleParseError,
    FingerprintMismatchWarning,
    ManifestMissingError,
    ValidationFailedError,
)


def _bundle_files(directory):
    return sorted(p.name for p in directory.iterdir())


def _emit(sample, directory, cfg=None):
    table, schema, intents, ops = sample
    return emit_bundle(schema, intents, ops, table, directory, cfg)


@pytest.fixture()
def sample_models(sample_table, sample_schema, sample_intents, sample_ops):
    return sample_table, sample_schema, sample_intents, sample_ops


def test_emit_writes_manifest_plus_five_files(sample_models, tmp_path):
    manifest = _emit(sample_models, tmp_path)
    assert _bundle_files(tmp_path) == [
        "bot.config",
        "data.csv",
        "intents.model",
        MANIFEST_NAME,
        "operations.model",
        "schema.model",
    ]
    assert manifest.version == BUNDLE_VERSION


def test_emit_twice_is_byte_identical(sample_models, tmp_path):
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    _emit(sample_models, dir_a)
    _emit(sample_models, dir_b)
    for name in _bundle_files(dir_a):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_emit_rejects_inconsistent_models(sample_models, tmp_path):
    table, schema, intents, ops = sample_models
    broken = IntentModel(
        intents=intents.intents
        + (
            Intent(
                name="ghost",
                training_sentences=(TrainingSentence("go"),),
                action="missing_op",
            ),
        ),
        entities=intents.entities,
        fallback=intents.fallback,
    )
    with pytest.raises(ValidationFailedError):
        emit_bundle(schema, broken, ops, table, tmp_path)
    assert not (tmp_path / MANIFEST_NAME).exists()


def test_load_round_trips_structurally(sample_models, tmp_path):
    table, schema, intents, ops = sample_models
    _emit(sample_models, tmp_path)
    loaded = load_bundle(tmp_path)
    assert loaded.schema == schema
    assert loaded.intents == intents
    assert loaded.ops == ops
    assert loaded.table == table
    assert loaded.runtime_config == RuntimeConfig()


def test_load_custom_runtime_config(sample_models, tmp_path):
    cfg = RuntimeConfig(match_threshold=0.75, enable_mutation=True)
    _emit(sample_models, tmp_path, cfg)
    assert load_bundle(tmp_path).runtime_config == cfg


def test_hand_edit_synonym_survives_reload(sample_models, tmp_path):
    table, schema, intents, ops = sample_models
    _emit(sample_models, tmp_path)
    schema_path = tmp_path / "schema.model"
    doc = json.loads(schema_path.read_text())
    target = next(f for f in doc["fields"] if f["name"] == "site")
    target["synonyms"] = ["venue"]
    schema_path.write_text(canonical_json(doc), encoding="utf-8")

    loaded = load_bundle(tmp_path)
    assert loaded.schema != schema
    for before, after in zip(schema.fields, loaded.schema.fields):
        if before.name == "site":
            assert after.synonyms == ("venue",)
        else:
            assert before == after


def test_corrupt_intents_reports_unbound_slot(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    intents_path = tmp_path / "intents.model"
    doc = json.loads(intents_path.read_text())
    doc["intents"][0]["training_sentences"].append("find {ghost_slot}")
    intents_path.write_text(canonical_json(doc), encoding="utf-8")

    with pytest.raises(ValidationFailedError) as err:
        load_bundle(tmp_path)
    diags = err.value.diagnostics
    assert any(d.code == "UnboundSlot" and "ghost_slot" in d.detail for d in diags)
    assert any("intents.model" in d.detail for d in diags)


def test_manifest_missing(tmp_path):
    with pytest.raises(ManifestMissingError):
        load_bundle(tmp_path)


def test_parse_error_carries_location(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    (tmp_path / "intents.model").write_text("{not json", encoding="utf-8")
    with pytest.raises(BundleParseError) as err:
        load_bundle(tmp_path)
    assert err.value.file == "intents.model"
    assert "line" in err.value.location


def test_unrecognized_version(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    doc = json.loads((tmp_path / MANIFEST_NAME).read_text())
    doc["version"] = "99"
    (tmp_path / MANIFEST_NAME).write_text(canonical_json(doc), encoding="utf-8")
    with pytest.raises(BundleParseError):
        load_bundle(tmp_path)


def test_fingerprint_mismatch_warns_but_loads(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    data_path = tmp_path / "data.csv"
    text = data_path.read_text(encoding="utf-8")
    data_path.write_text(text.replace("Paris", "Paris", 1) + "Extra Site,Paris,park,5,4.0,2001-01-01\n", encoding="utf-8")
    with pytest.warns(FingerprintMismatchWarning):
        loaded = load_bundle(tmp_path)
    assert loaded.table.row_count == 51


def test_missing_model_file(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    (tmp_path / "operations.model").unlink()
    with pytest.raises(BundleParseError) as err:
        load_bundle(tmp_path)
    assert err.value.file == "operations.model"


def test_no_absolute_paths_or_volatile_content(sample_models, tmp_path):
    _emit(sample_models, tmp_path)
    for name in _bundle_files(tmp_path):
        body = (tmp_path / name).read_text(encoding="utf-8")
        assert str(tmp_path) not in body
        assert body.endswith("\n")
