"""Command line surface: `tab2bot infer|generate|repl|serve`.

Each subcommand runs one pipeline stage over explicit files so every
intermediate model can be inspected and hand-refined before the next
stage. The `TAB2BOT_CONFIG` env var may point to a key-value config file
supplying defaults; command line flags override it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .bundle import canonical_json, emit_bundle, load_bundle
from .config import (
    HeuristicConfig,
    InferenceConfig,
    ParseConfig,
    RuntimeConfig,
    heuristic_config_from_kv,
    inference_config_from_kv,
    load_kv_file,
    runtime_config_from_kv,
)
from .conversation import build_entity_types, generate_intents
from .crud import generate_crud
from .errors import (
    ConfigFormatError,
    Tab2BotError,
    ValidationFailedError,
)
from .ingest import parse_table
from .runtime import BotEngine, ReplyKind, Session
from .schema import DataSchema, enrich_with_synonyms, infer_schema, load_thesaurus, validate_schema

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4


def _env_config() -> dict[str, str]:
    path = os.environ.get("TAB2BOT_CONFIG")
    if not path:
        return {}
    return load_kv_file(Path(path))


def _parse_config(args: argparse.Namespace) -> ParseConfig:
    return ParseConfig(
        delimiter=args.delimiter,
        quote=args.quote,
        has_header=not args.no_header,
        max_rows=args.max_rows,
    )


def _inference_config(args: argparse.Namespace) -> InferenceConfig:
    cfg = inference_config_from_kv(_env_config())
    updates: dict[str, object] = {}
    if args.threshold is not None:
        updates["diversity_threshold"] = args.threshold
    if args.tolerance is not None:
        updates["type_tolerance"] = args.tolerance
    if args.date_format:
        updates["date_formats"] = tuple(args.date_format)
    if args.decimal_separator is not None:
        updates["decimal_separator"] = args.decimal_separator
    return replace(cfg, **updates) if updates else cfg


def cmd_infer(args: argparse.Namespace) -> int:
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        icfg = _inference_config(args)
        table = parse_table(data, _parse_config(args), name=Path(args.input).stem)
        schema = infer_schema(table, icfg)
    except (Tab2BotError, ConfigFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    out = Path(args.out)
    try:
        out.write_text(canonical_json(schema.to_dict()), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO

    name_w = max([len(f.display_name) for f in schema.fields] + [5])
    print(f"{'field':<{name_w}}  {'type':<8}  {'diversity':>9}  categorical")
    for f in schema.fields:
        print(
            f"{f.display_name:<{name_w}}  {f.datatype.value:<8}  {f.diversity:>9}  "
            f"{'yes' if f.categorical else 'no'}"
        )
    print(f"{schema.row_count} rows -> {out}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        schema_data = json.loads(Path(args.schema).read_text(encoding="utf-8"))
        data = Path(args.data).read_bytes()
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: {args.schema}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        schema = DataSchema.from_dict(schema_data)
        table = parse_table(data, ParseConfig(), name=schema.name or Path(args.data).stem)
    except Tab2BotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    diagnostics = validate_schema(schema)
    if diagnostics:
        for d in diagnostics:
            print(f"invalid schema: {d}", file=sys.stderr)
        return EXIT_VALIDATION

    env = _env_config()
    try:
        if args.thesaurus:
            schema = enrich_with_synonyms(schema, load_thesaurus(Path(args.thesaurus)))
        hcfg = heuristic_config_from_kv(env)
        rcfg = runtime_config_from_kv(env)
        if args.enable_mutation:
            rcfg = replace(rcfg, enable_mutation=True)
        ops = generate_crud(schema)
        entities = build_entity_types(schema)
        intents = generate_intents(schema, ops, entities, hcfg)
        manifest = emit_bundle(schema, intents, ops, table, Path(args.out), rcfg)
    except ValidationFailedError as exc:
        for d in exc.diagnostics:
            print(f"validation: {d}", file=sys.stderr)
        return EXIT_VALIDATION
    except (Tab2BotError, ConfigFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: cannot write bundle: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"bundle written to {args.out} (data fingerprint {manifest.fingerprint[:12]})")
    return 0


def _load_bundle_or_exit(directory: str):
    try:
        return load_bundle(Path(directory))
    except ValidationFailedError as exc:
        for d in exc.diagnostics:
            print(f"validation: {d}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)
    except Tab2BotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _print_reply(reply) -> None:
    print(reply.text)
    if reply.kind is ReplyKind.ROWS and reply.rows:
        for index, cells in reply.rows[:10]:
            print(f"  [{index}] " + " | ".join(cells))
        if len(reply.rows) > 10:
            print(f"  ... and {len(reply.rows) - 10} more")


def cmd_repl(args: argparse.Namespace) -> int:
    bundle = _load_bundle_or_exit(args.bundle)
    engine = BotEngine(
        bundle.table, bundle.schema, bundle.intents, bundle.ops, bundle.runtime_config
    )
    session = Session(id="repl")
    print(f"{bundle.schema.name}: {bundle.table.row_count} rows. "
          ":intents lists intents, :quit exits.")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":intents":
            for intent in bundle.intents.intents:
                print(f"  {intent.name}")
            continue
        _print_reply(engine.chat(session, line))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    bundle = _load_bundle_or_exit(args.bundle)
    app = create_app(
        bundle,
        allow_origin=args.allow_origin,
        enable_mutation=True if args.enable_mutation else None,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tab2bot",
        description="Turn a tabular data source into a running chatbot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    infer = sub.add_parser("infer", help="infer a data schema from a CSV file")
    infer.add_argument("input", help="CSV file (UTF-8, RFC-4180 quoting)")
    infer.add_argument("--out", default="schema.model", help="schema file to write")
    infer.add_argument("--threshold", type=int, default=None, help="diversity threshold")
    infer.add_argument("--tolerance", type=float, default=None, help="type tolerance in [0,0.5)")
    infer.add_argument(
        "--date-format", action="append", default=None,
        help="date pattern such as YYYY-MM-DD (repeatable)",
    )
    infer.add_argument("--decimal-separator", default=None, help="decimal separator character")
    infer.add_argument("--delimiter", default=",", help="field delimiter")
    infer.add_argument("--quote", default='"', help="quote character")
    infer.add_argument("--no-header", action="store_true", help="input has no header row")
    infer.add_argument("--max-rows", type=int, default=None, help="cap on data rows")

    generate = sub.add_parser("generate", help="generate models and emit a bot bundle")
    generate.add_argument("schema", help="schema file from `infer` (hand edits welcome)")
    generate.add_argument("--data", required=True, help="CSV file to bundle")
    generate.add_argument("--out", required=True, help="bundle directory")
    generate.add_argument("--thesaurus", default=None, help="thesaurus file for synonyms")
    generate.add_argument("--enable-mutation", action="store_true",
                          help="allow create/update/delete at runtime (in-memory only)")

    repl = sub.add_parser("repl", help="chat with a bundle in the terminal")
    repl.add_argument("bundle", help="bundle directory")

    serve = sub.add_parser("serve", help="serve a bundle over HTTP")
    serve.add_argument("bundle", help="bundle directory")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--allow-origin", default=None, help="CORS origin for the chat UI")
    serve.add_argument("--enable-mutation", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "infer": cmd_infer,
        "generate": cmd_generate,
        "repl": cmd_repl,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
