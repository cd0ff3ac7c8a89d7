"""Batch command line: serve, check, menu, search, and grammar expansion.

Set ENGINE_LOG to a level name (debug, info, warning, ...) to adjust
logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import wire
from .jsonc import parse
from .menu import extract_query_at_cursor, filter_menu, menu_for, schema_search
from .schema import load_schema, validate
from .service import Engine, suggestion_edits
from .tracery import TraceryGrammar, expand
from .views import default_registry


def _configure_logging() -> None:
    level = os.environ.get("ENGINE_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _load_doc(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_schema_file(path: str):
    return load_schema(Path(path).read_text(encoding="utf-8"), path)


def cmd_serve(args: argparse.Namespace) -> int:
    engine = Engine()
    if args.stdio:
        from .server import serve_stdio

        return serve_stdio(engine)
    from .server import serve_websocket

    ui_dir = args.ui_dir if args.ui else None
    return serve_websocket(engine, args.port, ui_dir)


def cmd_check(args: argparse.Namespace) -> int:
    text = _load_doc(args.file)
    tree = parse(text)
    rows = [wire.parse_diagnostic_payload(tree, d) for d in tree.diagnostics]
    if args.schema:
        doc = _load_schema_file(args.schema)
        rows.extend(wire.validation_diagnostic_payload(tree, d) for d in validate(tree, doc))
    for row in rows:
        print(json.dumps(row, sort_keys=True, ensure_ascii=False))
    has_errors = any(row["severity"] == "error" for row in rows)
    return 1 if has_errors else 0


def cmd_menu(args: argparse.Namespace) -> int:
    text = _load_doc(args.file)
    tree = parse(text)
    schema = _load_schema_file(args.schema) if args.schema else None
    menu = menu_for(tree, schema, default_registry(), args.offset)
    query = args.query or extract_query_at_cursor(tree, args.offset)
    if query:
        menu = filter_menu(menu, query)
    payload = wire.menu_payload(tree, menu, [None] * len(menu.items))
    payload["query"] = query
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    schema = _load_schema_file(args.schema)
    text = _load_doc(args.file) if args.file else "{}"
    tree = parse(text)
    for suggestion in schema_search(tree, schema, args.query, args.limit):
        edits = suggestion_edits(tree, suggestion)
        print(
            json.dumps(
                wire.suggestion_payload(tree, suggestion, edits), sort_keys=True, ensure_ascii=False
            )
        )
    return 0


def cmd_tracery_expand(args: argparse.Namespace) -> int:
    value = json.loads(_load_doc(args.file))
    grammar = TraceryGrammar.from_value(value)
    trace = expand(grammar, args.seed, args.depth_limit)
    print(json.dumps({"output": trace.output, "seed": args.seed}, sort_keys=True, ensure_ascii=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="engine", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the RPC server")
    serve.add_argument("--port", type=int, default=8787)
    serve.add_argument("--stdio", action="store_true", help="newline JSON-RPC on stdio")
    serve.add_argument("--ui", action="store_true", help="also serve the browser editor")
    serve.add_argument("--ui-dir", default="frontend", help="static UI directory")
    serve.set_defaults(func=cmd_serve)

    check = sub.add_parser("check", help="parse + validate a file; diagnostics as JSON lines")
    check.add_argument("file")
    check.add_argument("--schema")
    check.set_defaults(func=cmd_check)

    menu = sub.add_parser("menu", help="print the structure-editor menu at an offset")
    menu.add_argument("file")
    menu.add_argument("--schema")
    menu.add_argument("--offset", type=int, required=True)
    menu.add_argument("--query", default="")
    menu.set_defaults(func=cmd_menu)

    search = sub.add_parser("search", help="schema search producing insertable snippets")
    search.add_argument("--schema", required=True)
    search.add_argument("--query", required=True)
    search.add_argument("--limit", type=int, default=10)
    search.add_argument("--file", default=None, help="document to insert into (default: empty object)")
    search.set_defaults(func=cmd_search)

    tracery = sub.add_parser("tracery", help="generative grammar commands")
    tracery_sub = tracery.add_subparsers(dest="tracery_command", required=True)
    texp = tracery_sub.add_parser("expand", help="expand a grammar file deterministically")
    texp.add_argument("file")
    texp.add_argument("--seed", type=int, required=True)
    texp.add_argument("--depth-limit", type=int, default=64)
    texp.set_defaults(func=cmd_tracery_expand)

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
