"""Document sessions and the JSON-RPC method surface.

One session owns a document's text, schema binding, and view registry.
Each accepted text change bumps the version; menus and traces are valid
only for the version they were served on, which prevents stale-state
races without client-side locking.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import wire
from .edits import EditAction, INSERT_ARRAY_ELEMENT, INSERT_PROPERTY, REPLACE_VALUE, TextEdit, apply_edits, compile_action
from .errors import (
    ActionRefError,
    EngineError,
    EditConflictError,
    ExpansionDepthError,
    InputEncodingError,
    KindError,
    NodeError,
    NoEditError,
    OffsetError,
    PathError,
    RegistryError,
    SchemaRefError,
    SessionError,
    StaleVersionError,
    SymbolError,
    TraceStaleError,
    UnsupportedRefError,
)
from .jsonc import Index, Key, KeyPath, Kind, SyntaxTree, parse
from .menu import Menu, extract_query_at_cursor, filter_menu, menu_for, schema_search
from .schema import SchemaDoc, load_schema, validate
from .tracery import ExpansionTrace, TraceryGrammar, expand, synthesize
from .views import ViewRegistry, default_registry, resolve_anchors
from .wire import view_spec_from_payload

JSONRPC_VERSION = "2.0"

_ERROR_CODES: list[tuple[type, int]] = [
    (StaleVersionError, -32010),
    (SessionError, -32011),
    (ActionRefError, -32012),
    (SchemaRefError, -32013),
    (UnsupportedRefError, -32014),
    (PathError, -32015),
    (KindError, -32016),
    (EditConflictError, -32017),
    (TraceStaleError, -32018),
    (SymbolError, -32019),
    (ExpansionDepthError, -32020),
    (RegistryError, -32021),
    (OffsetError, -32022),
    (NodeError, -32023),
    (NoEditError, -32024),
    (InputEncodingError, -32025),
    (EngineError, -32000),
]


def _error_code(exc: Exception) -> int:
    for klass, code in _ERROR_CODES:
        if isinstance(exc, klass):
            return code
    return -32603


class _InvalidParams(Exception):
    pass


@dataclass
class Session:
    doc_id: str
    text: str
    tree: SyntaxTree
    schema: SchemaDoc | None
    registry: ViewRegistry
    version: int = 1
    served_actions: dict[str, EditAction] = field(default_factory=dict)
    served_version: int = 0
    traces: dict[str, tuple[int, ExpansionTrace]] = field(default_factory=dict)
    suggestion_ranges: list[tuple[int, int]] = field(default_factory=list)
    lock: threading.RLock = field(default_factory=threading.RLock)
    _ref_counter: int = 0
    _trace_counter: int = 0


class Engine:
    """Session store plus the method implementations behind the protocol."""

    def __init__(self, schema_base: str | Path | None = None):
        self.sessions: dict[str, Session] = {}
        self.schema_base = Path(schema_base) if schema_base else Path.cwd()
        self._lock = threading.RLock()

    # -- session plumbing

    def _session(self, doc_id: Any) -> Session:
        if not isinstance(doc_id, str):
            raise _InvalidParams("docId must be a string")
        session = self.sessions.get(doc_id)
        if session is None:
            raise SessionError(f"unknown document {doc_id!r}")
        return session

    def _load_schema_ref(self, schema_ref: Any) -> SchemaDoc | None:
        if schema_ref is None:
            return None
        if isinstance(schema_ref, str):
            schema_ref = {"path": schema_ref}
        if not isinstance(schema_ref, dict):
            raise _InvalidParams("schemaRef must be null, a path string, or an object")
        if "inline" in schema_ref:
            inline = schema_ref["inline"]
            return load_schema(inline if isinstance(inline, (str, dict, bool)) else json.dumps(inline))
        if "path" in schema_ref:
            path = Path(schema_ref["path"])
            if not path.is_absolute():
                path = self.schema_base / path
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise SchemaRefError(f"cannot read schema {path}: {exc}") from exc
            return load_schema(text, str(path))
        raise _InvalidParams("schemaRef needs 'path' or 'inline'")

    def _build_registry(self, manifest: Any) -> ViewRegistry:
        registry = default_registry()
        if manifest is None:
            return registry
        if not isinstance(manifest, dict):
            raise _InvalidParams("viewManifest must be an object")
        for view_id in manifest.get("remove") or []:
            registry = registry.remove(str(view_id))
        for item in manifest.get("views") or []:
            registry = registry.register(view_spec_from_payload(item))
        return registry

    def _refresh(self, session: Session, text: str) -> None:
        session.text = text
        session.tree = parse(text)
        session.version += 1
        session.served_actions.clear()
        session.served_version = 0
        session.traces.clear()

    def _diagnostics_payload(self, session: Session) -> list[dict]:
        tree = session.tree
        out = [wire.parse_diagnostic_payload(tree, d) for d in tree.diagnostics]
        if session.schema is not None:
            out.extend(
                wire.validation_diagnostic_payload(tree, d) for d in validate(tree, session.schema)
            )
        return out

    def _status_payload(self, session: Session) -> dict:
        _, status = resolve_anchors(session.tree, session.schema, session.registry)
        return {"viewsDeactivated": status.views_deactivated}

    # -- methods

    def open(self, doc_id: str, text: str, schema_ref: Any = None, view_manifest: Any = None) -> dict:
        if not isinstance(doc_id, str) or not isinstance(text, str):
            raise _InvalidParams("doc/open needs docId and text strings")
        with self._lock:
            if doc_id in self.sessions:
                raise SessionError(f"document {doc_id!r} already open")
            schema = self._load_schema_ref(schema_ref)
            registry = self._build_registry(view_manifest)
            session = Session(doc_id, text, parse(text), schema, registry)
            self.sessions[doc_id] = session
        with session.lock:
            return {
                "version": session.version,
                "diagnostics": self._diagnostics_payload(session),
                "status": self._status_payload(session),
            }

    def update(self, doc_id: str, base_version: Any, edits: Any, suggestion: bool = False) -> dict:
        session = self._session(doc_id)
        with session.lock:
            if base_version != session.version:
                raise StaleVersionError(
                    f"baseVersion {base_version} != current {session.version}; refetch"
                )
            if not isinstance(edits, list):
                raise _InvalidParams("edits must be a list")
            batch = [wire.text_edit_from_payload(e) if isinstance(e, dict) else e for e in edits]
            new_text = apply_edits(session.text, batch)
            self._refresh(session, new_text)
            if suggestion:
                session.suggestion_ranges = _inserted_ranges(batch)
            else:
                session.suggestion_ranges = []
            return {
                "version": session.version,
                "diagnostics": self._diagnostics_payload(session),
                "status": self._status_payload(session),
            }

    def menu(self, doc_id: str, offset: Any, query: Any = None) -> dict:
        session = self._session(doc_id)
        with session.lock:
            if not isinstance(offset, int):
                raise _InvalidParams("offset must be an integer")
            menu = menu_for(session.tree, session.schema, session.registry, offset)
            effective = query if isinstance(query, str) and query else extract_query_at_cursor(
                session.tree, offset
            )
            if effective:
                menu = filter_menu(menu, effective)
            if session.served_version != session.version:
                session.served_actions.clear()
                session.served_version = session.version
            refs: list[str | None] = []
            for item in menu.items:
                if item.action is None:
                    refs.append(None)
                    continue
                session._ref_counter += 1
                ref = f"a{session.version}-{session._ref_counter}"
                session.served_actions[ref] = item.action
                refs.append(ref)
            payload = wire.menu_payload(session.tree, menu, refs)
            payload["version"] = session.version
            payload["query"] = effective
            return payload

    def apply_action(self, doc_id: str, base_version: Any, action_ref: Any) -> dict:
        session = self._session(doc_id)
        with session.lock:
            if base_version != session.version:
                raise StaleVersionError(
                    f"baseVersion {base_version} != current {session.version}; refetch"
                )
            if session.served_version != session.version or action_ref not in session.served_actions:
                raise ActionRefError(f"action ref {action_ref!r} expired or unknown")
            action = session.served_actions[action_ref]
            edits = compile_action(session.tree, action)
            edit_payloads = [wire.text_edit_payload(session.tree, e) for e in edits]
            new_text = apply_edits(session.text, edits)
            self._refresh(session, new_text)
            session.suggestion_ranges = []
            return {
                "version": session.version,
                "edits": edit_payloads,
                "diagnostics": self._diagnostics_payload(session),
                "status": self._status_payload(session),
            }

    def anchors(self, doc_id: str) -> dict:
        session = self._session(doc_id)
        with session.lock:
            resolved, status = resolve_anchors(session.tree, session.schema, session.registry)
            rows = []
            for anchor in resolved:
                row = wire.anchor_payload(session.tree, anchor)
                if any(s <= anchor.start and anchor.end <= e for s, e in session.suggestion_ranges):
                    row["payload"] = dict(row["payload"], suggestionFlag=True)
                rows.append(row)
            return {
                "version": session.version,
                "anchors": rows,
                "status": {"viewsDeactivated": status.views_deactivated},
            }

    def search(self, doc_id: str, query: Any, limit: Any = 10) -> dict:
        session = self._session(doc_id)
        with session.lock:
            if session.schema is None:
                raise SchemaRefError("document has no schema bound")
            if not isinstance(query, str) or not query:
                raise _InvalidParams("query must be a non-empty string")
            if not isinstance(limit, int) or limit <= 0:
                raise _InvalidParams("limit must be a positive integer")
            suggestions = schema_search(session.tree, session.schema, query, limit)
            rows = []
            for suggestion in suggestions:
                edits = suggestion_edits(session.tree, suggestion)
                rows.append(wire.suggestion_payload(session.tree, suggestion, edits))
            return {"version": session.version, "suggestions": rows}

    def tracery_expand(self, doc_id: str, seed: Any, depth_limit: Any = 64) -> dict:
        session = self._session(doc_id)
        with session.lock:
            if not isinstance(seed, int):
                raise _InvalidParams("seed must be an integer")
            grammar = self._grammar_of(session)
            trace = expand(grammar, seed, depth_limit if isinstance(depth_limit, int) else 64)
            session._trace_counter += 1
            trace_id = f"t{session.version}-{session._trace_counter}"
            session.traces[trace_id] = (session.version, trace)
            return {"version": session.version, "traceId": trace_id, "output": trace.output}

    def tracery_reverse(self, doc_id: str, trace_id: Any, edited_output: Any) -> dict:
        session = self._session(doc_id)
        with session.lock:
            entry = session.traces.get(trace_id)
            if entry is None:
                raise TraceStaleError(f"trace {trace_id!r} unknown or invalidated by an edit")
            version, trace = entry
            if version != session.version:
                raise TraceStaleError("document changed since the trace was created")
            if not isinstance(edited_output, str):
                raise _InvalidParams("editedOutput must be a string")
            grammar = self._grammar_of(session)
            result = synthesize(grammar, trace, edited_output)
            edits_payload = None
            if result.status == "applied" and result.grammar_edit is not None:
                symbol, rule_index, new_rule = result.grammar_edit
                action = EditAction(
                    REPLACE_VALUE, KeyPath.of(symbol, rule_index), value=new_rule, source="view"
                )
                edits = compile_action(session.tree, action)
                edits_payload = [wire.text_edit_payload(session.tree, e) for e in edits]
            return wire.sync_result_payload(result, edits_payload)

    def _grammar_of(self, session: Session) -> TraceryGrammar:
        try:
            value = session.tree.to_value()
        except ValueError as exc:
            raise SymbolError(f"document is not a plain grammar object: {exc}") from exc
        return TraceryGrammar.from_value(value)

    # -- dispatch

    METHODS = {
        "doc/open": lambda self, p: self.open(
            p.get("docId"), p.get("text"), p.get("schemaRef"), p.get("viewManifest")
        ),
        "doc/update": lambda self, p: self.update(
            p.get("docId"), p.get("baseVersion"), p.get("edits"), bool(p.get("suggestion", False))
        ),
        "doc/menu": lambda self, p: self.menu(p.get("docId"), p.get("offset"), p.get("query")),
        "doc/applyAction": lambda self, p: self.apply_action(
            p.get("docId"), p.get("baseVersion"), p.get("actionRef")
        ),
        "doc/anchors": lambda self, p: self.anchors(p.get("docId")),
        "schema/search": lambda self, p: self.search(
            p.get("docId"), p.get("query"), p.get("limit", 10)
        ),
        "tracery/expand": lambda self, p: self.tracery_expand(
            p.get("docId"), p.get("seed"), p.get("depthLimit", 64)
        ),
        "tracery/reverseEdit": lambda self, p: self.tracery_reverse(
            p.get("docId"), p.get("traceId"), p.get("editedOutput")
        ),
    }

    def handle(self, message: dict) -> dict | None:
        """One JSON-RPC request object in, one response object out (None for notifications)."""
        msg_id = message.get("id")
        method = message.get("method")
        params = message.get("params") or {}

        def respond(result: Any = None, error: dict | None = None) -> dict | None:
            if msg_id is None:
                return None
            if error is not None:
                return {"jsonrpc": JSONRPC_VERSION, "id": msg_id, "error": error}
            return {"jsonrpc": JSONRPC_VERSION, "id": msg_id, "result": result}

        if not isinstance(method, str) or method not in self.METHODS:
            return respond(error={"code": -32601, "message": f"method not found: {method!r}"})
        if not isinstance(params, dict):
            return respond(error={"code": -32602, "message": "params must be an object"})
        try:
            result = self.METHODS[method](self, params)
        except _InvalidParams as exc:
            return respond(error={"code": -32602, "message": str(exc)})
        except EngineError as exc:
            return respond(
                error={"code": _error_code(exc), "message": str(exc), "data": {"type": type(exc).__name__}}
            )
        except (ValueError, TypeError, KeyError) as exc:
            return respond(error={"code": -32602, "message": f"{type(exc).__name__}: {exc}"})
        return respond(result)

    def handle_line(self, line: str) -> str | None:
        """Newline-delimited JSON-RPC framing."""
        try:
            message = json.loads(line)
        except ValueError:
            return json.dumps(
                {
                    "jsonrpc": JSONRPC_VERSION,
                    "id": None,
                    "error": {"code": -32700, "message": "parse error"},
                },
                sort_keys=True,
            )
        if not isinstance(message, dict):
            return json.dumps(
                {
                    "jsonrpc": JSONRPC_VERSION,
                    "id": None,
                    "error": {"code": -32600, "message": "invalid request"},
                },
                sort_keys=True,
            )
        response = self.handle(message)
        if response is None:
            return None
        return json.dumps(response, sort_keys=True, ensure_ascii=False)


def _inserted_ranges(edits: list[TextEdit]) -> list[tuple[int, int]]:
    """Ranges the applied edits occupy in the resulting text."""
    out = []
    delta = 0
    for edit in sorted(edits, key=lambda e: e.start):
        start = edit.start + delta
        out.append((start, start + len(edit.new_text.encode("utf-8"))))
        delta += len(edit.new_text.encode("utf-8")) - (edit.end - edit.start)
    return out


def suggestion_edits(tree: SyntaxTree, suggestion) -> list[TextEdit]:
    """Text edits that splice a search suggestion into the document."""
    node = tree.resolve_key_path(suggestion.insertion_path)
    if node is None:
        return []
    remaining = suggestion.steps[len(suggestion.insertion_path.steps) :]
    if not remaining:
        return compile_action(
            tree, EditAction(REPLACE_VALUE, suggestion.insertion_path, value=suggestion.snippet)
        )
    head = remaining[0]
    if head[0] == "prop" and node.kind is Kind.OBJECT:
        value = suggestion.snippet[head[1]] if isinstance(suggestion.snippet, dict) else suggestion.snippet
        return compile_action(
            tree,
            EditAction(INSERT_PROPERTY, suggestion.insertion_path, name=head[1], value=value),
        )
    if head[0] == "items" and node.kind is Kind.ARRAY:
        value = suggestion.snippet[0] if isinstance(suggestion.snippet, list) else suggestion.snippet
        return compile_action(
            tree,
            EditAction(
                INSERT_ARRAY_ELEMENT,
                suggestion.insertion_path,
                index=len(tree.elements(node)),
                value=value,
            ),
        )
    return compile_action(
        tree, EditAction(REPLACE_VALUE, suggestion.insertion_path, value=suggestion.snippet)
    )
