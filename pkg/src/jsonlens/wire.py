"""JSON payload shapes shared by the RPC server, the CLI, and clients.

Ranges carry byte offsets plus derived line/column pairs (0-based, byte
columns). Key paths serialize as lists of tagged steps.
"""

from __future__ import annotations

from typing import Any

from .edits import EditAction, TextEdit
from .jsonc import Index, Key, KeyName, KeyPath, ParseDiagnostic, SyntaxTree
from .menu import Menu, MenuItem, SearchSuggestion
from .schema import ValidationDiagnostic
from .tracery import SyncResult
from .views import Anchor, KeyPathQuery, Query, RegexQuery, SchemaNodeQuery, SyntaxNodeQuery, ViewSpec, WidgetDescriptor


def range_payload(tree: SyntaxTree, start: int, end: int) -> dict[str, Any]:
    start_line, start_col = tree.line_col(start)
    end_line, end_col = tree.line_col(end)
    return {
        "start": start,
        "end": end,
        "startPos": {"line": start_line, "col": start_col},
        "endPos": {"line": end_line, "col": end_col},
    }


def key_path_payload(path: KeyPath) -> list[dict[str, Any]]:
    out: list[dict[str, Any]] = []
    for step in path:
        if isinstance(step, Key):
            out.append({"key": step.name})
        elif isinstance(step, Index):
            out.append({"index": step.i})
        else:
            out.append({"keyName": step.name})
    return out


def key_path_from_payload(items: list) -> KeyPath:
    steps: list = []
    for item in items:
        if not isinstance(item, dict):
            raise ValueError(f"bad key path step: {item!r}")
        if "key" in item:
            steps.append(Key(str(item["key"])))
        elif "index" in item:
            steps.append(Index(int(item["index"])))
        elif "keyName" in item:
            steps.append(KeyName(str(item["keyName"])))
        else:
            raise ValueError(f"bad key path step: {item!r}")
    return KeyPath(tuple(steps))


def text_edit_payload(tree: SyntaxTree, edit: TextEdit) -> dict[str, Any]:
    payload = range_payload(tree, edit.start, edit.end)
    payload["newText"] = edit.new_text
    return payload


def text_edit_from_payload(item: dict) -> TextEdit:
    return TextEdit(int(item["start"]), int(item["end"]), str(item.get("newText", "")))


def parse_diagnostic_payload(tree: SyntaxTree, diag: ParseDiagnostic) -> dict[str, Any]:
    return {
        "source": "parse",
        "code": diag.code.value,
        "severity": diag.severity,
        "message": diag.message,
        "range": range_payload(tree, diag.start, diag.end),
    }


def validation_diagnostic_payload(tree: SyntaxTree, diag: ValidationDiagnostic) -> dict[str, Any]:
    node = tree.resolve_key_path(diag.key_path)
    payload: dict[str, Any] = {
        "source": "schema",
        "rule": diag.rule,
        "severity": diag.severity,
        "message": diag.message,
        "keyPath": key_path_payload(diag.key_path),
    }
    if node is not None:
        payload["range"] = range_payload(tree, node.start, node.end)
    return payload


def menu_payload(tree: SyntaxTree, menu: Menu, refs: list[str | None]) -> dict[str, Any]:
    items = []
    for item, ref in zip(menu.items, refs):
        row: dict[str, Any] = {
            "label": item.label,
            "detail": item.detail,
            "group": item.group,
            "sortKey": item.sort_key,
        }
        if ref is not None:
            row["actionRef"] = ref
        items.append(row)
    return {
        "anchorPath": key_path_payload(menu.anchor_path),
        "typeInfo": list(menu.type_info),
        "items": items,
    }


def anchor_payload(tree: SyntaxTree, anchor: Anchor) -> dict[str, Any]:
    return {
        "viewId": anchor.view_id,
        "placement": anchor.placement,
        "range": range_payload(tree, anchor.start, anchor.end),
        "keyPath": key_path_payload(anchor.key_path),
        "payload": anchor.payload,
    }


def suggestion_payload(tree: SyntaxTree, suggestion: SearchSuggestion, edits: list[TextEdit]) -> dict[str, Any]:
    return {
        "matchedPath": list(suggestion.matched_path),
        "snippet": suggestion.snippet,
        "insertionPath": key_path_payload(suggestion.insertion_path),
        "score": {"depth": suggestion.score[0], "path": list(suggestion.score[1])},
        "edits": [text_edit_payload(tree, e) for e in edits],
    }


def sync_result_payload(result: SyncResult, edits_payload: list | None = None) -> dict[str, Any]:
    payload: dict[str, Any] = {"status": result.status}
    if result.grammar_edit is not None:
        symbol, rule_index, new_rule = result.grammar_edit
        payload["grammarEdit"] = {"symbol": symbol, "ruleIndex": rule_index, "newRule": new_rule}
    if result.reason:
        payload["reason"] = result.reason
    if edits_payload is not None:
        payload["edits"] = edits_payload
    return payload


# --- view specs over the wire ----------------------------------------------------


def query_from_payload(item: dict) -> Query:
    if "syntaxNode" in item:
        return SyntaxNodeQuery(tuple(str(k) for k in item["syntaxNode"]))
    if "keyPath" in item:
        patterns = []
        for pattern in item["keyPath"]:
            steps: list = []
            for seg in pattern:
                if seg == "*":
                    steps.append("*")
                elif isinstance(seg, dict):
                    steps.append(key_path_from_payload([seg]).steps[0])
                elif isinstance(seg, int):
                    steps.append(Index(seg))
                else:
                    steps.append(Key(str(seg)))
            patterns.append(tuple(steps))
        return KeyPathQuery(tuple(patterns))
    if "schemaNode" in item:
        return SchemaNodeQuery(tuple(str(n) for n in item["schemaNode"]))
    if "regex" in item:
        return RegexQuery(tuple(str(p) for p in item["regex"]))
    raise ValueError(f"unknown query payload: {sorted(item)}")


def view_spec_from_payload(item: dict) -> ViewSpec:
    widget = item.get("widget") or {}
    return ViewSpec(
        id=str(item["id"]),
        placement=str(item["placement"]),
        query=query_from_payload(item["query"]),
        widget=WidgetDescriptor(str(widget.get("kind", "custom")), dict(widget.get("params") or {})),
    )


def action_from_payload(item: dict) -> EditAction:
    return EditAction(
        kind=str(item["kind"]),
        path=key_path_from_payload(item.get("path") or []),
        name=item.get("name"),
        value=item.get("value"),
        index=item.get("index"),
        direction=int(item.get("direction", 0)),
        label=str(item.get("label", "")),
        source=str(item.get("source", "parseTree")),
    )
