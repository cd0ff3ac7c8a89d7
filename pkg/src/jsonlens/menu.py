"""Structure-editor menu generation, autocomplete filtering, schema search.

Menus combine four sources: structural items from the parse-tree kind at
the cursor, property and value suggestions from the applicable schemas,
type-switch items from the schema type union, and menu-placement views.
Incomplete strings under the cursor filter the result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from typing import Any

from .edits import (
    DELETE_NODE,
    DUPLICATE_NODE,
    EditAction,
    FORMAT_DOCUMENT,
    INSERT_ARRAY_ELEMENT,
    INSERT_PROPERTY,
    MOVE_SIBLING,
    REPLACE_VALUE,
    SORT_OBJECT_KEYS,
)
from .jsonc import (
    COMMENT_KINDS,
    CstNode,
    Index,
    Key,
    KeyName,
    KeyPath,
    Kind,
    SyntaxTree,
    VALUE_KINDS,
)
from .schema import (
    SchemaDoc,
    SchemaNode,
    SchemaSet,
    SynthesisResult,
    descend,
    expand_entry,
    infer_schema_set,
    synthesize_minimal,
)
from .views import ViewRegistry, matches

GROUP_ORDER = ("structural", "schemaProperty", "schemaValue", "typeSwitch", "view")

SEARCH_MAX_DEPTH = 12


@dataclass(frozen=True)
class MenuItem:
    label: str
    detail: str = ""
    action: EditAction | None = None
    group: str = "structural"
    sort_key: str = ""


@dataclass(frozen=True)
class Menu:
    anchor_path: KeyPath
    items: tuple[MenuItem, ...]
    type_info: tuple[str, ...] = ()


def _ordered(items: list[MenuItem]) -> tuple[MenuItem, ...]:
    return tuple(
        sorted(items, key=lambda m: (GROUP_ORDER.index(m.group), m.sort_key or m.label, m.label))
    )


def _item(label: str, group: str, action: EditAction | None = None, detail: str = "") -> MenuItem:
    return MenuItem(label, detail, action, group, sort_key=label)


def _detail_of(entry: SchemaNode) -> str:
    return entry.get("description") or entry.get("title") or ""


def _covered_by_error(tree: SyntaxTree, node: CstNode) -> bool:
    if node.kind is Kind.ERROR:
        return True
    return any(a.kind is Kind.ERROR for a in tree.ancestors(node))


def menu_for(
    tree: SyntaxTree,
    schema: SchemaDoc | None,
    registry: ViewRegistry,
    offset: int,
) -> Menu:
    """Menu for the node under the cursor."""
    node = tree.node_at(offset)
    anchor_path = tree.key_path_of(node)
    items: list[MenuItem] = []
    items.extend(_structural_items(tree, schema, node, anchor_path))
    if _covered_by_error(tree, node):
        return Menu(anchor_path, _ordered(items))

    value_path = _value_path(tree, node, anchor_path)
    schema_set = (
        infer_schema_set(schema, value_path) if schema is not None and value_path is not None else SchemaSet()
    )
    if schema is not None:
        items.extend(_schema_property_items(tree, schema, node, anchor_path))
        if value_path is not None:
            items.extend(_schema_value_items(tree, schema, schema_set, value_path))
            items.extend(_type_switch_items(schema_set, value_path))
    items.extend(_view_items(tree, schema, registry, node, anchor_path, schema_set))
    type_info = tuple(f"{entry.name}: {entry.describe()}" for entry in schema_set)
    return Menu(anchor_path, _ordered(items), type_info)


def _value_path(tree: SyntaxTree, node: CstNode, anchor_path: KeyPath) -> KeyPath | None:
    """Path of the value position the cursor refers to."""
    if node.kind in VALUE_KINDS or node.kind is Kind.MISSING:
        return anchor_path
    if node.kind is Kind.PROPERTY_NAME and anchor_path.steps:
        last = anchor_path.steps[-1]
        if isinstance(last, KeyName):
            return anchor_path.parent().child(Key(last.name))
    if node.kind is Kind.PROPERTY:
        return anchor_path
    return None


def _enclosing_object_path(tree: SyntaxTree, node: CstNode, anchor_path: KeyPath) -> KeyPath | None:
    """Path of the object whose member list the cursor is editing."""
    if node.kind is Kind.OBJECT:
        return anchor_path
    if node.kind in (Kind.PROPERTY, Kind.PROPERTY_NAME):
        return anchor_path.parent()
    parent = tree.parent_of(node)
    if node.kind is Kind.STRING and parent is not None:
        # a string is a key candidate when it sits directly in an object
        # (recovered partial input) or names a property
        if parent.kind is Kind.OBJECT:
            return tree.key_path_of(parent)
    return None


def _structural_items(
    tree: SyntaxTree, schema: SchemaDoc | None, node: CstNode, anchor_path: KeyPath
) -> list[MenuItem]:
    items: list[MenuItem] = []
    member = node
    container = None
    cur = node
    while True:
        parent = tree.parent_of(cur) if tree.contains(cur) else None
        if parent is None:
            break
        if parent.kind is Kind.OBJECT and cur.kind is Kind.PROPERTY:
            member, container = cur, parent
            break
        if parent.kind is Kind.ARRAY and (cur.kind in VALUE_KINDS or cur.kind is Kind.MISSING):
            member, container = cur, parent
            break
        cur = parent
    if container is not None and container.kind is Kind.ARRAY:
        elems = tree.elements(container)
        i = elems.index(member)
        path = tree.key_path_of(member)
        if i > 0:
            items.append(_item("Move up", "structural", EditAction(MOVE_SIBLING, path, direction=-1)))
        if i < len(elems) - 1:
            items.append(_item("Move down", "structural", EditAction(MOVE_SIBLING, path, direction=1)))
        items.append(_item("Delete element", "structural", EditAction(DELETE_NODE, path)))
        items.append(_item("Duplicate element", "structural", EditAction(DUPLICATE_NODE, path)))
    elif container is not None and container.kind is Kind.OBJECT:
        path = tree.key_path_of(member)
        items.append(_item("Delete property", "structural", EditAction(DELETE_NODE, path)))
        items.append(_item("Duplicate property", "structural", EditAction(DUPLICATE_NODE, path)))
    if node.kind is Kind.ARRAY:
        elems = tree.elements(node)
        value: Any = None
        if schema is not None:
            item_set = infer_schema_set(schema, anchor_path.child(Index(len(elems))))
            if item_set:
                value = synthesize_minimal(schema, item_set.entries[0]).value
        items.append(
            _item(
                "Add element",
                "structural",
                EditAction(INSERT_ARRAY_ELEMENT, anchor_path, index=len(elems), value=value),
            )
        )
    return items


def _schema_property_items(
    tree: SyntaxTree, schema: SchemaDoc, node: CstNode, anchor_path: KeyPath
) -> list[MenuItem]:
    obj_path = _enclosing_object_path(tree, node, anchor_path)
    if obj_path is None:
        return []
    obj_node = tree.resolve_key_path(obj_path)
    if obj_node is None or obj_node.kind is not Kind.OBJECT:
        return []
    present = {tree.property_name(p) for p in tree.properties(obj_node)}
    entries = infer_schema_set(schema, obj_path)
    items: list[MenuItem] = []
    seen: set[str] = set()
    for entry in entries:
        props = entry.get("properties")
        if not isinstance(props, dict):
            continue
        for name, prop_schema in props.items():
            if name in present or name in seen:
                continue
            seen.add(name)
            child_entries = descend(schema, (entry,), Key(name))
            detail = _detail_of(child_entries[0]) if child_entries else ""
            value = synthesize_minimal(schema, prop_schema).value
            items.append(
                MenuItem(
                    name,
                    detail,
                    EditAction(INSERT_PROPERTY, obj_path, name=name, value=value, source="schema"),
                    "schemaProperty",
                    sort_key=name,
                )
            )
    return items


def _schema_value_items(
    tree: SyntaxTree, schema: SchemaDoc, schema_set: SchemaSet, value_path: KeyPath
) -> list[MenuItem]:
    items: list[MenuItem] = []
    seen: set[str] = set()
    for entry in schema_set:
        for option in entry.enum_values:
            label = option if isinstance(option, str) else json.dumps(option)
            if label in seen:
                continue
            seen.add(label)
            items.append(
                MenuItem(
                    label,
                    _detail_of(entry),
                    EditAction(REPLACE_VALUE, value_path, value=option, source="schema"),
                    "schemaValue",
                    sort_key=label,
                )
            )
        if entry.via and any(v.startswith(("anyOf", "oneOf")) for v in entry.via):
            if not entry.enum_values and isinstance(entry.schema, dict) and (
                "properties" in entry.schema or entry.get("type") == "object"
            ):
                synthesized = synthesize_minimal(schema, entry)
                label = f"New {entry.name}"
                if label not in seen:
                    seen.add(label)
                    items.append(
                        MenuItem(
                            label,
                            _detail_of(entry),
                            EditAction(REPLACE_VALUE, value_path, value=synthesized.value, source="schema"),
                            "schemaValue",
                            sort_key=label,
                        )
                    )
    return items


_TYPE_DEFAULTS: dict[str, Any] = {
    "object": {},
    "array": [],
    "string": "",
    "number": 0,
    "integer": 0,
    "boolean": False,
    "null": None,
}


def _type_switch_items(schema_set: SchemaSet, value_path: KeyPath) -> list[MenuItem]:
    items = []
    for type_name in schema_set.type_union():
        default = _TYPE_DEFAULTS.get(type_name)
        items.append(
            MenuItem(
                f"Switch to {type_name}",
                "",
                EditAction(REPLACE_VALUE, value_path, value=default, source="schema"),
                "typeSwitch",
                sort_key=type_name,
            )
        )
    return items


def _view_items(
    tree: SyntaxTree,
    schema: SchemaDoc | None,
    registry: ViewRegistry,
    node: CstNode,
    anchor_path: KeyPath,
    schema_set: SchemaSet,
) -> list[MenuItem]:
    items = []
    node_text = tree.node_text(node)
    for view in registry:
        if view.placement != "menu":
            continue
        if not matches(view.query, node, anchor_path, schema_set, node_text):
            continue
        if view.guard is not None and not view.guard(tree, node, schema_set):
            continue
        params = view.widget.params or {}
        label = params.get("label") or view.widget.kind
        action = None
        action_name = params.get("action")
        if action_name == "sortKeys" and node.kind is Kind.OBJECT:
            action = EditAction(SORT_OBJECT_KEYS, anchor_path, source="view")
        elif action_name == "formatDocument":
            action = EditAction(FORMAT_DOCUMENT, source="view")
        elif action_name == "sortKeys":
            continue  # sorter offered only on objects
        items.append(MenuItem(label, params.get("detail", ""), action, "view", sort_key=label))
    return items


# --- filtering ------------------------------------------------------------------


def filter_menu(menu: Menu, query: str) -> Menu:
    """Case-insensitive substring filter; prefix matches rank first."""
    if not query:
        return menu
    needle = query.casefold()
    kept = []
    for item in menu.items:
        label = item.label.casefold()
        detail = item.detail.casefold()
        if needle in label or needle in detail:
            kept.append((not label.startswith(needle), GROUP_ORDER.index(item.group), item.sort_key, item.label, item))
    kept.sort(key=lambda row: row[:4])
    return Menu(menu.anchor_path, tuple(row[4] for row in kept), menu.type_info)


def extract_query_at_cursor(tree: SyntaxTree, offset: int) -> str:
    """Partial token text left of the cursor, for menu filtering."""
    node = tree.node_at(offset)
    if node.kind not in (Kind.STRING, Kind.PROPERTY_NAME, Kind.ERROR):
        return ""
    start = node.start
    if offset < start:
        return ""
    raw = tree.data[start:offset].decode("utf-8", errors="replace")
    if raw.startswith('"'):
        raw = raw[1:]
    if raw.endswith('"'):
        raw = raw[:-1]
    return raw


# --- schema search ----------------------------------------------------------------


@dataclass(frozen=True)
class SearchSuggestion:
    matched_path: tuple[str, ...]
    snippet: Any
    insertion_path: KeyPath
    score: tuple[int, tuple[str, ...]]
    steps: tuple[Any, ...] = ()  # ("prop", name) | ("items",) from schema root


_ITEMS_STEP = ("items",)


def schema_search(
    tree: SyntaxTree, schema: SchemaDoc, query: str, limit: int = 10
) -> list[SearchSuggestion]:
    """Depth-first schema traversal matching names, titles, descriptions and
    enum members against the query; hits become insertable snippets."""
    if not query:
        return []
    needle = query.casefold()
    hits: list[tuple[tuple[str, ...], tuple[Any, ...], Any]] = []

    def emit(steps: tuple[Any, ...], leaf: Any) -> None:
        matched = tuple(s[1] for s in steps if s[0] == "prop")
        hits.append((matched, steps, leaf))

    def matches_text(*texts: Any) -> bool:
        return any(isinstance(t, str) and needle in t.casefold() for t in texts)

    def visit(fragment: Any, steps: tuple[Any, ...], visited: frozenset[str], depth: int) -> None:
        if depth > SEARCH_MAX_DEPTH:
            return
        for entry in expand_entry(schema, SchemaNode("#", fragment, "#")):
            sub = entry.schema
            if not isinstance(sub, dict):
                continue
            for member in entry.enum_values:
                text = member if isinstance(member, str) else json.dumps(member)
                if needle in str(text).casefold():
                    emit(steps, member)
            props = sub.get("properties")
            if isinstance(props, dict):
                for name, child in props.items():
                    child_steps = steps + (("prop", name),)
                    resolved = child
                    pointer = None
                    if isinstance(child, dict) and isinstance(child.get("$ref"), str):
                        pointer = child["$ref"]
                        resolved = schema.resolve_pointer(pointer)
                    title = resolved.get("title") if isinstance(resolved, dict) else None
                    description = resolved.get("description") if isinstance(resolved, dict) else None
                    own_title = child.get("title") if isinstance(child, dict) else None
                    own_desc = child.get("description") if isinstance(child, dict) else None
                    if matches_text(name, title, description, own_title, own_desc):
                        emit(child_steps, synthesize_minimal(schema, child, depth_limit=6).value)
                    if pointer is not None:
                        if pointer in visited:
                            continue
                        visit(resolved, child_steps, visited | {pointer}, depth + 1)
                    else:
                        visit(child, child_steps, visited, depth + 1)
            items = sub.get("items")
            if isinstance(items, dict):
                item_steps = steps + (_ITEMS_STEP,)
                pointer = items.get("$ref") if isinstance(items.get("$ref"), str) else None
                if pointer is not None:
                    if pointer in visited:
                        continue
                    visit(schema.resolve_pointer(pointer), item_steps, visited | {pointer}, depth + 1)
                else:
                    visit(items, item_steps, visited, depth + 1)

    visit(schema.raw, (), frozenset(), 0)

    suggestions: list[SearchSuggestion] = []
    seen: set[str] = set()
    for matched, steps, leaf in hits:
        dedupe_key = json.dumps([list(steps), leaf], sort_keys=True, default=str)
        if dedupe_key in seen:
            continue
        seen.add(dedupe_key)
        insertion_path, snippet = _snippet_for(tree, steps, leaf)
        suggestions.append(
            SearchSuggestion(matched, snippet, insertion_path, (len(matched), matched), steps)
        )
    suggestions.sort(key=lambda s: s.score)
    return suggestions[:limit]


def _snippet_for(tree: SyntaxTree, steps: tuple[Any, ...], leaf: Any) -> tuple[KeyPath, Any]:
    """Deepest existing ancestor in the document, and the value to put there."""
    node = tree.root
    path = KeyPath()
    consumed = 0
    for step in steps:
        if step[0] == "prop":
            if node.kind is not Kind.OBJECT:
                break
            nxt = tree.resolve_key_path(path.child(Key(step[1])))
            if nxt is None:
                break
            path = path.child(Key(step[1]))
            node = nxt
        else:
            if node.kind is not Kind.ARRAY or not tree.elements(node):
                break
            path = path.child(Index(0))
            node = tree.elements(node)[0]
        consumed += 1
    snippet = leaf
    for step in reversed(steps[consumed:]):
        if step[0] == "prop":
            snippet = {step[1]: snippet}
        else:
            snippet = [snippet]
    return path, snippet
