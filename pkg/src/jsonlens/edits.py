"""Structural edit intents compiled into minimal, formatting-preserving text edits.

Every action resolves against the current tree and produces byte-range
splices that keep the document parseable: separator commas are inserted
or removed as needed and new material copies the indentation of its
neighbors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

from .errors import EditConflictError, KindError, PathError
from .jsonc import (
    COMMENT_KINDS,
    CstNode,
    Key,
    KeyName,
    KeyPath,
    Kind,
    SyntaxTree,
    VALUE_KINDS,
)

# action kinds
INSERT_PROPERTY = "InsertProperty"
INSERT_ARRAY_ELEMENT = "InsertArrayElement"
DELETE_NODE = "DeleteNode"
DUPLICATE_NODE = "DuplicateNode"
MOVE_SIBLING = "MoveSibling"
REPLACE_VALUE = "ReplaceValue"
RENAME_KEY = "RenameKey"
SORT_OBJECT_KEYS = "SortObjectKeys"
FORMAT_DOCUMENT = "FormatDocument"

ACTION_KINDS = frozenset(
    {
        INSERT_PROPERTY,
        INSERT_ARRAY_ELEMENT,
        DELETE_NODE,
        DUPLICATE_NODE,
        MOVE_SIBLING,
        REPLACE_VALUE,
        RENAME_KEY,
        SORT_OBJECT_KEYS,
        FORMAT_DOCUMENT,
    }
)


@dataclass(frozen=True)
class TextEdit:
    start: int
    end: int
    new_text: str


@dataclass(frozen=True)
class EditAction:
    kind: str
    path: KeyPath = KeyPath()
    name: str | None = None  # InsertProperty / RenameKey
    value: Any = None  # strict-JSON value for inserts and replacements
    index: int | None = None  # InsertArrayElement
    direction: int = 0  # MoveSibling: +1 or -1
    label: str = ""
    source: str = "parseTree"  # parseTree | schema | view

    def __post_init__(self) -> None:
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")


def apply_edits(text: str, edits: list[TextEdit]) -> str:
    """Splice non-overlapping byte-range edits atomically."""
    return apply_edits_with_inverse(text, edits)[0]


def apply_edits_with_inverse(text: str, edits: list[TextEdit]) -> tuple[str, list[TextEdit]]:
    """Apply edits and return the inverse batch (in result coordinates)."""
    data = text.encode("utf-8")
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    prev_end = -1
    for edit in ordered:
        if not (0 <= edit.start <= edit.end <= len(data)):
            raise EditConflictError(f"edit [{edit.start},{edit.end}) outside document")
        if edit.start < prev_end:
            raise EditConflictError("overlapping edits in one batch")
        prev_end = edit.end
    out = bytearray()
    inverse: list[TextEdit] = []
    cursor = 0
    delta = 0
    for edit in ordered:
        out += data[cursor : edit.start]
        new_bytes = edit.new_text.encode("utf-8")
        new_start = edit.start + delta
        inverse.append(
            TextEdit(new_start, new_start + len(new_bytes), data[edit.start : edit.end].decode("utf-8"))
        )
        out += new_bytes
        delta += len(new_bytes) - (edit.end - edit.start)
        cursor = edit.end
    out += data[cursor:]
    return out.decode("utf-8"), inverse


# --- source inspection helpers ----------------------------------------------


def _is_multiline(tree: SyntaxTree, node: CstNode) -> bool:
    return b"\n" in tree.data[node.start : node.end]


def _line_indent(tree: SyntaxTree, offset: int) -> str:
    """Leading whitespace of the line containing the offset."""
    data = tree.data
    line_start = data.rfind(b"\n", 0, offset) + 1
    i = line_start
    while i < len(data) and data[i] in b" \t":
        i += 1
    return data[line_start:i].decode("utf-8")


def _scan_comma(tree: SyntaxTree, start: int, end: int) -> int | None:
    """Offset of the first separator comma in trivia, skipping comments."""
    data = tree.data
    i = start
    while i < end:
        b = data[i]
        if b in b" \t\r\n":
            i += 1
        elif b == 0x2C:  # ','
            return i
        elif b == 0x2F and i + 1 < end and data[i + 1] == 0x2F:
            nl = data.find(b"\n", i, end)
            i = end if nl == -1 else nl + 1
        elif b == 0x2F and i + 1 < end and data[i + 1] == 0x2A:
            close = data.find(b"*/", i + 2, end)
            i = end if close == -1 else close + 2
        else:
            return None
    return None


def _render_value(value: Any, inline: bool, indent: str) -> str:
    """Strict-JSON rendering, inline or pretty-printed at the given indent."""
    if inline or not isinstance(value, (dict, list)) or not value:
        return json.dumps(value, separators=(", ", ": "), ensure_ascii=False)
    lines = json.dumps(value, indent=2, ensure_ascii=False).splitlines()
    return ("\n" + indent).join(lines)


def _members(tree: SyntaxTree, container: CstNode) -> list[CstNode]:
    if container.kind is Kind.OBJECT:
        return tree.properties(container)
    if container.kind is Kind.ARRAY:
        return [c for c in container.children if c.kind not in COMMENT_KINDS]
    raise KindError(f"{container.kind.value} has no members")


def _member_of(tree: SyntaxTree, node: CstNode) -> tuple[CstNode, CstNode] | None:
    """(member, container) pair enclosing a node, or None at the root."""
    cur = node
    while True:
        parent = tree.parent_of(cur)
        if parent is None:
            return None
        if parent.kind is Kind.OBJECT and cur.kind is Kind.PROPERTY:
            return cur, parent
        if parent.kind is Kind.ARRAY and cur.kind not in COMMENT_KINDS:
            return cur, parent
        cur = parent


def _resolve(tree: SyntaxTree, path: KeyPath) -> CstNode:
    node = tree.resolve_key_path(path)
    if node is None:
        raise PathError(f"path {path} does not resolve")
    return node


# --- compilation -------------------------------------------------------------


def compile_action(tree: SyntaxTree, action: EditAction) -> list[TextEdit]:
    """Compile one structural action into text edits against the current tree."""
    kind = action.kind
    if kind == FORMAT_DOCUMENT:
        return _compile_format(tree)
    node = _resolve(tree, action.path)
    if kind == INSERT_PROPERTY:
        return _compile_insert_property(tree, node, action)
    if kind == INSERT_ARRAY_ELEMENT:
        return _compile_insert_element(tree, node, action)
    if kind == DELETE_NODE:
        return _compile_delete(tree, node)
    if kind == DUPLICATE_NODE:
        return _compile_duplicate(tree, node)
    if kind == MOVE_SIBLING:
        return _compile_move(tree, node, action.direction)
    if kind == REPLACE_VALUE:
        return _compile_replace(tree, node, action.value)
    if kind == RENAME_KEY:
        return _compile_rename(tree, node, action)
    if kind == SORT_OBJECT_KEYS:
        return _compile_sort(tree, node)
    raise ValueError(f"unknown action kind {kind!r}")


def _insertion_after(tree: SyntaxTree, container: CstNode, last: CstNode, member_text: str) -> TextEdit:
    """Insert after the last member, reusing a trailing comma when present."""
    multiline = _is_multiline(tree, container)
    indent = _line_indent(tree, last.start)
    comma_at = _scan_comma(tree, last.end, container.end)
    if comma_at is not None:
        at = comma_at + 1
        prefix = "\n" + indent if multiline else " "
        return TextEdit(at, at, prefix + member_text)
    prefix = ",\n" + indent if multiline else ", "
    return TextEdit(last.end, last.end, prefix + member_text)


def _insertion_into_empty(tree: SyntaxTree, container: CstNode, member_text: str) -> TextEdit:
    at = container.start + 1
    if _is_multiline(tree, container):
        indent = _line_indent(tree, container.start)
        return TextEdit(at, at, "\n" + indent + "  " + member_text)
    return TextEdit(at, at, member_text)


def _compile_insert_property(tree: SyntaxTree, node: CstNode, action: EditAction) -> list[TextEdit]:
    if node.kind is not Kind.OBJECT:
        raise KindError("InsertProperty target must be an object")
    if action.name is None:
        raise ValueError("InsertProperty requires a name")
    members = tree.properties(node)
    inline = not _is_multiline(tree, node)
    indent = _line_indent(tree, members[-1].start) if members else _line_indent(tree, node.start) + "  "
    rendered = _render_value(action.value, inline, indent)
    member_text = json.dumps(action.name, ensure_ascii=False) + ": " + rendered
    if not members:
        return [_insertion_into_empty(tree, node, member_text)]
    return [_insertion_after(tree, node, members[-1], member_text)]


def _compile_insert_element(tree: SyntaxTree, node: CstNode, action: EditAction) -> list[TextEdit]:
    if node.kind is not Kind.ARRAY:
        raise KindError("InsertArrayElement target must be an array")
    members = _members(tree, node)
    index = action.index if action.index is not None else len(members)
    if not 0 <= index <= len(members):
        raise PathError(f"index {index} out of range 0..{len(members)}")
    inline = not _is_multiline(tree, node)
    if index == len(members):
        indent = _line_indent(tree, members[-1].start) if members else _line_indent(tree, node.start) + "  "
        rendered = _render_value(action.value, inline, indent)
        if not members:
            return [_insertion_into_empty(tree, node, rendered)]
        return [_insertion_after(tree, node, members[-1], rendered)]
    target = members[index]
    indent = _line_indent(tree, target.start)
    rendered = _render_value(action.value, inline, indent)
    suffix = ", " if inline else ",\n" + indent
    return [TextEdit(target.start, target.start, rendered + suffix)]


def _delete_member_edits(tree: SyntaxTree, member: CstNode, container: CstNode) -> list[TextEdit]:
    data = tree.data
    members = _members(tree, container)
    i = members.index(member)
    start = member.start
    end = member.end
    comma_at = _scan_comma(tree, end, container.end - 1 if container.end > end else end)
    if comma_at is not None and comma_at < container.end:
        if b"/" in data[end:comma_at]:
            # a comment sits between member and comma: drop them separately
            return [TextEdit(start, end, ""), TextEdit(comma_at, comma_at + 1, "")]
        # delete through the following separator (or trailing) comma
        end = comma_at + 1
        # absorb spaces after the comma, and the whole line when it empties
        line_start = data.rfind(b"\n", 0, start) + 1
        j = end
        while j < len(data) and data[j] in b" \t":
            j += 1
        if j < len(data) and data[j] == 0x0A and data[line_start:start].strip() == b"":
            end = j + 1
            start = line_start
        else:
            end = j
        return [TextEdit(start, end, "")]
    # last member: extend back over whitespace and the preceding comma
    j = start
    while j > container.start + 1 and data[j - 1] in b" \t\r\n":
        j -= 1
    if i > 0 and j > 0 and data[j - 1] == 0x2C:
        j -= 1
    start = j
    return [TextEdit(start, end, "")]


def _skip_ws(data: bytes, start: int, end: int) -> int:
    i = start
    while i < end and data[i] in b" \t\r\n":
        i += 1
    return i


def _compile_delete(tree: SyntaxTree, node: CstNode) -> list[TextEdit]:
    if node is tree.root:
        return [TextEdit(0, len(tree.data), "")]
    pair = _member_of(tree, node)
    if pair is None:
        return [TextEdit(0, len(tree.data), "")]
    member, container = pair
    return _delete_member_edits(tree, member, container)


def _compile_duplicate(tree: SyntaxTree, node: CstNode) -> list[TextEdit]:
    pair = _member_of(tree, node)
    if pair is None:
        raise KindError("cannot duplicate the document root")
    member, container = pair
    member_text = tree.node_text(member)
    if _is_multiline(tree, container):
        indent = _line_indent(tree, member.start)
        return [TextEdit(member.end, member.end, ",\n" + indent + member_text)]
    return [TextEdit(member.end, member.end, ", " + member_text)]


def _compile_move(tree: SyntaxTree, node: CstNode, direction: int) -> list[TextEdit]:
    if direction not in (-1, 1):
        raise ValueError("direction must be +1 or -1")
    pair = _member_of(tree, node)
    if pair is None:
        raise PathError("the document root has no siblings")
    member, container = pair
    members = _members(tree, container)
    i = members.index(member)
    j = i + direction
    if not 0 <= j < len(members):
        raise PathError("no sibling in that direction")
    a, b = sorted((members[i], members[j]), key=lambda m: m.start)
    return [
        TextEdit(a.start, a.end, tree.node_text(b)),
        TextEdit(b.start, b.end, tree.node_text(a)),
    ]


def _compile_replace(tree: SyntaxTree, node: CstNode, value: Any) -> list[TextEdit]:
    if node.kind is Kind.PROPERTY_NAME:
        raise KindError("use RenameKey to change a property name")
    target = node
    if node.kind is Kind.PROPERTY:
        value_node = tree.property_value(node)
        if value_node is None:
            raise PathError("property has no value position")
        target = value_node
    parent = tree.parent_of(target)
    container = parent if parent is not None else target
    inline = not _is_multiline(tree, container)
    indent = _line_indent(tree, target.start)
    return [TextEdit(target.start, target.end, _render_value(value, inline, indent))]


def _compile_rename(tree: SyntaxTree, node: CstNode, action: EditAction) -> list[TextEdit]:
    if action.name is None:
        raise ValueError("RenameKey requires the new name")
    name_node = None
    if node.kind is Kind.PROPERTY_NAME:
        name_node = node
    else:
        prop = node if node.kind is Kind.PROPERTY else tree.parent_of(node)
        if prop is not None and prop.kind is Kind.PROPERTY:
            name_node = next(c for c in prop.children if c.kind is Kind.PROPERTY_NAME)
    if name_node is None:
        raise KindError("RenameKey target must be a property")
    return [TextEdit(name_node.start, name_node.end, json.dumps(action.name, ensure_ascii=False))]


def _compile_sort(tree: SyntaxTree, node: CstNode) -> list[TextEdit]:
    if node.kind is not Kind.OBJECT:
        raise KindError("SortObjectKeys target must be an object")
    props = tree.properties(node)
    ordered = sorted(props, key=lambda p: tree.property_name(p))
    edits = []
    for slot, prop in zip(props, ordered):
        if slot is not prop:
            edits.append(TextEdit(slot.start, slot.end, tree.node_text(prop)))
    return edits


# --- whole-document formatting ------------------------------------------------


def _compile_format(tree: SyntaxTree) -> list[TextEdit]:
    formatted = format_document(tree)
    if formatted == tree.text:
        return []
    return [TextEdit(0, len(tree.data), formatted)]


def format_document(tree: SyntaxTree) -> str:
    """Pretty-print: 2-space indent, no trailing commas, comments kept on
    their own line ahead of the node they precede. Documents that failed to
    parse as a single value are returned unchanged."""
    root = tree.root
    if root.kind is Kind.ERROR:
        return tree.text
    leading, core, trailing = _split_root(tree)
    parts = [tree.node_text(c).strip() for c in leading]
    body = _format_node(tree, core, "")
    if body:
        parts.append(body)
    parts.extend(tree.node_text(c).strip() for c in trailing)
    return "\n".join(p for p in parts if p)


def _bracket_span(tree: SyntaxTree, node: CstNode) -> tuple[int, int] | None:
    """Absolute offsets of a container's opening bracket and matching closer."""
    from .jsonc import _tokenize  # local: tokenizer is an implementation detail

    toks = _tokenize(tree.node_bytes(node))
    open_at = None
    depth = 0
    for tok in toks:
        if tok.kind in ("{", "["):
            if open_at is None:
                open_at = tok.start
            depth += 1
        elif tok.kind in ("}", "]") and open_at is not None:
            depth -= 1
            if depth == 0:
                return node.start + open_at, node.start + tok.end
    if open_at is not None:
        return node.start + open_at, node.end
    return None


def _split_root(tree: SyntaxTree) -> tuple[list[CstNode], CstNode, list[CstNode]]:
    """Partition root children into leading comments, the value, trailing comments."""
    root = tree.root
    if root.kind in (Kind.OBJECT, Kind.ARRAY):
        span = _bracket_span(tree, root)
        open_at, close_at = span if span else (root.start, root.end)
        leading = [c for c in root.children if c.kind in COMMENT_KINDS and c.end <= open_at]
        trailing = [c for c in root.children if c.kind in COMMENT_KINDS and c.start >= close_at]
        skip = {id(c) for c in leading} | {id(c) for c in trailing}
        inner = tuple(c for c in root.children if id(c) not in skip)
        return leading, replace(root, children=inner), trailing
    comments = [c for c in root.children if c.kind in COMMENT_KINDS]
    token = tree.scalar_text(root)
    if not token:
        return comments, replace(root, children=()), []
    token_at = root.start + tree.node_text(root).encode("utf-8").find(token.encode("utf-8"))
    leading = [c for c in comments if c.end <= token_at]
    trailing = [c for c in comments if c.end > token_at]
    return leading, replace(root, children=()), trailing


def _format_node(tree: SyntaxTree, node: CstNode, indent: str) -> str:
    kind = node.kind
    child_indent = indent + "  "
    if kind is Kind.OBJECT:
        items = [c for c in node.children]
        if not items:
            return "{}"
        props = [c for c in items if c.kind is Kind.PROPERTY]
        rows = []
        for child in items:
            if child.kind is Kind.PROPERTY:
                name = next(c for c in child.children if c.kind is Kind.PROPERTY_NAME)
                value = tree.property_value(child)
                value_text = _format_node(tree, value, child_indent) if value is not None else ""
                sep = ": " if value_text else ":"
                comma = "," if props and child is not props[-1] else ""
                rows.append(child_indent + tree.node_text(name).strip() + sep + value_text + comma)
            else:
                rows.append(child_indent + tree.node_text(child).strip())
        return "{\n" + "\n".join(rows) + "\n" + indent + "}"
    if kind is Kind.ARRAY:
        items = list(node.children)
        if not items:
            return "[]"
        elems = [c for c in items if c.kind not in COMMENT_KINDS]
        rows = []
        for child in items:
            if child.kind in COMMENT_KINDS:
                rows.append(child_indent + tree.node_text(child).strip())
            else:
                comma = "," if elems and child is not elems[-1] else ""
                rows.append(child_indent + _format_node(tree, child, child_indent) + comma)
        return "[\n" + "\n".join(rows) + "\n" + indent + "]"
    if kind is Kind.MISSING:
        return ""
    if kind is Kind.ERROR:
        return tree.node_text(node).strip()
    return tree.scalar_text(node)
