"""Error-tolerant JSONC parsing into a lossless concrete syntax tree.

The tree never owns text: every node is a byte range into the UTF-8
encoding of the source, so serializing an unedited tree is the identity
and clients on any platform agree on positions. Parsing always succeeds;
malformed input is represented with Error and Missing nodes plus
diagnostics instead of exceptions.
"""

from __future__ import annotations

import json
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Union

from .errors import InputEncodingError, NodeError, OffsetError

MAX_NESTING = 200


class Kind(str, Enum):
    OBJECT = "Object"
    ARRAY = "Array"
    PROPERTY = "Property"
    PROPERTY_NAME = "PropertyName"
    STRING = "String"
    NUMBER = "Number"
    TRUE = "True"
    FALSE = "False"
    NULL = "Null"
    LINE_COMMENT = "LineComment"
    BLOCK_COMMENT = "BlockComment"
    ERROR = "Error"
    MISSING = "Missing"


VALUE_KINDS = frozenset(
    {Kind.OBJECT, Kind.ARRAY, Kind.STRING, Kind.NUMBER, Kind.TRUE, Kind.FALSE, Kind.NULL}
)
COMMENT_KINDS = frozenset({Kind.LINE_COMMENT, Kind.BLOCK_COMMENT})
SCALAR_KINDS = frozenset({Kind.STRING, Kind.NUMBER, Kind.TRUE, Kind.FALSE, Kind.NULL})


class DiagnosticCode(str, Enum):
    TRAILING_COMMA = "TrailingComma"
    MISSING_COMMA = "MissingComma"
    MISSING_VALUE = "MissingValue"
    UNTERMINATED_STRING = "UnterminatedString"
    UNEXPECTED_TOKEN = "UnexpectedToken"
    UNBALANCED_BRACKET = "UnbalancedBracket"


@dataclass(frozen=True)
class ParseDiagnostic:
    start: int
    end: int
    code: DiagnosticCode
    severity: str  # "error" | "warning"
    message: str = ""


# --- key paths -------------------------------------------------------------


@dataclass(frozen=True)
class Key:
    """Step addressing the value of an object property."""

    name: str


@dataclass(frozen=True)
class Index:
    """Step addressing an array element by position."""

    i: int


@dataclass(frozen=True)
class KeyName:
    """Final step addressing a property-name token rather than its value."""

    name: str


Step = Union[Key, Index, KeyName]


@dataclass(frozen=True)
class KeyPath:
    steps: tuple[Step, ...] = ()

    def __post_init__(self) -> None:
        for step in self.steps[:-1]:
            if isinstance(step, KeyName):
                raise ValueError("KeyName may only be the final step of a KeyPath")

    @staticmethod
    def of(*parts: str | int | Step) -> "KeyPath":
        """Build a path from bare strings (keys) and ints (indices)."""
        steps: list[Step] = []
        for part in parts:
            if isinstance(part, str):
                steps.append(Key(part))
            elif isinstance(part, int):
                steps.append(Index(part))
            else:
                steps.append(part)
        return KeyPath(tuple(steps))

    def child(self, step: Step) -> "KeyPath":
        return KeyPath(self.steps + (step,))

    def parent(self) -> "KeyPath":
        return KeyPath(self.steps[:-1])

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __str__(self) -> str:
        parts = []
        for step in self.steps:
            if isinstance(step, Key):
                parts.append(f".{step.name}")
            elif isinstance(step, Index):
                parts.append(f"[{step.i}]")
            else:
                parts.append(f".<{step.name}>")
        return "$" + "".join(parts)


# --- tree ------------------------------------------------------------------


@dataclass
class CstNode:
    kind: Kind
    start: int
    end: int
    children: tuple["CstNode", ...] = ()

    @property
    def width(self) -> int:
        return self.end - self.start


class SyntaxTree:
    """Concrete syntax tree plus the exact source it was parsed from."""

    def __init__(self, text: str, data: bytes, root: CstNode, diagnostics: list[ParseDiagnostic]):
        self.text = text
        self.data = data
        self.root = root
        self.diagnostics = diagnostics
        self._parents: dict[int, CstNode] | None = None
        self._line_starts: list[int] | None = None

    # -- navigation

    def walk(self, node: CstNode | None = None) -> Iterator[CstNode]:
        """Pre-order traversal."""
        stack = [node or self.root]
        while stack:
            cur = stack.pop()
            yield cur
            stack.extend(reversed(cur.children))

    def _parent_map(self) -> dict[int, CstNode]:
        if self._parents is None:
            parents: dict[int, CstNode] = {}
            for node in self.walk():
                for child in node.children:
                    parents[id(child)] = node
            self._parents = parents
        return self._parents

    def contains(self, node: CstNode) -> bool:
        return node is self.root or id(node) in self._parent_map()

    def parent_of(self, node: CstNode) -> CstNode | None:
        if node is self.root:
            return None
        parent = self._parent_map().get(id(node))
        if parent is None:
            raise NodeError("node does not belong to this tree")
        return parent

    def ancestors(self, node: CstNode) -> Iterator[CstNode]:
        cur = self.parent_of(node)
        while cur is not None:
            yield cur
            cur = None if cur is self.root else self._parent_map().get(id(cur))

    # -- text access

    def node_bytes(self, node: CstNode) -> bytes:
        return self.data[node.start : node.end]

    def node_text(self, node: CstNode) -> str:
        return self.node_bytes(node).decode("utf-8")

    def scalar_text(self, node: CstNode) -> str:
        """Token text of a scalar node, ignoring surrounding trivia.

        Needed because the root node is widened to span leading/trailing
        trivia of the document.
        """
        for tok in _tokenize(self.node_bytes(node)):
            if tok.kind not in ("line", "block", "eof"):
                return self.data[node.start + tok.start : node.start + tok.end].decode("utf-8")
        return ""

    def line_col(self, offset: int) -> tuple[int, int]:
        """0-based (line, byte column) of a byte offset."""
        if self._line_starts is None:
            starts = [0]
            for i, b in enumerate(self.data):
                if b == 0x0A:
                    starts.append(i + 1)
            self._line_starts = starts
        line = bisect_right(self._line_starts, offset) - 1
        return line, offset - self._line_starts[line]

    # -- structure helpers

    def properties(self, node: CstNode) -> list[CstNode]:
        return [c for c in node.children if c.kind is Kind.PROPERTY]

    def elements(self, node: CstNode) -> list[CstNode]:
        """Addressable array elements: values and Missing slots, not comments/errors."""
        return [c for c in node.children if c.kind in VALUE_KINDS or c.kind is Kind.MISSING]

    def property_name(self, prop: CstNode) -> str:
        for c in prop.children:
            if c.kind is Kind.PROPERTY_NAME:
                return _string_value(self.node_text(c))
        raise NodeError("property has no name node")

    def property_value(self, prop: CstNode) -> CstNode | None:
        fallback = None
        for c in prop.children:
            if c.kind in VALUE_KINDS or c.kind is Kind.MISSING:
                return c
            if c.kind is Kind.ERROR and fallback is None:
                fallback = c
        return fallback

    @property
    def is_well_formed(self) -> bool:
        return all(n.kind not in (Kind.ERROR, Kind.MISSING) for n in self.walk())

    # -- value extraction

    def to_value(self, node: CstNode | None = None) -> Any:
        """Lossy plain-JSON view of a subtree.

        Raises ValueError on Error/Missing nodes; duplicate keys keep the
        first occurrence.
        """
        node = node or self.root
        kind = node.kind
        if kind is Kind.OBJECT:
            out: dict[str, Any] = {}
            for prop in self.properties(node):
                name = self.property_name(prop)
                value = self.property_value(prop)
                if value is None:
                    raise ValueError("property without a value")
                if name not in out:
                    out[name] = self.to_value(value)
            return out
        if kind is Kind.ARRAY:
            return [self.to_value(e) for e in self.elements(node)]
        if kind is Kind.STRING:
            return _string_value(self.scalar_text(node))
        if kind is Kind.NUMBER:
            return json.loads(self.scalar_text(node))
        if kind is Kind.TRUE:
            return True
        if kind is Kind.FALSE:
            return False
        if kind is Kind.NULL:
            return None
        if kind is Kind.PROPERTY:
            value = self.property_value(node)
            if value is None:
                raise ValueError("property without a value")
            return self.to_value(value)
        if kind is Kind.PROPERTY_NAME:
            return _string_value(self.node_text(node))
        raise ValueError(f"no plain value for {kind.value} node")

    # -- offsets and paths

    def node_at(self, offset: int) -> CstNode:
        """Innermost node whose range contains the offset.

        At a boundary between nodes, the node starting at the offset wins,
        then the node ending there.
        """
        if not 0 <= offset <= len(self.data):
            raise OffsetError(f"offset {offset} outside document of {len(self.data)} bytes")
        node = self.root
        while True:
            start_match = None
            end_match = None
            for child in node.children:
                if child.start <= offset <= child.end:
                    if child.start == offset and start_match is None:
                        start_match = child
                    elif child.start < offset < child.end:
                        start_match = start_match or child  # proper containment
                    elif child.end == offset and end_match is None:
                        end_match = child
            pick = start_match or end_match
            if pick is None:
                return node
            node = pick

    def key_path_of(self, node: CstNode) -> KeyPath:
        """Path addressing the node; trivia-like nodes map to their parent's path."""
        if not self.contains(node):
            raise NodeError("node does not belong to this tree")
        steps: list[Step] = []
        cur = node
        first = True
        while cur is not self.root:
            parent = self._parent_map()[id(cur)]
            if parent.kind is Kind.PROPERTY:
                name = self.property_name(parent)
                if cur.kind is Kind.PROPERTY_NAME:
                    steps.append(KeyName(name))
                else:
                    steps.append(Key(name))
            elif parent.kind is Kind.ARRAY and (
                cur.kind in VALUE_KINDS or cur.kind is Kind.MISSING
            ):
                steps.append(Index(self.elements(parent).index(cur)))
            elif first and cur.kind is Kind.PROPERTY and parent.kind is Kind.OBJECT:
                steps.append(Key(self.property_name(cur)))
            cur = parent
            first = False
        return KeyPath(tuple(reversed(steps)))

    def resolve_key_path(self, path: KeyPath) -> CstNode | None:
        """Node addressed by the path, or None; duplicate keys resolve to the first."""
        cur = self.root
        for step in path.steps:
            if isinstance(step, (Key, KeyName)):
                if cur.kind is not Kind.OBJECT:
                    return None
                found = None
                for prop in self.properties(cur):
                    if self.property_name(prop) == step.name:
                        found = prop
                        break
                if found is None:
                    return None
                if isinstance(step, KeyName):
                    return next(c for c in found.children if c.kind is Kind.PROPERTY_NAME)
                cur = self.property_value(found)
                if cur is None:
                    return None
            else:
                if cur.kind is not Kind.ARRAY:
                    return None
                elems = self.elements(cur)
                if not 0 <= step.i < len(elems):
                    return None
                cur = elems[step.i]
        return cur


def serialize(tree: SyntaxTree) -> str:
    """Source text of the tree; byte-identical to the parsed input."""
    return tree.text


# --- string helpers --------------------------------------------------------


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", '"': '"', "\\": "\\", "/": "/"}


def _string_value(token_text: str) -> str:
    """Unquoted value of a (possibly unterminated) string token. Never raises."""
    if not token_text.startswith('"'):
        return token_text
    try:
        return json.loads(token_text)
    except ValueError:
        pass
    body = token_text[1:]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
                continue
            if nxt == "u" and i + 6 <= len(body):
                try:
                    out.append(chr(int(body[i + 2 : i + 6], 16)))
                    i += 6
                    continue
                except ValueError:
                    pass
        if c == '"' and i == len(body) - 1:
            break
        out.append(c)
        i += 1
    return "".join(out)


# --- tokenizer -------------------------------------------------------------


_NUM_RE = re.compile(rb"-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?")
_WORD_RE = re.compile(rb"[A-Za-z_$][A-Za-z0-9_$]*")
_WS = frozenset(b" \t\r\n")
_PUNCT = frozenset(b"{}[]:,")
_DIGITS = frozenset(b"0123456789")
# byte values that can begin a recognized token (used to bound "bad" runs)
_TOKEN_STARTS = (
    _WS
    | _PUNCT
    | _DIGITS
    | frozenset(b'"/-_$')
    | frozenset(range(ord("a"), ord("z") + 1))
    | frozenset(range(ord("A"), ord("Z") + 1))
)


@dataclass
class _Token:
    kind: str
    start: int
    end: int
    terminated: bool = True


def _tokenize(data: bytes) -> list[_Token]:
    toks: list[_Token] = []
    i = 0
    n = len(data)
    while i < n:
        b = data[i]
        if b in _WS:
            i += 1
            continue
        s = i
        if b == 0x2F:  # '/'
            nxt = data[i + 1] if i + 1 < n else 0
            if nxt == 0x2F:
                i += 2
                while i < n and data[i] != 0x0A:
                    i += 1
                toks.append(_Token("line", s, i))
                continue
            if nxt == 0x2A:
                i += 2
                terminated = False
                while i < n:
                    if data[i] == 0x2A and i + 1 < n and data[i + 1] == 0x2F:
                        i += 2
                        terminated = True
                        break
                    i += 1
                toks.append(_Token("block", s, i, terminated))
                continue
            i += 1
            toks.append(_Token("bad", s, i))
            continue
        if b == 0x22:  # '"'
            i += 1
            terminated = False
            while i < n:
                c = data[i]
                if c == 0x5C:  # backslash
                    i = min(i + 2, n)
                elif c == 0x22:
                    i += 1
                    terminated = True
                    break
                elif c == 0x0A:
                    break
                else:
                    i += 1
            toks.append(_Token("str", s, i, terminated))
            continue
        if b in _PUNCT:
            i += 1
            toks.append(_Token(chr(b), s, i))
            continue
        if b in _DIGITS or b == 0x2D:  # digit or '-'
            j = i + 1
            while j < n and data[j] in b"0123456789+-.eE":
                j += 1
            kind = "num" if _NUM_RE.fullmatch(data, i, j) else "bad"
            toks.append(_Token(kind, s, j))
            i = j
            continue
        m = _WORD_RE.match(data, i)
        if m:
            word = m.group(0)
            i = m.end()
            if word == b"true":
                toks.append(_Token("true", s, i))
            elif word == b"false":
                toks.append(_Token("false", s, i))
            elif word == b"null":
                toks.append(_Token("null", s, i))
            else:
                toks.append(_Token("ident", s, i))
            continue
        j = i + 1
        while j < n and data[j] not in _TOKEN_STARTS:
            j += 1
        toks.append(_Token("bad", s, j))
        i = j
    toks.append(_Token("eof", n, n))
    return toks


# --- parser ----------------------------------------------------------------

_VALUE_STARTS = frozenset({"{", "[", "str", "num", "true", "false", "null"})
_COMMENTS = frozenset({"line", "block"})


class _Parser:
    def __init__(self, data: bytes):
        self.data = data
        self.toks = _tokenize(data)
        self.pos = 0
        self.diags: list[ParseDiagnostic] = []

    # -- primitives

    def _cur(self) -> _Token:
        return self.toks[self.pos]

    def _advance(self) -> _Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _peek_significant(self, collector: list[CstNode]) -> _Token:
        """Skip comment tokens, materializing them as nodes into collector."""
        while True:
            tok = self._cur()
            if tok.kind == "line":
                collector.append(CstNode(Kind.LINE_COMMENT, tok.start, tok.end))
                self.pos += 1
            elif tok.kind == "block":
                collector.append(CstNode(Kind.BLOCK_COMMENT, tok.start, tok.end))
                if not tok.terminated:
                    self._diag(
                        tok.start,
                        tok.end,
                        DiagnosticCode.UNEXPECTED_TOKEN,
                        "error",
                        "unterminated block comment",
                    )
                self.pos += 1
            else:
                return tok

    def _diag(self, start: int, end: int, code: DiagnosticCode, severity: str, message: str) -> None:
        self.diags.append(ParseDiagnostic(start, end, code, severity, message))

    # -- recovery

    def _consume_stray_run(self, stop_kinds: frozenset[str]) -> CstNode:
        """Wrap a run of unexpected tokens in an Error node.

        Brackets inside the run are consumed as balanced groups so that
        recovery does not desynchronize nesting.
        """
        start_tok = self._cur()
        end = start_tok.end
        depth = 0
        first = True
        while True:
            tok = self._cur()
            if tok.kind == "eof":
                break
            if not first and depth == 0 and tok.kind in stop_kinds:
                break
            if tok.kind in ("{", "["):
                depth += 1
            elif tok.kind in ("}", "]"):
                if depth > 0:
                    depth -= 1
                elif not first:
                    break  # closer belongs to an enclosing container
            end = tok.end
            self._advance()
            first = False
        node = CstNode(Kind.ERROR, start_tok.start, end)
        self._diag(start_tok.start, end, DiagnosticCode.UNEXPECTED_TOKEN, "error", "unexpected token")
        return node

    # -- grammar

    def parse_document(self) -> CstNode:
        n = len(self.data)
        pieces: list[CstNode] = []
        while True:
            tok = self._peek_significant(pieces)
            if tok.kind == "eof":
                break
            node = self._parse_value(pieces, depth=0)
            if node is None:
                pieces.append(self._consume_stray_run(_VALUE_STARTS))
            else:
                pieces.append(node)
        values = [p for p in pieces if p.kind not in COMMENT_KINDS]
        if not values:
            self._diag(0, 0, DiagnosticCode.MISSING_VALUE, "warning", "document has no value")
            return CstNode(Kind.MISSING, 0, n, tuple(pieces))
        if len(values) == 1:
            main = values[0]
            extras = [p for p in pieces if p is not main]
            children = tuple(sorted(list(main.children) + extras, key=lambda c: (c.start, c.end)))
            return CstNode(main.kind, 0, n, children)
        self._diag(
            values[1].start,
            values[-1].end,
            DiagnosticCode.UNEXPECTED_TOKEN,
            "error",
            "multiple top-level values",
        )
        return CstNode(Kind.ERROR, 0, n, tuple(pieces))

    def _parse_value(self, comments: list[CstNode], depth: int) -> CstNode | None:
        tok = self._peek_significant(comments)
        kind = tok.kind
        if kind in ("{", "[") and depth >= MAX_NESTING:
            return self._consume_stray_run(frozenset({",", "}", "]"}))
        if kind == "{":
            return self._parse_object(depth + 1)
        if kind == "[":
            return self._parse_array(depth + 1)
        if kind == "str":
            self._advance()
            if not tok.terminated:
                self._diag(
                    tok.start, tok.end, DiagnosticCode.UNTERMINATED_STRING, "error", "unterminated string"
                )
            return CstNode(Kind.STRING, tok.start, tok.end)
        if kind == "num":
            self._advance()
            return CstNode(Kind.NUMBER, tok.start, tok.end)
        if kind in ("true", "false", "null"):
            self._advance()
            node_kind = {"true": Kind.TRUE, "false": Kind.FALSE, "null": Kind.NULL}[kind]
            return CstNode(node_kind, tok.start, tok.end)
        if kind in ("ident", "bad"):
            return self._consume_stray_run(frozenset({",", "}", "]"}))
        return None

    def _parse_object(self, depth: int) -> CstNode:
        open_tok = self._advance()
        children: list[CstNode] = []
        pending_comma: _Token | None = None
        members = 0
        end = open_tok.end
        while True:
            tok = self._peek_significant(children)
            if tok.kind == "}":
                self._advance()
                end = tok.end
                if pending_comma is not None:
                    self._diag(
                        pending_comma.start,
                        pending_comma.end,
                        DiagnosticCode.TRAILING_COMMA,
                        "warning",
                        "trailing comma",
                    )
                break
            if tok.kind == "eof":
                self._diag(
                    open_tok.start,
                    open_tok.end,
                    DiagnosticCode.UNBALANCED_BRACKET,
                    "error",
                    "missing closing brace",
                )
                break
            if tok.kind == "str":
                if members > 0 and pending_comma is None:
                    self._diag(
                        tok.start, tok.start, DiagnosticCode.MISSING_COMMA, "error", "missing comma"
                    )
                prop = self._parse_property(depth)
                children.append(prop)
                members += 1
                pending_comma = None
                end = max(end, prop.end)
                continue
            if tok.kind == ",":
                if pending_comma is not None or members == 0:
                    self._advance()
                    children.append(CstNode(Kind.ERROR, tok.start, tok.end))
                    self._diag(
                        tok.start, tok.end, DiagnosticCode.UNEXPECTED_TOKEN, "error", "stray comma"
                    )
                    members += 1
                    pending_comma = None
                else:
                    self._advance()
                    pending_comma = tok
                end = max(end, tok.end)
                continue
            run = self._consume_stray_run(frozenset({"str", ",", "}"}))
            children.append(run)
            members += 1
            pending_comma = None
            end = max(end, run.end)
        for child in children:
            end = max(end, child.end)
        return CstNode(Kind.OBJECT, open_tok.start, end, tuple(children))

    def _parse_property(self, depth: int) -> CstNode:
        name_tok = self._advance()
        name_node = CstNode(Kind.PROPERTY_NAME, name_tok.start, name_tok.end)
        if not name_tok.terminated:
            self._diag(
                name_tok.start,
                name_tok.end,
                DiagnosticCode.UNTERMINATED_STRING,
                "error",
                "unterminated property name",
            )
        children: list[CstNode] = [name_node]
        end = name_tok.end
        tok = self._peek_significant(children)
        has_colon = False
        if tok.kind == ":":
            self._advance()
            has_colon = True
            end = tok.end
            tok = self._peek_significant(children)
        elif tok.kind not in (",", "}", "eof"):
            self._diag(tok.start, tok.start, DiagnosticCode.UNEXPECTED_TOKEN, "error", "expected ':'")
        if tok.kind == ":":  # doubled colon after the one we consumed
            run = self._consume_stray_run(frozenset({",", "}"}) | _VALUE_STARTS)
            children.append(run)
            end = max(end, run.end)
            tok = self._peek_significant(children)
        can_value = tok.kind in _VALUE_STARTS or tok.kind in ("ident", "bad")
        if tok.kind == "str" and not has_colon:
            # a bare string after a name most likely starts the next member
            can_value = False
        if can_value:
            value = self._parse_value(children, depth)
            if value is not None:
                children.append(value)
                end = max(end, value.end)
        elif tok.kind in (",", "}", "]", "str"):
            children.append(CstNode(Kind.MISSING, tok.start, tok.start))
            self._diag(tok.start, tok.start, DiagnosticCode.MISSING_VALUE, "error", "missing value")
            end = max(end, tok.start)
        elif tok.kind == "eof" and name_tok.terminated:
            children.append(CstNode(Kind.MISSING, tok.start, tok.start))
            self._diag(tok.start, tok.start, DiagnosticCode.MISSING_VALUE, "error", "missing value")
            end = max(end, tok.start)
        # unterminated name at EOF: the author is mid-keystroke, no Missing slot
        for child in children:
            end = max(end, child.end)
        return CstNode(Kind.PROPERTY, name_tok.start, end, tuple(children))

    def _parse_array(self, depth: int) -> CstNode:
        open_tok = self._advance()
        children: list[CstNode] = []
        pending_comma: _Token | None = None
        members = 0
        end = open_tok.end
        while True:
            tok = self._peek_significant(children)
            if tok.kind == "]":
                self._advance()
                end = tok.end
                if pending_comma is not None:
                    self._diag(
                        pending_comma.start,
                        pending_comma.end,
                        DiagnosticCode.TRAILING_COMMA,
                        "warning",
                        "trailing comma",
                    )
                break
            if tok.kind == "eof":
                self._diag(
                    open_tok.start,
                    open_tok.end,
                    DiagnosticCode.UNBALANCED_BRACKET,
                    "error",
                    "missing closing bracket",
                )
                break
            if tok.kind == ",":
                if pending_comma is not None or members == 0:
                    # elided element between separators
                    children.append(CstNode(Kind.MISSING, tok.start, tok.start))
                    self._diag(
                        tok.start, tok.end, DiagnosticCode.MISSING_VALUE, "error", "missing value"
                    )
                    members += 1
                self._advance()
                pending_comma = tok
                end = max(end, tok.end)
                continue
            if tok.kind in _VALUE_STARTS or tok.kind in ("ident", "bad"):
                if members > 0 and pending_comma is None:
                    self._diag(
                        tok.start, tok.start, DiagnosticCode.MISSING_COMMA, "error", "missing comma"
                    )
                value = self._parse_value(children, depth)
                if value is None:  # unreachable given the kind check
                    value = self._consume_stray_run(frozenset({",", "]"}))
                children.append(value)
                members += 1
                pending_comma = None
                end = max(end, value.end)
                continue
            run = self._consume_stray_run(frozenset({",", "]"}))
            children.append(run)
            members += 1
            pending_comma = None
            end = max(end, run.end)
        for child in children:
            end = max(end, child.end)
        return CstNode(Kind.ARRAY, open_tok.start, end, tuple(children))


def parse(text: str | bytes) -> SyntaxTree:
    """Parse JSONC into a lossless tree. Never raises on malformed syntax."""
    if isinstance(text, bytes):
        try:
            decoded = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputEncodingError(str(exc)) from exc
        data = text
    else:
        decoded = text
        data = text.encode("utf-8")
    parser = _Parser(data)
    root = parser.parse_document()
    return SyntaxTree(decoded, data, root, parser.diags)
