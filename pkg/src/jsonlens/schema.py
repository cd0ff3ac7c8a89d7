"""JSON Schema loading, applicable-subschema inference, synthesis, validation.

Handles a draft-07 style keyword subset. Unsupported keywords are recorded
on each schema node instead of being silently dropped. Only internal
references resolve; external refs are rejected at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import SchemaRefError, UnsupportedRefError
from .jsonc import CstNode, Index, Key, KeyName, KeyPath, Kind, Step, SyntaxTree

SUPPORTED_KEYWORDS = frozenset(
    {
        "type",
        "enum",
        "const",
        "properties",
        "required",
        "additionalProperties",
        "items",
        "anyOf",
        "oneOf",
        "allOf",
        "$ref",
        "title",
        "description",
        "minimum",
        "maximum",
        "minItems",
        "maxItems",
    }
)
_STRUCTURAL_KEYS = frozenset({"definitions", "$defs", "$schema", "$id"})


def _escape_pointer(part: str) -> str:
    return part.replace("~", "~0").replace("/", "~1")


def _unescape_pointer(part: str) -> str:
    return part.replace("~1", "/").replace("~0", "~")


def _pointer_name(pointer: str) -> str:
    """Definition name for refs into definitions/$defs, else the pointer itself."""
    parts = pointer.split("/")
    if len(parts) == 3 and parts[0] == "#" and parts[1] in ("definitions", "$defs"):
        return _unescape_pointer(parts[2])
    return pointer


@dataclass(frozen=True)
class SchemaNode:
    """One resolved subschema: a raw fragment plus its identity and provenance."""

    pointer: str
    schema: Any  # dict or bool
    name: str
    via: tuple[str, ...] = ()
    conflicts: tuple[str, ...] = ()

    def get(self, keyword: str, default: Any = None) -> Any:
        if isinstance(self.schema, dict):
            return self.schema.get(keyword, default)
        return default

    @property
    def unsupported_keywords(self) -> tuple[str, ...]:
        if not isinstance(self.schema, dict):
            return ()
        return tuple(sorted(set(self.schema) - SUPPORTED_KEYWORDS - _STRUCTURAL_KEYS))

    @property
    def enum_values(self) -> tuple[Any, ...]:
        if isinstance(self.schema, dict) and "const" in self.schema:
            return (self.schema["const"],)
        enum = self.get("enum")
        return tuple(enum) if isinstance(enum, list) else ()

    @property
    def type_names(self) -> tuple[str, ...]:
        t = self.get("type")
        if isinstance(t, str):
            return (t,)
        if isinstance(t, list):
            return tuple(x for x in t if isinstance(x, str))
        return ()

    def describe(self) -> str:
        """Short human-readable summary used for menu type info."""
        if not isinstance(self.schema, dict):
            return "any" if self.schema else "nothing"
        if "const" in self.schema:
            return f"const {json.dumps(self.schema['const'])}"
        if "enum" in self.schema:
            members = ", ".join(json.dumps(v) for v in self.schema["enum"][:6])
            return f"enum({members})"
        if self.type_names:
            return " | ".join(self.type_names)
        if "properties" in self.schema or "required" in self.schema:
            return "object"
        return "any"


@dataclass(frozen=True)
class SchemaSet:
    """Subschemas applicable at one tree position, in schema document order."""

    entries: tuple[SchemaNode, ...] = ()

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def type_union(self) -> tuple[str, ...]:
        seen: list[str] = []
        for entry in self.entries:
            for t in entry.type_names:
                if t not in seen:
                    seen.append(t)
        return tuple(seen)

    def enum_options(self) -> tuple[Any, ...]:
        seen: list[Any] = []
        for entry in self.entries:
            for value in entry.enum_values:
                if value not in seen:
                    seen.append(value)
        return tuple(seen)

    @property
    def has_enum(self) -> bool:
        return any(entry.enum_values for entry in self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self) -> Iterator[SchemaNode]:
        return iter(self.entries)


class SchemaDoc:
    """A loaded schema document with all internal refs verified."""

    def __init__(self, raw: dict | bool, source_uri: str = "<inline>"):
        self.raw = raw
        self.source_uri = source_uri
        self.cycles: list[str] = []
        self._check_refs()
        self.definitions: dict[str, SchemaNode] = {}
        if isinstance(raw, dict):
            for bucket in ("definitions", "$defs"):
                defs = raw.get(bucket)
                if isinstance(defs, dict):
                    for name, fragment in defs.items():
                        pointer = f"#/{bucket}/{_escape_pointer(name)}"
                        self.definitions.setdefault(
                            name, SchemaNode(pointer, fragment, name)
                        )

    @property
    def root(self) -> SchemaNode:
        return SchemaNode("#", self.raw, "#")

    def resolve_pointer(self, pointer: str) -> Any:
        if not pointer.startswith("#"):
            raise UnsupportedRefError(f"external reference not supported: {pointer}")
        cur = self.raw
        rest = pointer[1:]
        if rest.startswith("/"):
            for part in rest[1:].split("/"):
                key = _unescape_pointer(part)
                if isinstance(cur, dict) and key in cur:
                    cur = cur[key]
                elif isinstance(cur, list) and key.isdigit() and int(key) < len(cur):
                    cur = cur[int(key)]
                else:
                    raise SchemaRefError(f"unresolvable reference: {pointer}")
        elif rest:
            raise SchemaRefError(f"unresolvable reference: {pointer}")
        return cur

    def node_at(self, pointer: str) -> SchemaNode:
        return SchemaNode(pointer, self.resolve_pointer(pointer), _pointer_name(pointer))

    def _iter_refs(self) -> Iterator[tuple[str, str]]:
        """(container pointer, target pointer) for every $ref in the document."""

        def walk(fragment: Any, pointer: str) -> Iterator[tuple[str, str]]:
            if isinstance(fragment, dict):
                ref = fragment.get("$ref")
                if isinstance(ref, str):
                    yield pointer, ref
                for key, value in fragment.items():
                    yield from walk(value, f"{pointer}/{_escape_pointer(key)}")
            elif isinstance(fragment, list):
                for i, value in enumerate(fragment):
                    yield from walk(value, f"{pointer}/{i}")

        yield from walk(self.raw, "#")

    def _check_refs(self) -> None:
        targets: dict[str, set[str]] = {}
        for container, ref in self._iter_refs():
            if not ref.startswith("#"):
                raise UnsupportedRefError(f"external reference not supported: {ref}")
            self.resolve_pointer(ref)  # raises SchemaRefError when dangling
            targets.setdefault(container, set()).add(ref)
        # record reference cycles (allowed; informs search/inference guards)
        state: dict[str, int] = {}

        def visit(pointer: str) -> None:
            state[pointer] = 1
            for container, refs in targets.items():
                if container == pointer or container.startswith(pointer + "/"):
                    for ref in refs:
                        if state.get(ref) == 1:
                            if ref not in self.cycles:
                                self.cycles.append(ref)
                        elif state.get(ref) is None:
                            visit(ref)
            state[pointer] = 2

        for start in list(targets):
            if state.get(start) is None:
                visit(start)


def load_schema(source: str | dict, source_uri: str = "<inline>") -> SchemaDoc:
    """Load a schema from strict-JSON text or an already-parsed dict."""
    raw = json.loads(source) if isinstance(source, str) else source
    return SchemaDoc(raw, source_uri)


# --- expansion and inference -------------------------------------------------


_COMBINATORS = ("anyOf", "oneOf", "allOf")


def _merge_two(base: dict, extra: dict, conflicts: list[str]) -> dict:
    """Keyword-wise merge used for allOf; disagreements are recorded."""
    merged = dict(base)
    for key, value in extra.items():
        if key not in merged:
            merged[key] = value
            continue
        prior = merged[key]
        if prior == value:
            continue
        if key == "required" and isinstance(prior, list) and isinstance(value, list):
            merged[key] = prior + [v for v in value if v not in prior]
        elif key == "properties" and isinstance(prior, dict) and isinstance(value, dict):
            combined = dict(prior)
            for name, sub in value.items():
                if name in combined and combined[name] != sub:
                    conflicts.append(f"properties.{name}")
                else:
                    combined.setdefault(name, sub)
            merged[key] = combined
        elif key in ("minimum", "minItems"):
            merged[key] = max(prior, value)
        elif key in ("maximum", "maxItems"):
            merged[key] = min(prior, value)
        elif key == "enum" and isinstance(prior, list) and isinstance(value, list):
            intersection = [v for v in prior if v in value]
            if not intersection:
                conflicts.append("enum")
            merged[key] = intersection or prior
        elif key == "type":
            prior_set = prior if isinstance(prior, list) else [prior]
            value_set = value if isinstance(value, list) else [value]
            common = [t for t in prior_set if t in value_set]
            if not common:
                conflicts.append("type")
            merged[key] = common[0] if len(common) == 1 else (common or prior)
        else:
            conflicts.append(key)
    return merged


def expand_entry(doc: SchemaDoc, entry: SchemaNode, _visiting: frozenset[str] = frozenset()) -> list[SchemaNode]:
    """Resolve refs and flatten combinators into concrete alternatives."""
    schema = entry.schema
    if not isinstance(schema, dict):
        return [entry]
    ref = schema.get("$ref")
    if isinstance(ref, str):
        if ref in _visiting:
            return []
        target = doc.node_at(ref)
        siblings = {k: v for k, v in schema.items() if k != "$ref"}
        merged_schema = target.schema
        conflicts = list(entry.conflicts)
        if siblings and isinstance(target.schema, dict):
            merged_schema = _merge_two(target.schema, siblings, conflicts)
        next_entry = SchemaNode(
            target.pointer,
            merged_schema,
            target.name,
            entry.via + (f"$ref:{target.name}",),
            tuple(conflicts),
        )
        return expand_entry(doc, next_entry, _visiting | {ref})
    if "allOf" in schema and isinstance(schema["allOf"], list):
        conflicts = list(entry.conflicts)
        merged = {k: v for k, v in schema.items() if k != "allOf"}
        for branch in schema["allOf"]:
            branch_schema = branch
            if isinstance(branch, dict) and isinstance(branch.get("$ref"), str):
                branch_schema = doc.resolve_pointer(branch["$ref"])
            if isinstance(branch_schema, dict):
                merged = _merge_two(merged, branch_schema, conflicts)
        return expand_entry(
            doc,
            SchemaNode(entry.pointer, merged, entry.name, entry.via + ("allOf",), tuple(conflicts)),
            _visiting,
        )
    for combinator in ("anyOf", "oneOf"):
        branches = schema.get(combinator)
        if isinstance(branches, list):
            siblings = {k: v for k, v in schema.items() if k != combinator}
            out: list[SchemaNode] = []
            for i, branch in enumerate(branches):
                branch_entry = SchemaNode(
                    f"{entry.pointer}/{combinator}/{i}",
                    branch,
                    _pointer_name(f"{entry.pointer}/{combinator}/{i}"),
                    entry.via + (f"{combinator}[{i}]",),
                    entry.conflicts,
                )
                expanded = expand_entry(doc, branch_entry, _visiting)
                if siblings:
                    expanded = [
                        SchemaNode(
                            e.pointer,
                            _merge_two(e.schema, siblings, list(e.conflicts)) if isinstance(e.schema, dict) else e.schema,
                            e.name,
                            e.via,
                            e.conflicts,
                        )
                        for e in expanded
                    ]
                out.extend(expanded)
            return out
    return [entry]


def _dedupe(entries: list[SchemaNode]) -> tuple[SchemaNode, ...]:
    seen: set[str] = set()
    out: list[SchemaNode] = []
    for entry in entries:
        if entry.pointer not in seen:
            seen.add(entry.pointer)
            out.append(entry)
    return tuple(out)


def descend(doc: SchemaDoc, entries: tuple[SchemaNode, ...], step: Step) -> tuple[SchemaNode, ...]:
    """Applicable subschemas one step further down the document."""
    out: list[SchemaNode] = []
    for entry in entries:
        schema = entry.schema
        if not isinstance(schema, dict):
            continue
        if isinstance(step, (Key, KeyName)):
            props = schema.get("properties")
            if isinstance(props, dict) and step.name in props:
                child = SchemaNode(
                    f"{entry.pointer}/properties/{_escape_pointer(step.name)}",
                    props[step.name],
                    _pointer_name(f"{entry.pointer}/properties/{_escape_pointer(step.name)}"),
                    entry.via,
                )
                out.extend(expand_entry(doc, child))
            else:
                additional = schema.get("additionalProperties")
                if isinstance(additional, dict) or additional is True:
                    child = SchemaNode(
                        f"{entry.pointer}/additionalProperties",
                        {} if additional is True else additional,
                        _pointer_name(f"{entry.pointer}/additionalProperties"),
                        entry.via,
                    )
                    out.extend(expand_entry(doc, child))
        elif isinstance(step, Index):
            items = schema.get("items")
            if isinstance(items, dict):
                child = SchemaNode(
                    f"{entry.pointer}/items", items, _pointer_name(f"{entry.pointer}/items"), entry.via
                )
                out.extend(expand_entry(doc, child))
            elif isinstance(items, list) and 0 <= step.i < len(items):
                child = SchemaNode(
                    f"{entry.pointer}/items/{step.i}",
                    items[step.i],
                    _pointer_name(f"{entry.pointer}/items/{step.i}"),
                    entry.via,
                )
                out.extend(expand_entry(doc, child))
    return _dedupe(out)


def infer_schema_set(doc: SchemaDoc, path: KeyPath, tree: SyntaxTree | None = None) -> SchemaSet:
    """All subschemas reachable at `path` by descending from the root.

    Alternation branches stay unfiltered so menus can offer every option;
    an unreachable path yields an empty set.
    """
    entries = _dedupe(expand_entry(doc, doc.root))
    for step in path:
        entries = descend(doc, entries, step)
        if not entries:
            break
    return SchemaSet(entries)


# --- synthesis ---------------------------------------------------------------


@dataclass(frozen=True)
class SynthesisResult:
    value: Any
    truncated: bool


def synthesize_minimal(doc: SchemaDoc, node: SchemaNode | Any, depth_limit: int = 16) -> SynthesisResult:
    """Smallest instance that satisfies the schema's required structure.

    Deterministic tie-breaks: first enum member, first alternation branch,
    `minimum` for numbers. When the depth limit cuts recursion short the
    result is null with the truncation marker set.
    """
    schema = node.schema if isinstance(node, SchemaNode) else node
    value, truncated = _synth(doc, schema, depth_limit)
    return SynthesisResult(value, truncated)


def _synth(doc: SchemaDoc, schema: Any, depth: int) -> tuple[Any, bool]:
    if depth <= 0:
        return None, True
    if schema is True or schema is None:
        return None, False
    if schema is False:
        return None, True
    if not isinstance(schema, dict):
        return None, False
    ref = schema.get("$ref")
    if isinstance(ref, str):
        return _synth(doc, doc.resolve_pointer(ref), depth - 1)
    if "const" in schema:
        return schema["const"], False
    enum = schema.get("enum")
    if isinstance(enum, list) and enum:
        return enum[0], False
    all_of = schema.get("allOf")
    if isinstance(all_of, list) and all_of:
        conflicts: list[str] = []
        merged = {k: v for k, v in schema.items() if k != "allOf"}
        for branch in all_of:
            if isinstance(branch, dict) and isinstance(branch.get("$ref"), str):
                branch = doc.resolve_pointer(branch["$ref"])
            if isinstance(branch, dict):
                merged = _merge_two(merged, branch, conflicts)
        return _synth(doc, merged, depth - 1)
    for combinator in ("anyOf", "oneOf"):
        branches = schema.get(combinator)
        if isinstance(branches, list) and branches:
            return _synth(doc, branches[0], depth - 1)
    type_name = schema.get("type")
    if isinstance(type_name, list):
        type_name = type_name[0] if type_name else None
    if type_name is None and ("properties" in schema or "required" in schema):
        type_name = "object"
    if type_name == "object":
        out: dict[str, Any] = {}
        truncated = False
        props = schema.get("properties") or {}
        required = schema.get("required") or []
        for name in required:
            if not isinstance(name, str):
                continue
            prop_schema = props.get(name)
            if prop_schema is None:
                additional = schema.get("additionalProperties")
                prop_schema = additional if isinstance(additional, dict) else True
            value, t = _synth(doc, prop_schema, depth - 1)
            out[name] = value
            truncated = truncated or t
        return out, truncated
    if type_name == "string":
        return "", False
    if type_name in ("number", "integer"):
        minimum = schema.get("minimum")
        return (minimum if isinstance(minimum, (int, float)) else 0), False
    if type_name == "boolean":
        return False, False
    if type_name == "null":
        return None, False
    if type_name == "array":
        min_items = schema.get("minItems")
        if isinstance(min_items, int) and min_items > 0:
            items = schema.get("items")
            item_schema = items if isinstance(items, dict) else True
            truncated = False
            out_list = []
            for _ in range(min_items):
                value, t = _synth(doc, item_schema, depth - 1)
                out_list.append(value)
                truncated = truncated or t
            return out_list, truncated
        return [], False
    return None, False


# --- validation --------------------------------------------------------------


class _Sentinel:
    pass


_NOT_A_VALUE = _Sentinel()


@dataclass(frozen=True)
class ValidationDiagnostic:
    key_path: KeyPath
    message: str
    rule: str
    severity: str = "error"


_JSON_TYPE_OF_KIND = {
    Kind.OBJECT: "object",
    Kind.ARRAY: "array",
    Kind.STRING: "string",
    Kind.NUMBER: "number",
    Kind.TRUE: "boolean",
    Kind.FALSE: "boolean",
    Kind.NULL: "null",
}


def validate(tree: SyntaxTree, doc: SchemaDoc) -> list[ValidationDiagnostic]:
    """Diagnostics for every violated supported keyword.

    Alternation failures report the branch with the fewest violations.
    Subtrees containing parse errors are skipped; parse diagnostics
    already cover them.
    """
    root = tree.root
    diags: list[ValidationDiagnostic] = []
    if root.kind is Kind.MISSING:
        required = doc.raw.get("required") if isinstance(doc.raw, dict) else None
        if isinstance(required, list) and required:
            names = ", ".join(str(n) for n in required)
            diags.append(
                ValidationDiagnostic(KeyPath(), f"missing required properties: {names}", "required")
            )
        return diags
    if root.kind is Kind.ERROR:
        return []
    diags.extend(_validate_node(tree, doc, root, doc.raw, KeyPath(), frozenset()))
    _check_duplicate_keys(tree, root, KeyPath(), diags)
    return diags


def _check_duplicate_keys(
    tree: SyntaxTree, node: CstNode, path: KeyPath, diags: list[ValidationDiagnostic]
) -> None:
    if node.kind is Kind.OBJECT:
        seen: set[str] = set()
        for prop in tree.properties(node):
            name = tree.property_name(prop)
            if name in seen:
                diags.append(
                    ValidationDiagnostic(path, f"duplicate key {name!r}", "duplicateKey", "warning")
                )
            seen.add(name)
            value = tree.property_value(prop)
            if value is not None:
                _check_duplicate_keys(tree, value, path.child(Key(name)), diags)
    elif node.kind is Kind.ARRAY:
        for i, element in enumerate(tree.elements(node)):
            _check_duplicate_keys(tree, element, path.child(Index(i)), diags)


def _validate_node(
    tree: SyntaxTree,
    doc: SchemaDoc,
    node: CstNode,
    schema: Any,
    path: KeyPath,
    visiting: frozenset[tuple[int, str]],
) -> list[ValidationDiagnostic]:
    if node.kind in (Kind.ERROR, Kind.MISSING):
        return []
    if schema is True or schema is None:
        return []
    if schema is False:
        return [ValidationDiagnostic(path, "value not allowed here", "additionalProperties")]
    if not isinstance(schema, dict):
        return []
    ref = schema.get("$ref")
    if isinstance(ref, str):
        guard = (id(node), ref)
        if guard in visiting:
            return []
        return _validate_node(tree, doc, node, doc.resolve_pointer(ref), path, visiting | {guard})

    diags: list[ValidationDiagnostic] = []
    all_of = schema.get("allOf")
    if isinstance(all_of, list):
        for branch in all_of:
            diags.extend(_validate_node(tree, doc, node, branch, path, visiting))
    for combinator in ("anyOf", "oneOf"):
        branches = schema.get(combinator)
        if isinstance(branches, list) and branches:
            per_branch = [
                _validate_node(tree, doc, node, branch, path, visiting) for branch in branches
            ]
            if not any(len(b) == 0 for b in per_branch):
                diags.extend(min(per_branch, key=len))

    type_req = schema.get("type")
    if type_req is not None:
        allowed = type_req if isinstance(type_req, list) else [type_req]
        actual = _JSON_TYPE_OF_KIND.get(node.kind)
        ok = actual in allowed
        if not ok and "integer" in allowed and actual == "number":
            try:
                ok = float(tree.to_value(node)) == int(float(tree.to_value(node)))
            except (ValueError, OverflowError):
                ok = False
        if not ok:
            diags.append(
                ValidationDiagnostic(path, f"expected {' or '.join(map(str, allowed))}, got {actual}", "type")
            )

    if "const" in schema or "enum" in schema:
        try:
            value = tree.to_value(node)
        except ValueError:
            value = _NOT_A_VALUE
        if value is not _NOT_A_VALUE:
            if "const" in schema and value != schema["const"]:
                diags.append(
                    ValidationDiagnostic(path, f"expected {json.dumps(schema['const'])}", "const")
                )
            enum = schema.get("enum")
            if isinstance(enum, list) and value not in enum:
                options = ", ".join(json.dumps(v) for v in enum[:8])
                diags.append(ValidationDiagnostic(path, f"value must be one of: {options}", "enum"))

    if node.kind is Kind.NUMBER:
        try:
            number = tree.to_value(node)
        except ValueError:
            number = None
        if isinstance(number, (int, float)):
            minimum = schema.get("minimum")
            if isinstance(minimum, (int, float)) and number < minimum:
                diags.append(ValidationDiagnostic(path, f"must be >= {minimum}", "minimum"))
            maximum = schema.get("maximum")
            if isinstance(maximum, (int, float)) and number > maximum:
                diags.append(ValidationDiagnostic(path, f"must be <= {maximum}", "maximum"))

    if node.kind is Kind.OBJECT:
        props = schema.get("properties") if isinstance(schema.get("properties"), dict) else {}
        present: dict[str, Any] = {}
        for prop in tree.properties(node):
            name = tree.property_name(prop)
            if name in present:
                continue
            value_node = tree.property_value(prop)
            if value_node is None:
                continue
            present[name] = value_node
        for name, value_node in present.items():
            child_path = path.child(Key(name))
            if name in props:
                diags.extend(_validate_node(tree, doc, value_node, props[name], child_path, visiting))
            else:
                additional = schema.get("additionalProperties")
                if additional is False:
                    diags.append(
                        ValidationDiagnostic(
                            child_path, f"property {name!r} is not allowed", "additionalProperties"
                        )
                    )
                elif isinstance(additional, dict):
                    diags.extend(
                        _validate_node(tree, doc, value_node, additional, child_path, visiting)
                    )
        required = schema.get("required")
        if isinstance(required, list):
            for name in required:
                if isinstance(name, str) and name not in present:
                    diags.append(
                        ValidationDiagnostic(path, f"missing required property {name!r}", "required")
                    )

    if node.kind is Kind.ARRAY:
        elements = [e for e in tree.elements(node)]
        items = schema.get("items")
        for i, element in enumerate(elements):
            child_path = path.child(Index(i))
            if isinstance(items, dict):
                diags.extend(_validate_node(tree, doc, element, items, child_path, visiting))
            elif isinstance(items, list) and i < len(items):
                diags.extend(_validate_node(tree, doc, element, items[i], child_path, visiting))
        min_items = schema.get("minItems")
        if isinstance(min_items, int) and len(elements) < min_items:
            diags.append(ValidationDiagnostic(path, f"needs at least {min_items} items", "minItems"))
        max_items = schema.get("maxItems")
        if isinstance(max_items, int) and len(elements) > max_items:
            diags.append(ValidationDiagnostic(path, f"allows at most {max_items} items", "maxItems"))

    return diags
