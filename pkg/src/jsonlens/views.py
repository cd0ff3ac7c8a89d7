"""View registry, query matching, and anchor resolution.

A view couples a placement, a query over the syntax tree, and a widget
descriptor that clients render. Anchors are resolved in one pre-order
traversal; replace-placement conflicts follow a cascade where the view
registered last wins.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Union

from .errors import RegistryError
from .jsonc import (
    COMMENT_KINDS,
    CstNode,
    Index,
    Key,
    KeyName,
    KeyPath,
    Kind,
    Step,
    SyntaxTree,
    VALUE_KINDS,
)
from .schema import SchemaDoc, SchemaSet, descend, expand_entry

PLACEMENTS = ("inline-prefix", "inline-suffix", "inline-background", "replace", "menu")

WILDCARD = "*"


@dataclass(frozen=True)
class SyntaxNodeQuery:
    """Match nodes by parse-tree kind name."""

    kinds: tuple[str, ...]


@dataclass(frozen=True)
class KeyPathQuery:
    """Match nodes by key path; a `*` segment matches exactly one step."""

    patterns: tuple[tuple[Union[Step, str], ...], ...]


@dataclass(frozen=True)
class SchemaNodeQuery:
    """Match nodes whose applicable schemas include one of these names."""

    names: tuple[str, ...]


@dataclass(frozen=True)
class RegexQuery:
    """Match nodes whose source text matches one of these patterns."""

    patterns: tuple[str, ...]

    def compiled(self) -> tuple[re.Pattern[str], ...]:
        return tuple(re.compile(p) for p in self.patterns)


Query = Union[SyntaxNodeQuery, KeyPathQuery, SchemaNodeQuery, RegexQuery]


@dataclass(frozen=True)
class WidgetDescriptor:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ViewSpec:
    id: str
    placement: str
    query: Query
    widget: WidgetDescriptor
    registration_index: int = -1
    # optional in-process refinement of the query (used by a few built-ins
    # whose trigger depends on node content, not just the query algebra)
    guard: Callable[[SyntaxTree, CstNode, SchemaSet], bool] | None = None

    def __post_init__(self) -> None:
        if self.placement not in PLACEMENTS:
            raise ValueError(f"unknown placement {self.placement!r}")


class ViewRegistry:
    """Immutable ordered collection of views; registration copies."""

    def __init__(self, views: tuple[ViewSpec, ...] = (), next_index: int = 0):
        self.views = views
        self._next_index = next_index
        self._ids = {v.id for v in views}

    def __len__(self) -> int:
        return len(self.views)

    def __iter__(self):
        return iter(self.views)

    def get(self, view_id: str) -> ViewSpec | None:
        for view in self.views:
            if view.id == view_id:
                return view
        return None

    def register(self, spec: ViewSpec) -> "ViewRegistry":
        if spec.id in self._ids:
            raise RegistryError(f"view id {spec.id!r} already registered")
        stamped = replace(spec, registration_index=self._next_index)
        return ViewRegistry(self.views + (stamped,), self._next_index + 1)

    def remove(self, view_id: str) -> "ViewRegistry":
        if view_id not in self._ids:
            raise RegistryError(f"view id {view_id!r} not registered")
        kept = tuple(v for v in self.views if v.id != view_id)
        return ViewRegistry(kept, self._next_index)


@dataclass(frozen=True)
class Anchor:
    view_id: str
    start: int
    end: int
    key_path: KeyPath
    placement: str
    payload: dict[str, Any]


@dataclass(frozen=True)
class ResolveStatus:
    views_deactivated: bool = False
    query_evaluations: int = 0


def _step_matches(pattern: Union[Step, str], step: Step) -> bool:
    if pattern == WILDCARD:
        return True
    return pattern == step


def matches(
    query: Query,
    node: CstNode,
    key_path: KeyPath,
    schema_set: SchemaSet,
    node_text: str = "",
) -> bool:
    """Evaluate one query against one node."""
    if isinstance(query, SyntaxNodeQuery):
        return node.kind.value in query.kinds
    if isinstance(query, KeyPathQuery):
        for pattern in query.patterns:
            if len(pattern) == len(key_path.steps) and all(
                _step_matches(p, s) for p, s in zip(pattern, key_path.steps)
            ):
                return True
        return False
    if isinstance(query, SchemaNodeQuery):
        names = set(schema_set.names())
        return any(name in names for name in query.names)
    if isinstance(query, RegexQuery):
        return any(p.search(node_text) for p in query.compiled())
    raise TypeError(f"unknown query type {type(query).__name__}")


def resolve_anchors(
    tree: SyntaxTree,
    schema: SchemaDoc | None,
    registry: ViewRegistry,
) -> tuple[list[Anchor], ResolveStatus]:
    """Match every view against every node in one pre-order traversal.

    Nodes covered by an Error node emit nothing; an Error at the root
    deactivates all views.
    """
    if tree.root.kind is Kind.ERROR:
        return [], ResolveStatus(views_deactivated=True)
    anchors: list[Anchor] = []
    evaluations = 0
    root_entries = (
        tuple(_dedupe_entries(expand_entry(schema, schema.root))) if schema is not None else ()
    )

    def visit(node: CstNode, key_path: KeyPath, entries: tuple, in_error: bool) -> None:
        nonlocal evaluations
        schema_set = SchemaSet(tuple(entries))
        node_text = tree.node_text(node)
        suppressed = in_error or node.kind is Kind.ERROR
        matched: list[ViewSpec] = []
        for view in registry:
            evaluations += 1
            if matches(view.query, node, key_path, schema_set, node_text):
                if view.guard is None or view.guard(tree, node, schema_set):
                    matched.append(view)
        if not suppressed and matched:
            # anchors must be addressable: range and key path name one node
            if tree.resolve_key_path(key_path) is not node:
                matched = []
        if not suppressed and matched:
            replace_views = [v for v in matched if v.placement == "replace"]
            survivor = max(replace_views, key=lambda v: v.registration_index) if replace_views else None
            for view in matched:
                if view.placement == "replace" and view is not survivor:
                    continue
                anchors.append(
                    Anchor(
                        view.id,
                        node.start,
                        node.end,
                        key_path,
                        view.placement,
                        _payload(tree, node, schema_set, view),
                    )
                )
        for child in node.children:
            child_path = key_path
            child_entries = entries
            child_error = suppressed or node.kind is Kind.ERROR
            if node.kind is Kind.PROPERTY:
                name = tree.property_name(node)
                if child.kind is Kind.PROPERTY_NAME:
                    # key tokens carry no schema set of their own; SchemaNode
                    # queries select values, not names
                    child_path = key_path.child(KeyName(name))
                    child_entries = ()
                elif child.kind in VALUE_KINDS or child.kind is Kind.MISSING or child.kind is Kind.ERROR:
                    child_path = key_path.child(Key(name))
                    child_entries = descend(schema, entries, Key(name)) if schema else ()
            elif node.kind is Kind.ARRAY and (
                child.kind in VALUE_KINDS or child.kind is Kind.MISSING
            ):
                index = tree.elements(node).index(child)
                child_path = key_path.child(Index(index))
                child_entries = descend(schema, entries, Index(index)) if schema else ()
            visit(child, child_path, child_entries, child_error)

    visit(tree.root, KeyPath(), root_entries, False)
    return anchors, ResolveStatus(False, evaluations)


def _dedupe_entries(entries: list) -> list:
    seen: set[str] = set()
    out = []
    for entry in entries:
        if entry.pointer not in seen:
            seen.add(entry.pointer)
            out.append(entry)
    return out


# --- anchor payloads ----------------------------------------------------------


def _payload(tree: SyntaxTree, node: CstNode, schema_set: SchemaSet, view: ViewSpec) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "nodeKind": node.kind.value,
        "nodeText": tree.node_text(node),
        "schemaNames": list(schema_set.names()),
        "suggestionFlag": False,
    }
    params = _widget_params(tree, node, schema_set, view)
    if params:
        payload["widgetParams"] = params
    return payload


def _widget_params(
    tree: SyntaxTree, node: CstNode, schema_set: SchemaSet, view: ViewSpec
) -> dict[str, Any] | None:
    kind = view.widget.kind
    if kind == "booleanToggle" and node.kind in (Kind.TRUE, Kind.FALSE):
        return {"value": node.kind is Kind.TRUE}
    if kind == "numberSlider" and node.kind is Kind.NUMBER:
        try:
            value = tree.to_value(node)
        except ValueError:
            return None
        minimum = maximum = None
        for entry in schema_set:
            if minimum is None and isinstance(entry.get("minimum"), (int, float)):
                minimum = entry.get("minimum")
            if maximum is None and isinstance(entry.get("maximum"), (int, float)):
                maximum = entry.get("maximum")
        low = minimum if minimum is not None else value - abs(value) - 10
        high = maximum if maximum is not None else value + abs(value) + 10
        if high <= low:
            high = low + 1
        return {"value": value, "min": low, "max": high, "step": (high - low) / 100}
    if kind in ("colorChip", "colorPicker") and node.kind is Kind.STRING:
        return {"color": tree.to_value(node)}
    if kind == "picklist":
        options = schema_set.enum_options()
        if options:
            return {"options": list(options)}
        return None
    if kind == "sparkSummary" and node.kind is Kind.ARRAY:
        values = _numeric_elements(tree, node)
        if values:
            return {
                "min": min(values),
                "mean": sum(values) / len(values),
                "max": max(values),
                "count": len(values),
            }
        return None
    return view.widget.params or None


def _numeric_elements(tree: SyntaxTree, node: CstNode) -> list[float]:
    out = []
    for element in tree.elements(node):
        if element.kind is not Kind.NUMBER:
            return []
        try:
            out.append(tree.to_value(element))
        except ValueError:
            return []
    return out


# --- built-in preamble ---------------------------------------------------------

# extended CSS color keywords; used to put chips on named colors
CSS_COLOR_NAMES = (
    "aliceblue,antiquewhite,aqua,aquamarine,azure,beige,bisque,black,blanchedalmond,"
    "blue,blueviolet,brown,burlywood,cadetblue,chartreuse,chocolate,coral,cornflowerblue,"
    "cornsilk,crimson,cyan,darkblue,darkcyan,darkgoldenrod,darkgray,darkgreen,darkgrey,"
    "darkkhaki,darkmagenta,darkolivegreen,darkorange,darkorchid,darkred,darksalmon,"
    "darkseagreen,darkslateblue,darkslategray,darkslategrey,darkturquoise,darkviolet,"
    "deeppink,deepskyblue,dimgray,dimgrey,dodgerblue,firebrick,floralwhite,forestgreen,"
    "fuchsia,gainsboro,ghostwhite,gold,goldenrod,gray,green,greenyellow,grey,honeydew,"
    "hotpink,indianred,indigo,ivory,khaki,lavender,lavenderblush,lawngreen,lemonchiffon,"
    "lightblue,lightcoral,lightcyan,lightgoldenrodyellow,lightgray,lightgreen,lightgrey,"
    "lightpink,lightsalmon,lightseagreen,lightskyblue,lightslategray,lightslategrey,"
    "lightsteelblue,lightyellow,lime,limegreen,linen,magenta,maroon,mediumaquamarine,"
    "mediumblue,mediumorchid,mediumpurple,mediumseagreen,mediumslateblue,mediumspringgreen,"
    "mediumturquoise,mediumvioletred,midnightblue,mintcream,mistyrose,moccasin,navajowhite,"
    "navy,oldlace,olive,olivedrab,orange,orangered,orchid,palegoldenrod,palegreen,"
    "paleturquoise,palevioletred,papayawhip,peachpuff,peru,pink,plum,powderblue,purple,"
    "rebeccapurple,red,rosybrown,royalblue,saddlebrown,salmon,sandybrown,seagreen,seashell,"
    "sienna,silver,skyblue,slateblue,slategray,slategrey,snow,springgreen,steelblue,tan,"
    "teal,thistle,tomato,turquoise,violet,wheat,white,whitesmoke,yellow,yellowgreen"
).split(",")

_HEX_COLOR_PATTERN = r'^"#[0-9a-fA-F]{6}"$'
_NAME_COLOR_PATTERN = '^"(' + "|".join(CSS_COLOR_NAMES) + ')"$'

SPARK_MIN_ELEMENTS = 8


def _enum_guard(tree: SyntaxTree, node: CstNode, schema_set: SchemaSet) -> bool:
    return schema_set.has_enum


def _spark_guard(tree: SyntaxTree, node: CstNode, schema_set: SchemaSet) -> bool:
    return len(_numeric_elements(tree, node)) >= SPARK_MIN_ELEMENTS


def quiet_quote_view(view_id: str = "quiet-quotes") -> ViewSpec:
    """Quote-hiding projection over property names and string literals."""
    return ViewSpec(
        id=view_id,
        placement="inline-background",
        query=SyntaxNodeQuery((Kind.PROPERTY_NAME.value, Kind.STRING.value)),
        widget=WidgetDescriptor("quietQuote"),
    )


def builtin_views() -> list[ViewSpec]:
    """Default preamble of common tools; each removable by id."""
    scalar_kinds = (
        Kind.STRING.value,
        Kind.NUMBER.value,
        Kind.TRUE.value,
        Kind.FALSE.value,
        Kind.NULL.value,
        Kind.MISSING.value,
    )
    every_kind = tuple(k.value for k in Kind)
    return [
        ViewSpec(
            id="builtin.boolean-toggle",
            placement="inline-suffix",
            query=SyntaxNodeQuery((Kind.TRUE.value, Kind.FALSE.value)),
            widget=WidgetDescriptor("booleanToggle"),
        ),
        ViewSpec(
            id="builtin.color-chip",
            placement="inline-prefix",
            query=RegexQuery((_HEX_COLOR_PATTERN, _NAME_COLOR_PATTERN)),
            widget=WidgetDescriptor("colorChip"),
        ),
        ViewSpec(
            id="builtin.color-picker",
            placement="menu",
            query=RegexQuery((_HEX_COLOR_PATTERN, _NAME_COLOR_PATTERN)),
            widget=WidgetDescriptor("colorPicker"),
        ),
        ViewSpec(
            id="builtin.number-slider",
            placement="inline-suffix",
            query=SyntaxNodeQuery((Kind.NUMBER.value,)),
            widget=WidgetDescriptor("numberSlider"),
        ),
        ViewSpec(
            id="builtin.picklist",
            placement="inline-suffix",
            query=SyntaxNodeQuery(scalar_kinds),
            widget=WidgetDescriptor("picklist"),
            guard=_enum_guard,
        ),
        ViewSpec(
            id="builtin.spark-summary",
            placement="replace",
            query=SyntaxNodeQuery((Kind.ARRAY.value,)),
            widget=WidgetDescriptor("sparkSummary"),
            guard=_spark_guard,
        ),
        ViewSpec(
            id="builtin.sort-keys",
            placement="menu",
            query=SyntaxNodeQuery((Kind.OBJECT.value,)),
            widget=WidgetDescriptor("custom", {"name": "objectSorter", "label": "Sort keys", "action": "sortKeys"}),
        ),
        ViewSpec(
            id="builtin.format",
            placement="menu",
            query=SyntaxNodeQuery(every_kind),
            widget=WidgetDescriptor("custom", {"name": "formatter", "label": "Format document", "action": "formatDocument"}),
        ),
    ]


def default_registry() -> ViewRegistry:
    registry = ViewRegistry()
    for view in builtin_views():
        registry = registry.register(view)
    return registry
