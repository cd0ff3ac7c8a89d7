"""Headless projectional editing engine for JSON-based DSLs.

Parses JSONC into lossless syntax trees, derives structure-editor menus
and edit actions from JSON Schemas, resolves registered views onto tree
anchors, searches schemas in place, and synchronizes generative-grammar
output edits back into their grammar. Served over JSON-RPC (stdio or
WebSocket) and as a batch CLI named `engine`.
"""

from .edits import (
    EditAction,
    TextEdit,
    apply_edits,
    apply_edits_with_inverse,
    compile_action,
    format_document,
)
from .errors import EngineError
from .jsonc import (
    CstNode,
    DiagnosticCode,
    Index,
    Key,
    KeyName,
    KeyPath,
    Kind,
    ParseDiagnostic,
    SyntaxTree,
    parse,
    serialize,
)
from .menu import (
    Menu,
    MenuItem,
    SearchSuggestion,
    extract_query_at_cursor,
    filter_menu,
    menu_for,
    schema_search,
)
from .schema import (
    SchemaDoc,
    SchemaNode,
    SchemaSet,
    SynthesisResult,
    ValidationDiagnostic,
    infer_schema_set,
    load_schema,
    synthesize_minimal,
    validate,
)
from .service import Engine
from .tracery import (
    ExpansionTrace,
    OutputEdit,
    SyncResult,
    TraceryGrammar,
    classify_edit,
    expand,
    synthesize,
)
from .views import (
    Anchor,
    KeyPathQuery,
    Query,
    RegexQuery,
    SchemaNodeQuery,
    SyntaxNodeQuery,
    ViewRegistry,
    ViewSpec,
    WidgetDescriptor,
    builtin_views,
    default_registry,
    matches,
    quiet_quote_view,
    resolve_anchors,
)

__version__ = "0.1.0"
