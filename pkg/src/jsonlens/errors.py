"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine-raised errors."""


class InputEncodingError(EngineError):
    """Raw input bytes are not valid UTF-8."""


class OffsetError(EngineError):
    """Byte offset falls outside the document."""


class NodeError(EngineError):
    """Node does not belong to the tree it was used with."""


class SchemaRefError(EngineError):
    """Internal schema reference does not resolve."""


class UnsupportedRefError(EngineError):
    """Schema reference points outside the document (not supported)."""


class PathError(EngineError):
    """Key path does not resolve against the current document."""


class KindError(EngineError):
    """Edit action targets a node of the wrong kind."""


class EditConflictError(EngineError):
    """Text edits in one batch overlap."""


class RegistryError(EngineError):
    """View registration conflict (duplicate id or unknown id)."""


class SymbolError(EngineError):
    """Grammar expansion hit a reference to an undefined symbol."""


class ExpansionDepthError(EngineError):
    """Grammar expansion exceeded the depth limit."""


class NoEditError(EngineError):
    """Edit classification was asked to compare identical strings."""


class TraceStaleError(EngineError):
    """Expansion trace no longer matches the grammar it was built from."""


class StaleVersionError(EngineError):
    """Client request was computed against an outdated document version."""


class SessionError(EngineError):
    """Document session bookkeeping error (duplicate or unknown id)."""


class ActionRefError(EngineError):
    """Menu action reference is unknown or expired."""
