"""Exception hierarchy shared across the toolkit.

Every error carries a short machine-parsable ``category`` that the CLI uses
to pick an exit code and to format a one-line error message.
"""


class ToolkitError(Exception):
    category = "error"


class ParseError(ToolkitError):
    """A line of an input file is not well-formed."""

    category = "parse"


class SchemaError(ToolkitError):
    """Input parses but violates the record schema (types, label codes)."""

    category = "schema"


class IntegrityError(ToolkitError):
    """Cross-record constraints broken: duplicate ids, dangling sources."""

    category = "integrity"


class ConfigError(ToolkitError):
    """Bad configuration or API usage (empty label set, wrong strategy...)."""

    category = "config"


class NumericError(ToolkitError):
    """Numerically invalid input, e.g. a zero-norm embedding vector."""

    category = "numeric"


class TransportError(ToolkitError):
    """Network failure that survived the retry budget, or a 4xx response."""

    category = "transport"


class CacheMissError(ToolkitError):
    """Replay mode was asked for a key the cache does not hold."""

    category = "cache-miss"

    def __init__(self, key: str):
        super().__init__(f"no cached response for key {key}")
        self.key = key


class GenerationError(ToolkitError):
    """The model or translator returned unusable (empty) text."""

    category = "generation"


VALIDATION_CATEGORIES = frozenset({"parse", "schema", "integrity", "config", "numeric", "io"})
TRANSPORT_CATEGORIES = frozenset({"transport", "cache-miss", "generation"})
