"""Text format, command line and traces."""

from .parser import (
    ParseError,
    ReservedIdentifierError,
    SourceDocument,
    load_ontology,
    parse_concept,
    parse_ontology,
    parse_query,
)
from .trace import emit_trace, is_faithful, recompute_closed, write_trace

__all__ = [
    "ParseError",
    "ReservedIdentifierError",
    "SourceDocument",
    "load_ontology",
    "parse_concept",
    "parse_ontology",
    "parse_query",
    "emit_trace",
    "is_faithful",
    "recompute_closed",
    "write_trace",
]
