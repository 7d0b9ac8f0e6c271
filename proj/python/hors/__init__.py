"""Higher-order recursion schemes."""

from ._hors import (
    ComplexityLimit,
    HorsError,
    ParseError,
    Scheme,
    SchemeError,
    analyze,
    bar_scheme,
    derive,
    io_to_oi,
    load_scheme,
    parse_scheme,
    semantics,
    value_tree,
)

__all__ = [
    "ComplexityLimit",
    "HorsError",
    "ParseError",
    "Scheme",
    "SchemeError",
    "analyze",
    "bar_scheme",
    "derive",
    "io_to_oi",
    "load_scheme",
    "parse_scheme",
    "semantics",
    "value_tree",
]
