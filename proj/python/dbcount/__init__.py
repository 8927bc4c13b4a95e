"""Exact model counting for CNF / negative CSP instances whose hypergraphs
admit disjoint-branches decompositions.

Instances travel as text (DIMACS CNF or the cspneg relation format),
decompositions as JSON documents. Counts come back as Python ints, converted
from the core's arbitrary-precision decimal strings.
"""

from dbcount._core import (
    NotDecomposableError,
    ParseError,
    check,
    classify,
    decompose,
    generate,
)
from dbcount import _core


def count(text: str) -> int:
    """Exact model count of a CNF/cspneg string.

    Raises NotDecomposableError when some component of the instance's
    hypergraph has no disjoint-branches decomposition, ParseError (a
    ValueError) on malformed input.
    """
    return int(_core.count(text))


def brute_count(text: str) -> int:
    """Model count by enumeration; guarded to 24 variables."""
    return int(_core.brute_count(text))


__all__ = [
    "NotDecomposableError",
    "ParseError",
    "brute_count",
    "check",
    "classify",
    "count",
    "decompose",
    "generate",
]
