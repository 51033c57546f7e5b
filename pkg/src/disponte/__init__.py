"""Probabilistic ALC reasoning under the distribution semantics.

Parse a knowledge base with :func:`parse_kb`, a query with
:func:`parse_query`, then :func:`answer` returns explanations, the
compiled diagram and the query probability.
"""
from .errors import (
    BudgetExceeded,
    CapExceeded,
    DisponteError,
    DnfTooLarge,
    InvariantError,
    PreconditionError,
    ResourceLimitError,
)
from .parser import ParseError, parse_kb, parse_query, serialize_kb
from .pipeline import Answer, answer

__all__ = [
    "Answer",
    "BudgetExceeded",
    "CapExceeded",
    "DisponteError",
    "DnfTooLarge",
    "InvariantError",
    "ParseError",
    "PreconditionError",
    "ResourceLimitError",
    "answer",
    "parse_kb",
    "parse_query",
    "serialize_kb",
]
