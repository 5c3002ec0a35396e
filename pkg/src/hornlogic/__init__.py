"""Horn-clause knowledge bases with backward chaining, an ``.lkb`` reader
and writer, and Halstead/McCabe quality metrics."""

from importlib import resources

from .dsl import ParseError, ProgramParseError, format_program, parse_program, parse_query
from .engine import (DepthLimitExceeded, QueryError, QueryOptions, QueryResult,
                     query, solve)
from .terms import (And, Const, Goal, KnowledgeBase, Or, Predicate, Rule, Variable,
                    boolean, conjoin, disjoin, integer, is_fact, is_variable, sym, text)
from .unify import Binding, BindingSet, apply, unify, values_of

__all__ = [
    "And", "Binding", "BindingSet", "Const", "DepthLimitExceeded", "Goal",
    "KnowledgeBase", "Or", "ParseError", "Predicate", "ProgramParseError",
    "QueryError", "QueryOptions", "QueryResult", "Rule", "Variable", "apply",
    "boolean", "conjoin", "disjoin", "fixture_path", "format_program", "integer",
    "is_fact", "is_variable", "parse_program", "parse_query", "query", "solve",
    "sym", "text", "unify", "values_of",
]


def fixture_path(name: str) -> str:
    """Filesystem path of a bundled fixture (``it_service_desk.lkb``, ...)."""
    return str(resources.files(__name__) / "fixtures" / name)
