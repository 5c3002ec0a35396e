"""Backward-chaining query engine.

A query is answered by recursively walking the AND/OR tree of each
matching rule.  Resolution is lazy: :func:`solve` yields answers in
discovery order (rule order, left member before right, depth first), and
:func:`query` collects them into a :class:`QueryResult`.

Within one predicate call the answers already produced are remembered as
:class:`ProcessedRecord` values so that the same solution is not emitted
twice, even when several facts or rules derive it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import _stack
from .terms import (QUERY, USER, Const, Goal, KnowledgeBase, Predicate,
                    Relation, Rule, Variable, And, Or)
from .unify import EMPTY, BindingSet, apply, equivalence_class, find, unify, values_of


class QueryError(Exception):
    pass


class DepthLimitExceeded(QueryError):
    """Resolution nested deeper than ``QueryOptions.max_depth``."""

    def __init__(self, goal, limit: int):
        self.goal = goal
        self.limit = limit
        super().__init__(f"depth limit {limit} exceeded while resolving {goal}")


@dataclass(frozen=True)
class QueryOptions:
    max_depth: int = 10_000
    max_solutions: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.max_depth, bool) or not isinstance(self.max_depth, int) \
                or self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")
        if self.max_solutions is not None and (
                not isinstance(self.max_solutions, int) or self.max_solutions < 1):
            raise ValueError("max_solutions must be a positive integer or None")


@dataclass(frozen=True)
class ProcessedRecord:
    signature: tuple
    solution_key: tuple


ResultSet = dict  # user variable name -> Term


@dataclass
class QueryResult:
    success: bool
    result_sets: list = field(default_factory=list)

    def __bool__(self):
        return self.success

    def values(self, name: str) -> list:
        """All values reported for the variable ``name``, in order."""
        return [rs[name] for rs in self.result_sets if name in rs]


@dataclass
class EngineState:
    kb: KnowledgeBase
    options: QueryOptions = field(default_factory=QueryOptions)
    rename_counter: int = 0

    def next_instance(self) -> int:
        self.rename_counter += 1
        return self.rename_counter


def contains_processed(records, candidate: ProcessedRecord) -> bool:
    return candidate in records


def projection_key(terms, bindings: BindingSet) -> tuple:
    """Canonical view of ``terms`` under ``bindings``.

    Ground arguments become their constants; unbound classes are numbered
    by first occurrence, so answers differing only in fresh variable names
    compare equal.
    """
    free: dict[Variable, int] = {}
    key = []
    for t in terms:
        r = find(t, bindings)
        if isinstance(r, Const):
            key.append(r)
        else:
            key.append(free.setdefault(r, len(free)))
    return tuple(key)


def _rename_pred(pred: Predicate, scope: int) -> Predicate:
    return Predicate(pred.name, tuple(
        Variable(a.name, scope) if isinstance(a, Variable) and a.scope == USER else a
        for a in pred.args))


def _rename_rel(rel: Relation, scope: int) -> Relation:
    if isinstance(rel, Goal):
        return Goal(_rename_pred(rel.predicate, scope))
    return type(rel)(_rename_rel(rel.left, scope), _rename_rel(rel.right, scope))


def rename_rule(rule: Rule, scope: int) -> Rule:
    """Copy ``rule`` with its user variables moved to rule-instance ``scope``."""
    body = None if rule.body is None else _rename_rel(rule.body, scope)
    return Rule(_rename_pred(rule.head, scope), body)


def matching_rules(state: EngineState, pred: Predicate,
                   bindings: BindingSet) -> list[tuple[Rule, BindingSet]]:
    """Renamed rules whose head unifies with ``pred``, with the unifiers."""
    found = []
    for rule in state.kb.rules_for(pred.signature):
        renamed = rename_rule(rule, state.next_instance())
        extended = unify(pred, renamed.head, bindings)
        if extended is not None:
            found.append((renamed, extended))
    return found


def resolve(state: EngineState, rel: Relation, bindings: BindingSet,
            depth: int = 1) -> Iterator[BindingSet]:
    """Yield every binding set under which ``rel`` holds.

    Duplicates (same projection onto the variables of ``rel``) are
    yielded once.
    """
    if depth > state.options.max_depth:
        shown = apply(bindings, rel.predicate) if isinstance(rel, Goal) else rel
        raise DepthLimitExceeded(shown, state.options.max_depth)
    if isinstance(rel, Goal):
        # resolve_predicate already deduplicates on the goal's arguments
        yield from resolve_predicate(state, rel.predicate, bindings, depth)
        return
    visible = rel.variables()
    seen = set()
    if isinstance(rel, And):
        candidates = (s2 for s1 in resolve(state, rel.left, bindings, depth + 1)
                      for s2 in resolve(state, rel.right, s1, depth + 1))
    elif isinstance(rel, Or):
        candidates = itertools.chain(resolve(state, rel.left, bindings, depth + 1),
                                     resolve(state, rel.right, bindings, depth + 1))
    else:
        raise TypeError(f"unknown relation {rel!r}")
    for s in candidates:
        key = projection_key(visible, s)
        if key not in seen:
            seen.add(key)
            yield s


def resolve_predicate(state: EngineState, pred: Predicate, bindings: BindingSet,
                      depth: int = 1) -> Iterator[BindingSet]:
    processed: set[ProcessedRecord] = set()
    for rule, unifier in matching_rules(state, pred, bindings):
        if rule.is_fact:
            successes = (unifier,)
        else:
            successes = resolve(state, rule.body, unifier, depth + 1)
        for s in successes:
            record = ProcessedRecord(rule.head.signature, projection_key(pred.args, s))
            if contains_processed(processed, record):
                continue
            processed.add(record)
            yield s


def tag_query(goal: Predicate) -> Predicate:
    return Predicate(goal.name, tuple(
        Variable(a.name, QUERY) if isinstance(a, Variable) and a.scope == USER else a
        for a in goal.args))


def _query_variables(tagged: Predicate) -> list[Variable]:
    return [v for v in dict.fromkeys(tagged.variables())
            if v.scope == QUERY and not v.is_anonymous]


def result_set(tagged: Predicate, bindings: BindingSet) -> ResultSet:
    """Map each named query variable (untagged) to its value.

    A variable left unbound is reported as the alphabetically first query
    variable sharing its class, under its user name.
    """
    rs = {}
    for v in _query_variables(tagged):
        value = values_of(v, bindings)
        if isinstance(value, Variable):
            members, _ = equivalence_class(v, bindings)
            named = [m for m in members if m.scope == QUERY and not m.is_anonymous]
            value = Variable(min(named, key=lambda m: m.sort_key).name, USER)
        rs[v.name] = value
    return rs


def _check_goal(goal):
    if not isinstance(goal, Predicate):
        raise QueryError(f"a query must be a single predicate, got {type(goal).__name__}")
    if not goal.name:
        raise QueryError("query predicate has an empty name")


def solve(kb: KnowledgeBase, goal: Predicate,
          options: QueryOptions | None = None) -> Iterator[ResultSet]:
    """Lazily yield distinct result sets for ``goal``.

    Runs on the caller's stack; wrap deep queries with
    :func:`run_deep` (or use :func:`query`).
    """
    _check_goal(goal)
    options = options or QueryOptions()
    state = EngineState(kb, options)
    tagged = tag_query(goal)
    seen = set()
    emitted = 0
    for bindings in resolve(state, Goal(tagged), EMPTY):
        rs = result_set(tagged, bindings)
        key = tuple(rs.items())
        if key in seen:
            continue
        seen.add(key)
        yield rs
        emitted += 1
        if options.max_solutions is not None and emitted >= options.max_solutions:
            return


def run_deep(options: QueryOptions | None, fn, *args, **kwargs):
    """Call ``fn`` with enough stack for ``options.max_depth`` levels."""
    depth = (options or QueryOptions()).max_depth
    return _stack.call_with_depth(depth, fn, *args, **kwargs)


def query(kb: KnowledgeBase, goal: Predicate,
          options: QueryOptions | None = None) -> QueryResult:
    options = options or QueryOptions()
    sets = run_deep(options, lambda: list(solve(kb, goal, options)))
    return QueryResult(bool(sets), sets)
