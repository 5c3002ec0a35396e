"""Data model for logic programs: constants, variables, predicates,
AND/OR relation trees, rules and knowledge bases.

Everything here is an immutable value.  A knowledge base is built once
from an ordered list of rules and then handed to the engine::

    X = Variable("X")
    kb = KnowledgeBase([
        Rule(Predicate.of("parent", "ann", "bob")),
        Rule(Predicate.of("child", X, "ann"), Predicate.of("parent", "ann", X)),
    ])
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Union

ConstKind = Literal["symbol", "text", "integer", "boolean"]

USER = "user"
QUERY = "query"

_KINDS = ("symbol", "text", "integer", "boolean")


@dataclass(frozen=True)
class Const:
    """A constant argument: symbol, text, integer or boolean."""

    kind: ConstKind
    value: Union[str, int, bool]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown constant kind {self.kind!r}")
        if self.kind == "symbol":
            if not isinstance(self.value, str) or not self.value:
                raise ValueError("symbol must be a non-empty string")
            if any(ch.isspace() for ch in self.value):
                raise ValueError(f"symbol {self.value!r} contains whitespace")
        elif self.kind == "text":
            if not isinstance(self.value, str):
                raise TypeError("text constant needs a str value")
        elif self.kind == "integer":
            if isinstance(self.value, bool) or not isinstance(self.value, int):
                raise TypeError("integer constant needs an int value")
        elif not isinstance(self.value, bool):
            raise TypeError("boolean constant needs a bool value")

    def __str__(self):
        if self.kind == "text":
            return '"' + escape_text(self.value) + '"'
        if self.kind == "boolean":
            return "true" if self.value else "false"
        return str(self.value)


def sym(name: str) -> Const:
    return Const("symbol", name)


def text(value: str) -> Const:
    return Const("text", value)


def integer(value: int) -> Const:
    return Const("integer", value)


def boolean(value: bool) -> Const:
    return Const("boolean", value)


def escape_text(value: str) -> str:
    return (value.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\t", "\\t"))


Scope = Union[str, int]


@dataclass(frozen=True)
class Variable:
    """A logic variable.

    ``scope`` is ``"user"`` when declared, ``"query"`` once the engine has
    tagged it as a query variable, or a positive integer naming the rule
    application it was renamed for.
    """

    name: str
    scope: Scope = USER

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("variable name must be a non-empty string")
        if self.scope not in (USER, QUERY):
            if isinstance(self.scope, bool) or not isinstance(self.scope, int) or self.scope < 1:
                raise ValueError(f"invalid variable scope {self.scope!r}")

    @property
    def sort_key(self):
        if self.scope == USER:
            rank = (0, 0)
        elif self.scope == QUERY:
            rank = (1, 0)
        else:
            rank = (2, self.scope)
        return (self.name, rank)

    @property
    def is_anonymous(self) -> bool:
        return self.name.startswith("_#")

    def __str__(self):
        if isinstance(self.scope, int):
            return f"{self.name}#{self.scope}"
        return self.name


Term = Union[Const, Variable]


def is_variable(t) -> bool:
    return isinstance(t, Variable)


def to_term(value) -> Term:
    """Coerce a Python value into a term.

    Terms pass through; ``bool`` becomes a boolean, ``int`` an integer and
    ``str`` a symbol.  Use :func:`text` for free-form strings.
    """
    if isinstance(value, (Const, Variable)):
        return value
    if isinstance(value, bool):
        return boolean(value)
    if isinstance(value, int):
        return integer(value)
    if isinstance(value, str):
        return sym(value)
    raise TypeError(f"cannot use {type(value).__name__} as a term")


@dataclass(frozen=True)
class Predicate:
    name: str
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValueError("predicate name must be a non-empty string")
        args = tuple(self.args)
        for a in args:
            if not isinstance(a, (Const, Variable)):
                raise TypeError(f"predicate argument {a!r} is not a term")
        object.__setattr__(self, "args", args)

    @classmethod
    def of(cls, name: str, *args) -> "Predicate":
        return cls(name, tuple(to_term(a) for a in args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.name, len(self.args))

    def variables(self) -> Iterator[Variable]:
        for a in self.args:
            if isinstance(a, Variable):
                yield a

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


class Relation:
    """Base of the binary relation tree used for rule bodies."""

    kind: str

    def first_member(self):
        raise NotImplementedError

    def second_member(self):
        raise NotImplementedError

    def goals(self) -> Iterator["Goal"]:
        """Leaves in left-to-right order."""
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Goal):
                yield node
            else:
                stack.append(node.right)
                stack.append(node.left)

    def variables(self) -> list[Variable]:
        seen = {}
        for g in self.goals():
            for v in g.predicate.variables():
                seen.setdefault(v, None)
        return list(seen)


def as_relation(value) -> Relation:
    if isinstance(value, Relation):
        return value
    if isinstance(value, Predicate):
        return Goal(value)
    raise TypeError(f"{value!r} is not a relation or predicate")


@dataclass(frozen=True)
class Goal(Relation):
    predicate: Predicate
    kind = "goal"

    def __post_init__(self):
        if not isinstance(self.predicate, Predicate):
            raise TypeError("Goal wraps a Predicate")

    def first_member(self) -> Predicate:
        return self.predicate

    def second_member(self) -> Predicate:
        return self.predicate

    def __str__(self):
        return str(self.predicate)


@dataclass(frozen=True)
class _Binary(Relation):
    left: Relation
    right: Relation

    def __post_init__(self):
        object.__setattr__(self, "left", as_relation(self.left))
        object.__setattr__(self, "right", as_relation(self.right))

    def first_member(self) -> Relation:
        return self.left

    def second_member(self) -> Relation:
        return self.right


@dataclass(frozen=True)
class And(_Binary):
    kind = "and"

    def __str__(self):
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class Or(_Binary):
    kind = "or"

    def __str__(self):
        return f"({self.left}; {self.right})"


def _nest(cls, goals) -> Relation:
    items = [as_relation(g) for g in goals]
    if not items:
        raise ValueError(f"cannot build {cls.__name__} from an empty list")
    result = items[-1]
    for item in reversed(items[:-1]):
        result = cls(item, result)
    return result


def conjoin(goals: Iterable) -> Relation:
    """Right-nested conjunction ``g1 AND (g2 AND (...))``."""
    return _nest(And, goals)


def disjoin(goals: Iterable) -> Relation:
    """Right-nested disjunction ``g1 OR (g2 OR (...))``."""
    return _nest(Or, goals)


@dataclass(frozen=True)
class Rule:
    head: Predicate
    body: Relation | None = None

    def __post_init__(self):
        if not isinstance(self.head, Predicate):
            raise TypeError("rule head must be a Predicate")
        if self.body is not None:
            object.__setattr__(self, "body", as_relation(self.body))

    @property
    def is_fact(self) -> bool:
        return self.body is None

    def variables(self) -> list[Variable]:
        seen = dict.fromkeys(self.head.variables())
        if self.body is not None:
            for v in self.body.variables():
                seen.setdefault(v, None)
        return list(seen)

    def __str__(self):
        if self.body is None:
            return f"{self.head}."
        return f"{self.head} :- {self.body}."


def is_fact(rule: Rule) -> bool:
    return rule.is_fact


@dataclass(frozen=True)
class KnowledgeBase:
    """An ordered, immutable collection of rules."""

    rules: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rules = tuple(self.rules)
        index: dict[tuple[str, int], list[Rule]] = {}
        for r in rules:
            if not isinstance(r, Rule):
                raise TypeError(f"{r!r} is not a Rule")
            index.setdefault(r.head.signature, []).append(r)
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in index.items()})

    def rules_for(self, signature: tuple[str, int]) -> tuple:
        """Rules whose head has ``signature``, in declaration order."""
        return self._index.get(signature, ())

    def signatures(self) -> list[tuple[str, int]]:
        return list(self._index)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)
