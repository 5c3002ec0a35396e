"""Binding sets and flat-term unification.

A :class:`BindingSet` maps variables to terms.  Bindings may point at other
variables, which puts both into one equivalence class; a class is *ground*
when one of its members is bound to a constant.  Terms are flat, so no
occurs check is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .terms import Const, Predicate, Term, Variable


class BindingError(Exception):
    """A binding set violates its structural invariants."""


@dataclass(frozen=True)
class Binding:
    var: Variable
    value: Term

    def __post_init__(self):
        if not isinstance(self.var, Variable):
            raise TypeError("binding target must be a Variable")
        if not isinstance(self.value, (Const, Variable)):
            raise TypeError("binding value must be a term")
        if self.value == self.var:
            raise BindingError(f"variable {self.var} bound to itself")


class BindingSet:
    """Immutable, insertion-ordered set of bindings.

    Construction rejects self-bindings, duplicate targets and var-to-var
    cycles, so following links forward from any variable always ends at a
    constant or at an unbound root variable.
    """

    __slots__ = ("_map", "_back")

    def __init__(self, bindings: Iterable = ()):
        mapping: dict[Variable, Term] = {}
        for b in bindings:
            if not isinstance(b, Binding):
                b = Binding(*b)
            if b.var in mapping:
                raise BindingError(f"variable {b.var} bound twice")
            mapping[b.var] = b.value
        for var in mapping:
            seen = {var}
            cur = mapping[var]
            while isinstance(cur, Variable) and cur in mapping:
                if cur in seen:
                    raise BindingError(f"cyclic bindings through {var}")
                seen.add(cur)
                cur = mapping[cur]
        self._map = mapping
        self._back = None

    @classmethod
    def _trusted(cls, mapping: dict) -> "BindingSet":
        obj = cls.__new__(cls)
        obj._map = mapping
        obj._back = None
        return obj

    def get(self, var: Variable) -> Optional[Term]:
        return self._map.get(var)

    def bind(self, var: Variable, value: Term) -> "BindingSet":
        """Return a copy extended by ``var -> value``.

        ``var`` must currently be an unbound root (see :func:`find`).
        """
        if var in self._map:
            raise BindingError(f"variable {var} is already bound")
        if var == value:
            raise BindingError(f"variable {var} bound to itself")
        mapping = dict(self._map)
        mapping[var] = value
        return BindingSet._trusted(mapping)

    def bindings(self) -> list[Binding]:
        return [Binding(k, v) for k, v in self._map.items()]

    def back_links(self) -> dict:
        if self._back is None:
            back: dict[Variable, list[Variable]] = {}
            for k, v in self._map.items():
                if isinstance(v, Variable):
                    back.setdefault(v, []).append(k)
            self._back = back
        return self._back

    def __iter__(self) -> Iterator[Binding]:
        return iter(self.bindings())

    def __len__(self):
        return len(self._map)

    def __contains__(self, var):
        return var in self._map

    def __eq__(self, other):
        if not isinstance(other, BindingSet):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def issuperset(self, other: "BindingSet") -> bool:
        return all(self._map.get(k) == v for k, v in other._map.items())

    def __repr__(self):
        inner = ", ".join(f"{k}->{v}" for k, v in self._map.items())
        return f"BindingSet({{{inner}}})"


EMPTY = BindingSet()


def find(term: Term, bindings: BindingSet) -> Term:
    """Follow links forward: a constant, or the unbound root variable."""
    mapping = bindings._map
    while isinstance(term, Variable):
        nxt = mapping.get(term)
        if nxt is None:
            return term
        term = nxt
    return term


def equivalence_class(var: Variable, bindings: BindingSet) -> tuple[set, set]:
    """Walk links in both directions; return (variables, constants) reached."""
    mapping = bindings._map
    back = bindings.back_links()
    members = {var}
    constants = set()
    todo = [var]
    while todo:
        v = todo.pop()
        nxt = mapping.get(v)
        neighbours = list(back.get(v, ()))
        if isinstance(nxt, Const):
            constants.add(nxt)
        elif nxt is not None:
            neighbours.append(nxt)
        for n in neighbours:
            if n not in members:
                members.add(n)
                todo.append(n)
    return members, constants


def values_of(var: Variable, bindings: BindingSet) -> Term:
    """Value of ``var``: its constant when ground, else the class representative.

    The representative is the member with the least ``(name, scope)``,
    ordering scopes user < query < rule instance (by id).
    """
    members, constants = equivalence_class(var, bindings)
    if len(constants) > 1:
        raise BindingError(
            f"variable {var} is bound to several constants: "
            + ", ".join(sorted(map(str, constants))))
    if constants:
        return next(iter(constants))
    return min(members, key=lambda v: v.sort_key)


def _unify_terms(a: Term, b: Term, bindings: BindingSet) -> Optional[BindingSet]:
    ra = find(a, bindings)
    rb = find(b, bindings)
    if ra == rb:
        return bindings
    a_var = isinstance(ra, Variable)
    b_var = isinstance(rb, Variable)
    if a_var and b_var:
        if rb.sort_key < ra.sort_key:
            return bindings.bind(ra, rb)
        return bindings.bind(rb, ra)
    if a_var:
        return bindings.bind(ra, rb)
    if b_var:
        return bindings.bind(rb, ra)
    return None


def unify(goal: Predicate, head: Predicate,
          current: BindingSet = EMPTY) -> Optional[BindingSet]:
    """Unify two flat predicates under ``current``.

    Returns ``current`` extended with the new bindings, or ``None`` when
    names, arities or some argument pair disagree.
    """
    if goal.name != head.name or len(goal.args) != len(head.args):
        return None
    result = current
    for a, b in zip(goal.args, head.args):
        result = _unify_terms(a, b, result)
        if result is None:
            return None
    return result


def apply(bindings: BindingSet, pred: Predicate) -> Predicate:
    args = tuple(values_of(a, bindings) if isinstance(a, Variable) else a
                 for a in pred.args)
    return Predicate(pred.name, args)
