"""Reader and writer for ``.lkb`` knowledge-base sources.

The syntax is the Horn-clause subset of Prolog::

    program := clause*
    clause  := predicate "." | predicate ":-" body "."
    body    := conj (";" conj)*
    conj    := goal ("," goal)*
    goal    := predicate | "(" body ")"
    predicate := name | name "(" term ("," term)* ")"
    term    := VARIABLE | ATOM | STRING | INTEGER

``%`` starts a comment running to the end of the line.  Each ``_`` is a
fresh anonymous variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (And, Goal, KnowledgeBase, Or, Predicate, Relation,
                    Rule, Variable, conjoin, disjoin, escape_text, integer, sym,
                    text)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0
    offset: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self.line}:{self.column}+{self.length}")


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, expected=()):
        if not message:
            raise ValueError("parse error needs a message")
        self.span = span
        self.message = message
        self.expected = list(expected)
        super().__init__(f"{span.line}:{span.column}: {message}")

    def render(self, path: str = "<input>") -> str:
        return f"{path}:{self.span.line}:{self.span.column}: {self.message}"


class ProgramParseError(Exception):
    """One or more syntax errors in a program."""

    def __init__(self, errors):
        self.errors = list(errors)
        first = self.errors[0]
        more = f" (and {len(self.errors) - 1} more)" if len(self.errors) > 1 else ""
        super().__init__(f"{first}{more}")


@dataclass(frozen=True)
class Token:
    kind: str  # atom var string int ( ) , ; :- ?- . eof error
    value: object
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<ask>\?-)
  | (?P<int>-?[0-9]+)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),;.])
  | (?P<string>")
""", re.VERBOSE)

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}

ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
VARIABLE_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")


class _Lexer:
    def __init__(self, source: str):
        self.src = source
        self.errors: list[ParseError] = []
        self._line_starts = [0] + [m.end() for m in re.finditer(r"\n", source)]

    def span(self, start: int, end: int) -> SourceSpan:
        lo, hi = 0, len(self._line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._line_starts[mid] <= start:
                lo = mid
            else:
                hi = mid - 1
        return SourceSpan(lo + 1, start - self._line_starts[lo] + 1, end - start, start)

    def tokens(self) -> list[Token]:
        out = []
        pos = 0
        src = self.src
        while pos < len(src):
            m = _TOKEN_RE.match(src, pos)
            if m is None:
                end = pos + 1
                out.append(Token("error", src[pos], self.span(pos, end)))
                self.errors.append(ParseError(self.span(pos, end),
                                              f"unexpected character {src[pos]!r}"))
                pos = end
                continue
            kind = m.lastgroup
            if kind in ("ws", "comment"):
                pos = m.end()
                continue
            if kind == "string":
                pos = self._string(pos, out)
                continue
            value = m.group()
            if kind == "int":
                out.append(Token("int", int(value), self.span(pos, m.end())))
            elif kind in ("atom", "var"):
                out.append(Token(kind, value, self.span(pos, m.end())))
            else:
                out.append(Token(value, value, self.span(pos, m.end())))
            pos = m.end()
        out.append(Token("eof", None, self.span(len(src), len(src))))
        return out

    def _string(self, start: int, out: list) -> int:
        src = self.src
        pos = start + 1
        chars = []
        while pos < len(src):
            ch = src[pos]
            if ch == '"':
                out.append(Token("string", "".join(chars), self.span(start, pos + 1)))
                return pos + 1
            if ch == "\n":
                break
            if ch == "\\":
                esc = src[pos + 1] if pos + 1 < len(src) else ""
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                    pos += 2
                    continue
                self.errors.append(ParseError(self.span(pos, min(pos + 2, len(src))),
                                              f"invalid escape sequence \\{esc}",
                                              ['\\"', "\\\\", "\\n", "\\t"]))
                pos += 2
                continue
            chars.append(ch)
            pos += 1
        span = self.span(start, pos)
        self.errors.append(ParseError(span, "unterminated string", ['"']))
        out.append(Token("error", src[start:pos], span))
        return pos


_DESCRIBE = {
    "atom": "name", "var": "variable", "string": "string", "int": "integer",
    "eof": "end of input", "error": "invalid token",
}


def _describe(tok: Token) -> str:
    if tok.kind in _DESCRIBE:
        if tok.kind in ("eof", "error"):
            return _DESCRIBE[tok.kind]
        return f"{_DESCRIBE[tok.kind]} {tok.value!r}" if tok.kind != "string" else "string"
    return repr(tok.kind)


class _Parser:
    def __init__(self, source: str):
        self.lexer = _Lexer(source)
        self.toks = self.lexer.tokens()
        self.i = 0
        self._vars: dict[str, Variable] = {}
        self._anon = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str, what=None) -> Token:
        if self.tok.kind != kind:
            self.fail([what or repr(kind)])
        return self.advance()

    def fail(self, expected, message=None):
        tok = self.tok
        if message is None:
            message = f"expected {' or '.join(expected)}, found {_describe(tok)}"
        raise ParseError(tok.span, message, expected)

    def start_clause(self):
        self._vars = {}
        self._anon = 0

    def variable(self, name: str) -> Variable:
        if name == "_":
            self._anon += 1
            return Variable(f"_#{self._anon}")
        if name not in self._vars:
            self._vars[name] = Variable(name)
        return self._vars[name]

    def term(self):
        tok = self.tok
        if tok.kind == "var":
            self.advance()
            return self.variable(tok.value)
        if tok.kind == "atom":
            self.advance()
            return sym(tok.value)
        if tok.kind == "string":
            self.advance()
            return text(tok.value)
        if tok.kind == "int":
            self.advance()
            return integer(tok.value)
        self.fail(["variable", "name", "string", "integer"])

    def predicate(self) -> Predicate:
        name = self.expect("atom", "predicate name")
        args = []
        if self.tok.kind == "(":
            opening = self.advance()
            args.append(self.term())
            while self.tok.kind == ",":
                self.advance()
                args.append(self.term())
            if self.tok.kind != ")":
                if self.tok.kind in ("eof", "."):
                    raise ParseError(opening.span, "unclosed parenthesis", ["')'"])
                self.fail(["','", "')'"])
            self.advance()
        return Predicate(name.value, tuple(args))

    def goal(self) -> Relation:
        if self.tok.kind == "(":
            opening = self.advance()
            body = self.body()
            if self.tok.kind != ")":
                if self.tok.kind in ("eof", "."):
                    raise ParseError(opening.span, "unclosed parenthesis", ["')'"])
                self.fail(["','", "';'", "')'"])
            self.advance()
            return body
        if self.tok.kind != "atom":
            self.fail(["predicate name", "'('"])
        return Goal(self.predicate())

    def conj(self) -> Relation:
        goals = [self.goal()]
        while self.tok.kind == ",":
            self.advance()
            goals.append(self.goal())
        return conjoin(goals)

    def body(self) -> Relation:
        parts = [self.conj()]
        while self.tok.kind == ";":
            self.advance()
            parts.append(self.conj())
        return disjoin(parts)

    def clause(self) -> Rule:
        self.start_clause()
        head = self.predicate()
        body = None
        if self.tok.kind == ":-":
            self.advance()
            body = self.body()
        elif self.tok.kind != ".":
            self.fail(["':-'", "'.'"])
        self.expect(".", "'.'")
        return Rule(head, body)

    def recover(self):
        # resume after the next clause terminator
        while self.tok.kind not in (".", "eof"):
            self.advance()
        if self.tok.kind == ".":
            self.advance()


def _merge_errors(lexical, syntactic):
    merged = list(syntactic)
    seen = {e.span.offset for e in merged}
    for e in lexical:
        if e.span.offset not in seen:
            merged.append(e)
    return sorted(merged, key=lambda e: e.span.offset)


def parse_program(source: str) -> KnowledgeBase:
    """Parse a whole program; raise :class:`ProgramParseError` listing every error."""
    p = _Parser(source)
    rules, errors = [], []
    while p.tok.kind != "eof":
        start = p.i
        try:
            rules.append(p.clause())
        except ParseError as err:
            errors.append(err)
            p.recover()
            if p.i == start:
                p.advance()
    errors = _merge_errors(p.lexer.errors, errors)
    if errors:
        raise ProgramParseError(errors)
    return KnowledgeBase(rules)


def parse_query(source: str) -> Predicate:
    """Parse ``?- goal.`` (the prefix and final dot are optional)."""
    p = _Parser(source)
    if p.lexer.errors:
        raise p.lexer.errors[0]
    p.start_clause()
    if p.tok.kind == "?-":
        p.advance()
    if p.tok.kind == "eof":
        p.fail(["predicate name"], "empty query")
    goal = p.predicate()
    if p.tok.kind in (",", ";"):
        p.fail(["'.'"], "compound query not supported: a query is a single predicate")
    if p.tok.kind == ".":
        p.advance()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return goal


def format_term(t) -> str:
    if isinstance(t, Variable):
        if t.is_anonymous:
            return "_"
        if not VARIABLE_RE.match(t.name):
            raise ValueError(f"variable {t.name!r} has no .lkb spelling")
        return t.name
    if t.kind == "symbol":
        if not ATOM_RE.match(t.value):
            raise ValueError(f"symbol {t.value!r} has no .lkb spelling")
        return t.value
    if t.kind == "text":
        return '"' + escape_text(t.value) + '"'
    if t.kind == "integer":
        return str(t.value)
    raise ValueError(f"{t.kind} constants have no .lkb spelling")


def format_predicate(p: Predicate) -> str:
    if not p.args:
        return p.name
    return f"{p.name}({', '.join(format_term(a) for a in p.args)})"


def format_relation(rel: Relation) -> str:
    if isinstance(rel, Goal):
        return format_predicate(rel.predicate)
    if isinstance(rel, And):
        # ',' binds tighter than ';' and both nest to the right
        left = _wrap(rel.left, isinstance(rel.left, (And, Or)))
        right = _wrap(rel.right, isinstance(rel.right, Or))
        return f"{left}, {right}"
    left = _wrap(rel.left, isinstance(rel.left, Or))
    return f"{left} ; {format_relation(rel.right)}"


def _wrap(rel, needed: bool) -> str:
    inner = format_relation(rel)
    return f"({inner})" if needed else inner


def format_rule(rule: Rule) -> str:
    head = format_predicate(rule.head)
    if rule.body is None:
        return f"{head}."
    return f"{head} :- {format_relation(rule.body)}."


def format_program(kb: KnowledgeBase) -> str:
    return "".join(format_rule(r) + "\n" for r in kb.rules)
