import pytest
from hypothesis import given, settings, strategies as st

from hornlogic import fixture_path
from hornlogic.dsl import (ParseError, ProgramParseError, format_program, format_rule,
                           parse_program, parse_query)
from hornlogic.terms import (And, Goal, KnowledgeBase, Or, Predicate, Rule, Variable,
                             boolean, sym, text)

from strategies import knowledge_bases


def G(name, *args):
    return Goal(Predicate.of(name, *args))


def test_fact_with_string():
    kb = parse_program('solution(computer,bluescreen,crashed,'
                       '"Please restart the PC and report if the problem occurs again!").')
    (rule,) = kb.rules
    assert rule.is_fact
    assert [a.kind for a in rule.head.args] == ["symbol", "symbol", "symbol", "text"]


def test_rule_with_disjunction():
    kb = parse_program("request(K1,K2,K3,L):-solution(K1,K2,K3,L);solution(K1,K3,K2,L).")
    (rule,) = kb.rules
    assert rule.head.arity == 4
    assert isinstance(rule.body, Or)
    assert isinstance(rule.body.left, Goal) and isinstance(rule.body.right, Goal)


def test_comma_binds_tighter_than_semicolon():
    (rule,) = parse_program("a :- b, c ; d.").rules
    assert rule.body == Or(And(G("b"), G("c")), G("d"))
    (rule,) = parse_program("a :- b, (c ; d).").rules
    assert rule.body == And(G("b"), Or(G("c"), G("d")))
    (rule,) = parse_program("a :- b, c, d.").rules
    assert rule.body == And(G("b"), And(G("c"), G("d")))


def test_unclosed_parenthesis():
    with pytest.raises(ProgramParseError) as info:
        parse_program("p(X")
    (err,) = info.value.errors
    assert (err.span.line, err.span.column) == (1, 2)
    assert "parenthes" in err.message


def test_errors_are_collected_per_clause():
    src = "p(a).\nq(.\nr(b).\ns :- .\nt."
    with pytest.raises(ProgramParseError) as info:
        parse_program(src)
    assert [e.span.line for e in info.value.errors] == [2, 4]


@pytest.mark.parametrize("src", ['p("abc', "p(a) :- q(", "p(a) q.", "P(a).", "p(a) :- 3.",
                                 'p("\\q").', "p(a", "p(a)\n:-", "#", "p(a,).", "?- p."])
def test_error_spans_inside_source(src):
    with pytest.raises(ProgramParseError) as info:
        parse_program(src)
    for e in info.value.errors:
        assert e.message
        assert 0 <= e.span.offset <= len(src)
        assert e.span.offset + e.span.length <= len(src)


def test_comments_and_escapes():
    kb = parse_program('% header\np("say \\"hi\\"\\n\\t\\\\"). % trailing\n')
    assert kb.rules[0].head.args[0] == text('say "hi"\n\t\\')


def test_variable_scope_in_clause():
    (rule,) = parse_program("p(X, _, _) :- q(X, Y), r(Y).").rules
    x, a1, a2 = rule.head.args
    assert x == Variable("X") and x.scope == "user"
    assert a1 != a2 and a1.is_anonymous and a2.is_anonymous
    assert rule.body.left.predicate.args[0] is not None
    assert rule.body.left.predicate.args[0] == x


def test_parse_query_forms():
    q = parse_query("?- request(computer, liquid, shuttered, L).")
    assert q.signature == ("request", 4) and q.args[3] == Variable("L")
    assert parse_query("?- p.") == Predicate("p")
    assert parse_query("p(a)") == Predicate.of("p", "a")
    with pytest.raises(ParseError, match="compound query not supported"):
        parse_query("?- a, b.")
    with pytest.raises(ParseError, match="compound query not supported"):
        parse_query("a ; b.")
    with pytest.raises(ParseError):
        parse_query("")


def test_format_examples():
    assert format_program(KnowledgeBase([Rule(Predicate.of("p", "a"))])) == "p(a).\n"
    X = Variable("X")
    rule = Rule(Predicate.of("h", X), Or(And(G("a"), G("b")), G("c")))
    assert format_rule(rule) == "h(X) :- a, b ; c."
    assert format_rule(Rule(Predicate.of("p", text('say "hi"')))) == 'p("say \\"hi\\"").'


def test_format_parenthesises_only_when_needed():
    cases = {
        And(Or(G("a"), G("b")), G("c")): "(a ; b), c",
        And(And(G("a"), G("b")), G("c")): "(a, b), c",
        Or(Or(G("a"), G("b")), G("c")): "(a ; b) ; c",
        Or(G("a"), And(G("b"), G("c"))): "a ; b, c",
        And(G("a"), Or(G("b"), G("c"))): "a, (b ; c)",
    }
    for body, expected in cases.items():
        text_ = format_rule(Rule(Predicate("h"), body))
        assert text_ == f"h :- {expected}."
        assert parse_program(text_).rules[0].body == body


def test_unrepresentable_values_raise():
    with pytest.raises(ValueError):
        format_program(KnowledgeBase([Rule(Predicate.of("p", boolean(True)))]))
    with pytest.raises(ValueError):
        format_program(KnowledgeBase([Rule(Predicate.of("p", sym("Upper")))]))


@pytest.mark.parametrize("name", ["it_service_desk.lkb", "medical.lkb"])
def test_fixture_round_trip(name):
    kb = parse_program(open(fixture_path(name), encoding="utf-8").read())
    out = format_program(kb)
    assert parse_program(out) == kb
    assert format_program(parse_program(out)) == out


def test_anonymous_round_trip():
    kb = parse_program("p(_, X, _) :- q(_, X).\nr(_).")
    out = format_program(kb)
    assert out == "p(_, X, _) :- q(_, X).\nr(_).\n"
    assert parse_program(out) == kb


@settings(max_examples=300)
@given(knowledge_bases)
def test_round_trip_property(kb):
    out = format_program(kb)
    assert parse_program(out) == kb
    assert format_program(parse_program(out)) == out


@given(st.text(max_size=40))
def test_garbage_never_crashes(src):
    try:
        parse_program(src)
    except ProgramParseError as exc:
        for e in exc.errors:
            assert 0 <= e.span.offset <= len(src)
            assert e.span.line >= 1 and e.span.column >= 1
