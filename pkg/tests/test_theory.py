import pytest

from isoref.probe import Equivalent, round_trip_identity
from isoref.syntax import TypingContext, parse_type, typecheck
from isoref.syntax import terms as T
from isoref.theory import (
    CArrow, COne, CProd, CSum, CZero, NotIsomorphicTypes, canonical_form, decide_iso_syntactic, grammar_check,
    measure, show_trace, synthesize_coercion,
)


def canon(text: str):
    return canonical_form(parse_type(text))[0]


def test_measure():
    assert measure(parse_type("0")) == 1 and measure(parse_type("1")) == 1
    assert measure(parse_type("1 + 1")) == 3
    assert measure(parse_type("(1 + 1) -> 1")) == 8


def test_canonical_forms():
    assert canon("0 + 1") == COne()
    unit_fn = CArrow(COne(), COne())
    assert canon("var[1]") == CProd((unit_fn, unit_fn))
    assert canon("(1 + 1) -> 1") == CProd((unit_fn, unit_fn))
    assert canon("1 * (1 + 1)") == CSum((COne(), COne()))
    assert canon("1 -> 0") == COne()
    assert canon("0 * (1 -> 1)") == CZero()


def test_trace_is_printable():
    _, steps = canonical_form(parse_type("var[1 + 0]"))
    assert steps and steps[0].rule == "var-elim"
    assert "var-elim" in show_trace(steps)


def test_grammar_check():
    assert grammar_check(COne())
    assert not grammar_check(CSum((COne(),)))
    assert not grammar_check(CArrow(COne(), CZero()))


@pytest.mark.parametrize("x, y, expected", [
    ("(1 -> 1) * (1 + 1)", "(1 + 1) * (1 -> 1)", True),
    ("1", "1 + 1", False),
    ("(1 + 1) -> 1", "var[1]", True),
    ("1 -> 1", "1", False),
])
def test_syntactic_decider(x, y, expected):
    assert decide_iso_syntactic(parse_type(x), parse_type(y)) is expected


def test_identity_coercion():
    a = parse_type("var[1] -> 1")
    pair = synthesize_coercion(a, a)
    assert pair.forward.body == T.FVar(pair.forward.var) and pair.backward.body == T.FVar(pair.backward.var)


def test_var_coercion():
    pair = synthesize_coercion(parse_type("var[1]"), parse_type("(1 -> 1) * (1 -> 1)"))
    shown = pair.show()
    assert "mkvar (fst y) (snd y)" in shown and ":=" in shown and "!x" in shown


@pytest.mark.parametrize("x, y", [("1 * (1 + 1)", "1 + 1"), ("var[1]", "(1 -> 1) * (1 -> 1)"),
                                  ("(1 + 1) -> 1", "(1 -> 1) * (1 -> 1)"), ("0 + (1 -> 1)", "1 -> 1")])
def test_coercions_are_inverse(x, y):
    a, b = parse_type(x), parse_type(y)
    pair = synthesize_coercion(a, b)
    for co in (pair.forward, pair.backward):
        assert typecheck(TypingContext.of({co.var: co.src}, {}), co.body) == co.dst
    fg, gf = pair.forward.then(pair.backward), pair.backward.then(pair.forward)
    assert isinstance(round_trip_identity(fg.var, a, fg.body), Equivalent)
    assert isinstance(round_trip_identity(gf.var, b, gf.body), Equivalent)


def test_no_coercion_between_non_isomorphic_types():
    with pytest.raises(NotIsomorphicTypes):
        synthesize_coercion(parse_type("1"), parse_type("1 + 1"))
