import pytest

from isoref.evaluation import Converged, evaluate
from isoref.syntax import (
    ONE, ZERO, Arrow, IllTyped, ParseError, Prod, Sum, Var, eliminate_mkvar, parse_term, parse_type, show_term,
    show_type, typecheck,
)
from isoref.syntax import terms as T
from isoref.syntax.typing import EMPTY


def test_type_precedence():
    assert parse_type("1 + 0 * 1") == Sum(ONE, Prod(ZERO, ONE))


def test_arrow_is_right_associative():
    assert parse_type("var[1] -> 1 -> 0") == Arrow(Var(ONE), Arrow(ONE, ZERO))


def test_nat_needs_the_flag():
    with pytest.raises(ParseError):
        parse_type("nat -> 1")
    assert show_type(parse_type("nat -> 1", nat_enabled=True)) == "nat -> 1"


@pytest.mark.parametrize("text", ["1 + 0 * 1", "(1 -> 1) -> 1", "var[1 + 1] * 0", "bool -> bool"])
def test_type_printing_round_trips(text):
    a = parse_type(text)
    assert parse_type(show_type(a)) == a


def test_alpha_variants_are_equal():
    assert parse_term(r"\x : 1. x") == parse_term(r"\y : 1. y")
    assert parse_term(r"\x : 1. \y : 1. x") != parse_term(r"\x : 1. \y : 1. y")


def test_unit_and_sequencing():
    assert parse_term("()") == T.UNIT
    seq = parse_term("(); ()")
    assert isinstance(seq, T.App) and isinstance(seq.fn, T.Lam)


def test_if_desugars_to_case():
    m = parse_term("if true then () else ()")
    assert isinstance(m, T.Case)
    assert evaluate(m).value == T.UNIT


def test_term_printing_round_trips():
    m = parse_term(r"new x : bool := true in (\u : 1. !x) ()")
    assert parse_term(show_term(m)) == m


def test_typing_examples():
    assert typecheck(EMPTY, parse_term("()")) == ONE
    assert typecheck(EMPTY, parse_term(r"mkvar (\x:1. ()) (\u:1. ())")) == Var(ONE)
    with pytest.raises(IllTyped):
        typecheck(EMPTY, parse_term("fst ()"))


def test_mkvar_translation_shape():
    m = parse_term(r"mkvar (\x:1. ()) (\u:1. ())")
    e, tr = eliminate_mkvar(m)
    assert isinstance(e, T.Inj) and e.index == 2 and isinstance(e.body, T.Pair)
    assert not T.contains_node(e, T.MkVar)


def test_mkvar_translation_is_identity_without_vars():
    m = parse_term(r"(\x : 1 + 1. case x of inl a => a | inr b => b) (inl[1] ())")
    assert eliminate_mkvar(m)[0] == m


def test_mkvar_translation_preserves_convergence():
    m = parse_term(r"new x : bool := true in let v = mkvar (\a:bool. x := a) (\u:1. !x) in v := false; !x")
    e, _ = eliminate_mkvar(m)
    r1, r2 = evaluate(m), evaluate(e)
    assert isinstance(r1, Converged) and isinstance(r2, Converged) and r1.value == r2.value == T.FALSE
