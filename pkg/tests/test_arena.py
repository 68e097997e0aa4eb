import pytest

from isoref.arena import (
    EMPTY, O, P, Q, A, Arena, InvalidArena, NatUnsupported, arity, arrow_arena, from_json, interpret_type, is_valid,
    lift_T, lifted_interpretation, lifted_sum_arena, product_arena, to_json, trim, validate,
)
from isoref.pathiso import path_isomorphism, path_tree, tree_canonical_code
from isoref.syntax import ONE, parse_type

T1 = lift_T(interpret_type(ONE))
TBOOL = lift_T(interpret_type(parse_type("bool")))


def test_interpretation_families():
    assert len(interpret_type(parse_type("0"))) == 0
    assert [len(x) for x in interpret_type(ONE)] == [0]
    assert [len(x) for x in interpret_type(parse_type("1 + 1"))] == [0, 0]
    (fn,) = interpret_type(parse_type("1 -> 1"))
    assert len(fn) == 2 and tree_canonical_code(path_tree(fn)) == tree_canonical_code(path_tree(T1))
    assert [len(x) for x in interpret_type(parse_type("0 -> 1 + 1"))] == [0]


def test_lifted_sums():
    assert len(lifted_sum_arena([])) == 1
    assert lifted_sum_arena([EMPTY]).same_as(T1)
    bool_arena = lifted_sum_arena([EMPTY, EMPTY])
    assert len(bool_arena) == 3 and arity(bool_arena, bool_arena.initials[0]) == 2
    assert lift_T(interpret_type(parse_type("0"))).same_as(lifted_sum_arena([]))
    assert TBOOL.same_as(bool_arena)


def test_arrow_arena():
    assert path_isomorphism(arrow_arena(EMPTY, T1), T1) is not None
    a = arrow_arena(T1, T1)
    assert len(a) == 4
    (q,) = a.initials
    assert (1, T1.initials[0]) in a.enables[q]
    for m in T1.moves:
        assert a.player((1, m)) != T1.player(m)


def test_product_arena():
    assert len(product_arena(EMPTY, EMPTY)) == 0
    assert len(product_arena(T1, T1).initials) == 2
    ab, ba = product_arena(T1, TBOOL), product_arena(TBOOL, T1)
    assert path_isomorphism(ab, ba) is not None


def test_arity():
    q, = TBOOL.initials
    assert arity(TBOOL, q) == 2
    (a,) = T1.enables[T1.initials[0]]
    assert arity(T1, a) == 0 and arity(T1, T1.initials[0]) == 1


def test_trim():
    assert len(trim(lift_T(interpret_type(parse_type("0"))))) == 0
    assert path_isomorphism(trim(lifted_interpretation(parse_type("1 -> 0"))), T1) is not None
    assert trim(TBOOL).same_as(TBOOL)


def test_validation():
    for ty in ("1", "bool", "(1 -> 1) -> 1", "var[1 + 1]", "(1 + 1) * (1 -> 0)"):
        validate(lifted_interpretation(parse_type(ty)))
    bad = Arena(["q", "a"], {"q": (O, Q), "a": (O, A)}, ["q"], {"q": ["a"]})
    assert not is_valid(bad)
    with pytest.raises(InvalidArena):
        validate(bad)


def test_json_round_trip():
    a = lifted_interpretation(parse_type("var[1] -> 1 + 1"))
    b = from_json(to_json(a))
    assert to_json(b) == to_json(a)
    assert tree_canonical_code(path_tree(b)) == tree_canonical_code(path_tree(a))


def test_nat_is_rejected():
    with pytest.raises(NatUnsupported):
        interpret_type(parse_type("nat", nat_enabled=True))


def test_player_alternates_along_paths():
    a = lifted_interpretation(parse_type("((1 + 1) -> 1) -> 1"))
    for p, _ in path_tree(a).nodes():
        assert a.player(p[-1]) == (O if len(p) % 2 else P)
