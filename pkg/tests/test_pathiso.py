import pytest

from isoref.arena import EMPTY, interpret_type, lift_T, lifted_interpretation, trim
from isoref.pathiso import (
    EMPTY_FOREST_CODE, NotIsomorphic, PathMorphism, PathTree, decide_iso_semantic, identity_morphism,
    path_isomorphism, path_tree, tree_canonical_code,
)
from isoref.syntax import ONE, parse_type

T1 = lift_T(interpret_type(ONE))
TBOOL = lift_T(interpret_type(parse_type("bool")))


def code(ty: str) -> int:
    return tree_canonical_code(path_tree(lifted_interpretation(parse_type(ty))))


def test_path_trees():
    assert path_tree(EMPTY).to_nested() == []
    assert path_tree(T1).to_nested() == [("Q", [("A", [])])]
    assert path_tree(trim(lifted_interpretation(parse_type("var[1]")))).to_nested() == [
        ("Q", [("A", [("Q", [("A", [])]), ("Q", [("A", [])])])])
    ]


def test_codes():
    assert tree_canonical_code(path_tree(EMPTY)) == EMPTY_FOREST_CODE
    assert code("1 * 1") == code("1")
    assert code("1") != code("bool")


def test_codes_ignore_sibling_order():
    a = PathTree.from_nested([("Q", [("A", []), ("Q", [("A", [])])])])
    b = PathTree.from_nested([("Q", [("Q", [("A", [])]), ("A", [])])])
    c = PathTree.from_nested([("Q", [("A", [("A", [])]), ("Q", [])])])
    assert tree_canonical_code(a) == tree_canonical_code(b) != tree_canonical_code(c)


def test_path_isomorphism():
    a = lifted_interpretation(parse_type("(1 + 1) -> 1"))
    assert path_isomorphism(a, a) == identity_morphism(path_tree(a))
    v = trim(lifted_interpretation(parse_type("var[1]")))
    w = trim(lifted_interpretation(parse_type("(1 -> 1) * (1 -> 1)")))
    phi = path_isomorphism(v, w)
    assert phi.check(path_tree(v), path_tree(w)) == []
    assert phi.inverse().then(phi).is_identity()
    with pytest.raises(NotIsomorphic):
        path_isomorphism(T1, TBOOL)


def test_morphism_check_catches_non_prefix_maps():
    t = path_tree(TBOOL)
    (q,) = TBOOL.initials
    a0, a1 = TBOOL.enables[q]
    good = PathMorphism({(q,): (q,), (q, a0): (q, a1), (q, a1): (q, a0)})
    assert good.check(t, t) == []
    bad = PathMorphism({(q,): (q,), (q, a0): (q, a0), (q, a1): (q, a0)})
    assert bad.check(t, t)


@pytest.mark.parametrize("x, y, expected", [
    ("(1 -> 1) * (1 + (1 + 1))", "(1 -> 1) * 1 + (1 -> 1) * (1 + 1)", True),
    ("1 -> 1", "1", False),
    ("1 -> 0", "1", True),
    ("0 -> 1", "1", True),
    ("1 + 1", "1", False),
])
def test_semantic_decider(x, y, expected):
    assert bool(decide_iso_semantic(parse_type(x), parse_type(y))) is expected
