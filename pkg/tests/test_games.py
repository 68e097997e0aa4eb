import random

import pytest

from isoref.arena import EMPTY, A, O, P, Q, Arena, arrow_arena, interpret_type, lift_T, product_arena
from isoref.games import (
    Bijection, Illegal, InconsistentPartition, Legal, NotBijective, PreLegal, compose, copycat, copycat_along,
    current_thread, dual_play, enumerate_plays, extract_path_iso, involution_example, k_isomorphism, legality_check,
    lift_thread, random_arena, random_path_iso, restrict, sample_play, sequential_morphism, slice_bijection,
    zigzag_check,
)
from isoref.pathiso import PathMorphism, identity_morphism, path_tree
from isoref.syntax import ONE, parse_type

T1 = lift_T(interpret_type(ONE))
TBOOL = lift_T(interpret_type(parse_type("bool")))
q, a = ("q",), ("a", 0)

# the second q1 probe of the involution's characteristic play
PROBE_PLAY = (
    ((2, "q"), None), ((1, "q"), 0), ((1, "q1"), 1), ((2, "q1"), 0), ((2, "a1"), 3), ((1, "a1"), 2), ((1, "q1"), 1),
)


# ------------------------------------------------------------------ plays


def test_legality():
    arena = arrow_arena(T1, T1)
    for p in enumerate_plays(copycat(T1), 12):
        assert isinstance(legality_check(p, arena), Legal)
    assert isinstance(legality_check((((2, q), None), ((1, q), 0), ((1, q), 0)), arena), PreLegal)
    nested = Arena(["q", "r", "b"], {"q": (O, Q), "r": (P, Q), "b": (P, A)}, ["q"], {"q": ["r", "b"], "r": []})
    verdict = legality_check((("q", None), ("r", 0), ("b", 0)), nested)
    assert isinstance(verdict, Illegal) and verdict.position == 2


def test_current_thread():
    single = ((q, None), (a, 0))
    assert current_thread(single) == single
    both = product_arena(T1, T1)
    (i1, i2) = both.initials
    s = ((i1, None), (i2, None), ((1, a), 0))
    assert current_thread(s) == ((i1, None), ((1, a), 0))
    assert current_thread(s[:2]) == ((i2, None),)


def test_dual_play():
    arena = arrow_arena(T1, T1)
    assert dual_play((), arena) == ()
    s = (((2, q), None), ((1, q), 0), ((1, a), 1), ((2, a), 0))
    # q_A q_B a_B a_A on B => A: swapping both the pairs and the side tags gives back the same entries
    assert dual_play(s, arena) == (((2, q), None), ((1, q), 0), ((1, a), 1), ((2, a), 0))
    for p in enumerate_plays(copycat(TBOOL), 8):
        if len(p) % 2 == 0:
            assert dual_play(dual_play(p, arrow_arena(TBOOL, TBOOL)), arrow_arena(TBOOL, TBOOL)) == p


def test_zigzag_check():
    arena = arrow_arena(TBOOL, TBOOL)
    for p in enumerate_plays(copycat(TBOOL), 10):
        if len(p) % 2 == 0:
            assert zigzag_check(p, arena).zigzag
    assert zigzag_check((((2, q), None), ((2, ("a", 0)), 0)), arena).kind == "neither"
    # q |- p |- r: Player's r points at a different copy of p than Opponent's r
    chain = Arena(["q", "p", "r"], {"q": (O, Q), "p": (P, Q), "r": (O, Q)}, ["q"], {"q": ["p"], "p": ["r"]})
    s = (((2, "q"), None), ((1, "q"), 0), ((1, "p"), 1), ((2, "p"), 0), ((1, "p"), 1), ((2, "p"), 0),
         ((2, "r"), 3), ((1, "r"), 4))
    assert zigzag_check(s, arrow_arena(chain, chain)).kind == "pre-zigzag-only"


# ------------------------------------------------------------------ strategies


def test_copycat():
    assert list(enumerate_plays(copycat(EMPTY), 12)) == [()]
    longest = max(enumerate_plays(copycat(T1), 12), key=len)
    assert [m for m, _ in longest] == [(2, q), (1, q), (1, a), (2, a)]


def test_copycat_along():
    rng = random.Random(0)
    a = random_arena(rng)
    ident = identity_morphism(path_tree(a))
    sigma, _ = copycat_along(ident, ident, a, a)
    cc = copycat(a)
    for _ in range(20):
        p = sample_play(cc, rng)
        for k in range(1, len(p), 2):
            assert sigma.respond(p[:k]) == cc.respond(p[:k])
    (qb,) = TBOOL.initials
    a0, a1 = TBOOL.enables[qb]
    swap = PathMorphism({(qb,): (qb,), (qb, a0): (qb, a1), (qb, a1): (qb, a0)})
    sigma, _ = copycat_along(swap, swap, TBOOL, TBOOL)
    assert sigma.respond((((2, qb), None), ((1, qb), 0), ((1, a0), 1))) == ((2, a1), 0)
    with pytest.raises(ValueError):
        copycat_along(swap, identity_morphism(path_tree(TBOOL)), TBOOL, TBOOL)


def test_compose_with_copycat():
    rng = random.Random(1)
    a = random_arena(rng, depth=3)
    b, phi = random_path_iso(rng, a)
    sigma, _ = copycat_along(phi, phi.inverse(), a, b)
    left = compose(copycat(a), sigma)
    for p in enumerate_plays(sigma, 12, limit=300):
        for k in range(1, len(p) + 1, 2):
            assert left.respond(p[:k]) == sigma.respond(p[:k])


# ------------------------------------------------------------------ sequential morphisms


def test_lift_thread():
    cc = copycat(T1)
    assert lift_thread(cc, cc, ()) == ()
    s = ((q, None), (a, 0))
    lifted = lift_thread(cc, cc, s)
    assert lifted == (((2, q), None), ((1, q), 0), ((1, a), 1), ((2, a), 0))
    rng = random.Random(2)
    for _ in range(10):
        x = random_arena(rng)
        y, phi = random_path_iso(rng, x)
        sigma, tau = copycat_along(phi, phi.inverse(), x, y)
        for p in enumerate_plays(copycat(x), 8, limit=50):
            thread = restrict(p, 1)
            assert restrict(lift_thread(sigma, tau, thread), 1) == thread


def test_sequential_morphism():
    cc = copycat(TBOOL)
    phi = sequential_morphism(cc, cc)
    s = ((q, None), (("a", 1), 0))
    assert phi(s) == s
    _, i = involution_example()
    psi = sequential_morphism(i, i)
    assert psi((("q", None), ("q1", 0))) == (("q", None), ("q1", 0))
    second = (("q", None), ("q1", 0), ("a1", 1), ("q1", 0))
    assert psi(second) == (("q", None), ("q1", 0), ("a1", 1), ("q2", 0))
    assert len(psi(second)) == len(second)


# ------------------------------------------------------------------ slicing and extraction


def test_slicing():
    f = Bijection({"e1": "f1", "e2": "f2"})
    assert slice_bijection(f, Bijection({})) == f
    crossed = Bijection({"e1": "f2", "e2": "f1"})
    h = slice_bijection(crossed, Bijection({"e1": "f1"}))
    assert h.mapping == {"e2": "f2"} and h.paths["e2"] == ("e2", "f1", "e1", "f2")
    assert slice_bijection(f, Bijection({"e1": "f1"})).mapping == {"e2": "f2"}
    with pytest.raises(InconsistentPartition):
        slice_bijection(f, Bijection({"x": "f1"}))
    with pytest.raises(NotBijective):
        Bijection({"e1": "f1", "e2": "f1"})


def test_k_isomorphisms():
    _, i = involution_example()
    phi = sequential_morphism(i, i)
    start = (("q", None),)
    empty = k_isomorphism(phi, (), start, 0)
    assert empty.depth == 0 and empty.bijection == ()
    for k in (1, 2, 3):
        assert k_isomorphism(phi, (), start, k).is_identity()
    cc = copycat(TBOOL)
    assert k_isomorphism(sequential_morphism(cc, cc), (), ((q, None),), 2).is_identity()


def test_extraction():
    cc = copycat(TBOOL)
    assert extract_path_iso(cc, cc) == identity_morphism(path_tree(TBOOL))
    arena, i = involution_example()
    assert extract_path_iso(i, i) == identity_morphism(path_tree(arena))


# ------------------------------------------------------------------ the involution


def test_involution_is_not_copycat():
    arena, i = involution_example()
    assert i.respond(PROBE_PLAY) == ((2, "q2"), 0)
    assert copycat(arena).respond(PROBE_PLAY) == ((2, "q1"), 0)


def test_involution_is_its_own_inverse():
    arena, i = involution_example()
    ii, cc = compose(i, i), copycat(arena)
    for p in enumerate_plays(cc, 12, new_threads=True, limit=2000):
        if len(p) % 2 == 1:
            assert ii.respond(p) == cc.respond(p)


def test_involution_plays_are_zigzag():
    # i copies pointers, so its plays also meet the pointer condition
    arena, i = involution_example()
    for p in enumerate_plays(i, 12, new_threads=True, limit=2000):
        if len(p) % 2 == 0:
            assert zigzag_check(p, i.arena).zigzag
