"""A non-trivial involution on the arena of ``(bool -> 1) -> 1``.

The arena has an opening question ``q`` enabling two Player questions
``q1``, ``q2`` and a Player answer ``a``; ``q1`` and ``q2`` each enable
one Opponent answer ``a1``, ``a2``.

The strategy ``i`` plays as copycat, except that from the second time
Opponent asks ``q1`` or ``q2`` on the argument side (within the current
thread) it swaps them.  Answers follow the correspondence established by
the question they answer.  ``i`` is not the identity but ``i ; i`` is.
"""

from __future__ import annotations

from ..arena import A, O, P, Q, Arena
from .plays import thread_positions
from .strategies import StrategyOracle

SWAP = {"q1": "q2", "q2": "q1"}
ANSWER = {"q1": "a1", "q2": "a2"}


def involution_arena() -> Arena:
    label = {"q": (O, Q), "q1": (P, Q), "q2": (P, Q), "a": (P, A), "a1": (O, A), "a2": (O, A)}
    enables = {"q": ["a", "q1", "q2"], "q1": ["a1"], "q2": ["a2"]}
    return Arena(list(label), label, ["q"], enables)


def type_renaming() -> dict:
    """Renaming of the moves of the interpretation of ``(bool -> 1) -> 1`` onto :func:`involution_arena`."""
    q, a0 = ("q",), ("a", 0)
    return {
        (1, (2, q)): "q",
        (1, (2, a0)): "a",
        (1, (1, (1, (2, q)))): "q1",
        (1, (1, (2, (2, q)))): "q2",
        (1, (1, (1, (2, a0)))): "a1",
        (1, (1, (2, (2, a0)))): "a2",
    }


def _respond(moves: tuple):
    i = len(moves) - 1
    (s, m), j = moves[i]
    if j is None:
        return ((1, m), i)
    target = j ^ 1
    if s == 1 and m in SWAP:
        asked = sum(1 for k in thread_positions(moves)[:-1] if moves[k][0] == (1, "q1") or moves[k][0] == (1, "q2"))
        return ((2, m if asked == 0 else SWAP[m]), target)
    if s == 2 and m in ("a1", "a2"):
        # answer the argument-side question this one was copied from
        question = moves[target][0][1]
        return ((1, ANSWER[question]), target)
    return ((3 - s, m), target)


def involution_example() -> tuple[Arena, StrategyOracle]:
    arena = involution_arena()
    return arena, StrategyOracle(arena, arena, _respond, "i")


__all__ = ["involution_arena", "involution_example", "type_renaming"]
