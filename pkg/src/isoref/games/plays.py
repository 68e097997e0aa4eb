"""Justified sequences, legality, threads and zig-zag plays.

A play is a tuple of ``(move, justifier)`` pairs where the justifier is the
index of an earlier position, or ``None`` for an initial move.  Plays on
an arrow arena ``A => B`` (built by :func:`isoref.arena.arrow_arena`) have
moves tagged ``(1, m)`` for the argument side and ``(2, m)`` for the
result side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..arena import O, P, Q, Arena, Move, arrow_arena, move_label

Entry = tuple  # (move, justifier index or None)


class MalformedPlay(ValueError):
    pass


class IllegalPlay(ValueError):
    pass


class NotPreZigZag(ValueError):
    pass


@dataclass(frozen=True)
class Play:
    """A justified sequence over ``arena``."""

    arena: Arena = field(compare=False, hash=False, repr=False)
    moves: tuple[Entry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple((m, j) for m, j in self.moves))
        for i, (m, j) in enumerate(self.moves):
            if j is not None and not (isinstance(j, int) and 0 <= j < i):
                raise MalformedPlay(f"justifier {j} of position {i} does not point to an earlier position")

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]

    def move(self, i: int) -> Move:
        return self.moves[i][0]

    def just(self, i: int) -> int | None:
        return self.moves[i][1]

    def extend(self, move: Move, just: int | None = None) -> "Play":
        return Play(self.arena, self.moves + ((move, just),))

    def prefix(self, n: int) -> "Play":
        return Play(self.arena, self.moves[:n])

    def ip(self) -> "Play":
        """The immediate prefix."""
        return self.prefix(max(len(self) - 1, 0))

    def jp(self) -> "Play":
        """The prefix ending with the justifier of the last move (empty if it has none)."""
        if not self.moves or self.moves[-1][1] is None:
            return self.prefix(0)
        return self.prefix(self.moves[-1][1] + 1)

    def __str__(self) -> str:
        return show_play(self.moves)

    def show_columns(self, left: str = "A", right: str = "B") -> str:
        return show_columns(self.moves, left, right)


def show_play(moves: Sequence[Entry]) -> str:
    parts = []
    for i, (m, j) in enumerate(moves):
        parts.append(move_label(m) + ("" if j is None else f"^{j}"))
    return " ".join(parts) or "ε"


def show_columns(moves: Sequence[Entry], left: str = "A", right: str = "B") -> str:
    """Two-column rendering of a play on an arrow arena, one move per line."""
    width = max([len(left)] + [len(move_label(m[1])) + 8 for m, _ in moves if m[0] == 1]) + 2
    lines = [f"{'':4}{left:<{width}}{right}"]
    for i, (m, j) in enumerate(moves):
        side, inner = m
        text = move_label(inner) + ("" if j is None else f"  ^{j}")
        lines.append(f"{i:<4}" + (f"{text:<{width}}" if side == 1 else " " * width + text))
    return "\n".join(lines)


# ------------------------------------------------------------------ legality


@dataclass(frozen=True)
class Legal:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class PreLegal:
    """Well-bracketed and properly justified but not alternating."""

    position: int  # first alternation failure

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Illegal:
    position: int
    reason: str

    def __bool__(self) -> bool:
        return False


def pending_question(arena: Arena, moves: Sequence[Entry]) -> int | None:
    """Index of the last unanswered question, or None."""
    answered = {j for m, j in moves if arena.kind(m) != Q}
    for i in range(len(moves) - 1, -1, -1):
        if arena.kind(moves[i][0]) == Q and i not in answered:
            return i
    return None


def justification_problem(arena: Arena, moves: Sequence[Entry], i: int) -> str | None:
    m, j = moves[i]
    if m not in arena:
        return f"unknown move {m!r}"
    if j is None:
        if m not in arena.initials:
            return f"non-initial move {move_label(m)} has no justifier"
        return None
    if not (isinstance(j, int) and 0 <= j < i):
        return f"justifier {j} is not an earlier position"
    if not arena.enabled(moves[j][0], m):
        return f"{move_label(moves[j][0])} does not enable {move_label(m)}"
    return None


def legality_check(p: Play | tuple, arena: Arena | None = None):
    """Legal, PreLegal (well-bracketed only) or Illegal, with the first violation."""
    arena, moves = _unpack(p, arena)
    for i, (m, j) in enumerate(moves):
        if j is not None and not (isinstance(j, int) and 0 <= j < i):
            raise MalformedPlay(f"justifier {j} of position {i} does not point to an earlier position")
    open_questions: list[int] = []  # unanswered questions, the pending one last
    alternation_failure = None
    for i, (m, j) in enumerate(moves):
        problem = justification_problem(arena, moves, i)
        if problem:
            return Illegal(i, problem)
        if arena.kind(m) == Q:
            open_questions.append(i)
        else:
            if not open_questions or open_questions[-1] != j:
                return Illegal(i, "bracketing: answer not justified by the pending question")
            open_questions.pop()
        if alternation_failure is None:
            if i == 0 and arena.player(m) != O:
                alternation_failure = 0
            elif i > 0 and arena.player(m) == arena.player(moves[i - 1][0]):
                alternation_failure = i
    if alternation_failure is not None:
        return PreLegal(alternation_failure)
    return Legal()


def is_legal(p: Play | tuple, arena: Arena | None = None) -> bool:
    return isinstance(legality_check(p, arena), Legal)


def is_prelegal(p: Play | tuple, arena: Arena | None = None) -> bool:
    return isinstance(legality_check(p, arena), (Legal, PreLegal))


def _unpack(p, arena):
    if isinstance(p, Play):
        return p.arena, p.moves
    if arena is None:
        raise ValueError("an arena is needed for a bare move sequence")
    return arena, tuple(p)


# ------------------------------------------------------------------ threads


def initial_ancestor(moves: Sequence[Entry], i: int) -> int:
    while moves[i][1] is not None:
        i = moves[i][1]
    return i


def reindex(moves: Sequence[Entry], keep: Iterable[int], drop_pointer=lambda j: False) -> tuple[Entry, ...]:
    """The subsequence at positions ``keep``.

    A justifier pointing outside the subsequence is moved to the nearest
    kept ancestor along the justification chain, or dropped if there is
    none.  ``drop_pointer(j)`` forces the pointer to position ``j`` to be
    dropped instead.
    """
    keep = sorted(keep)
    new_index = {old: new for new, old in enumerate(keep)}
    out = []
    for old in keep:
        m, j = moves[old]
        while j is not None and j not in new_index and not drop_pointer(j):
            j = moves[j][1]
        out.append((m, None if j is None or drop_pointer(j) else new_index[j]))
    return tuple(out)


def thread_positions(moves: Sequence[Entry], i: int | None = None) -> list[int]:
    """Positions hereditarily justified by the initial ancestor of position ``i`` (default: the last)."""
    if i is None:
        i = len(moves) - 1
    root = initial_ancestor(moves, i)
    return [k for k in range(len(moves)) if initial_ancestor(moves, k) == root]


def current_thread(p: Play | tuple, arena: Arena | None = None):
    """The moves hereditarily justified by the same initial move as the last move."""
    if isinstance(p, Play):
        if not p.moves:
            raise ValueError("the empty play has no current thread")
        return Play(p.arena, reindex(p.moves, thread_positions(p.moves)))
    moves = tuple(p)
    if not moves:
        raise ValueError("the empty play has no current thread")
    return reindex(moves, thread_positions(moves))


# ------------------------------------------------------------------ arrow plays


def side(entry: Entry) -> int:
    return entry[0][0]


def restrict(moves: Sequence[Entry], which: int) -> tuple[Entry, ...]:
    """``s|A`` (which=1) or ``s|B`` (which=2) of a play on ``A => B``, tags removed.

    Pointers from one side to the other (argument-initial moves pointing to
    a result-initial move) are dropped, so such moves become initial.
    """
    keep = [i for i, e in enumerate(moves) if side(e) == which]
    sub = reindex(moves, keep, drop_pointer=lambda j: side(moves[j]) != which)
    return tuple((m[1], j) for m, j in sub)


def prezigzag_violation(arena: Arena, moves: Sequence[Entry]) -> str | None:
    """None if ``moves`` (a play on an arrow arena) satisfies conditions 1 and 2 of zig-zag plays."""
    for i in range(1, len(moves), 2):
        o, p = moves[i - 1], moves[i]
        if side(o) == side(p):
            return f"position {i}: P-move answers an O-move on the same side"
    for i in range(1, len(moves)):
        m, j = moves[i]
        if arena.player(m) != O and side(moves[i]) == 1:
            prev = moves[i - 1]
            prev_initial = side(prev) == 2 and prev[1] is None
            if prev_initial != (j == i - 1):
                return f"position {i}: argument P-move and the preceding result-initial move disagree on the pointer"
    return None


def same_pointers(moves: Sequence[Entry]) -> int | None:
    """First index at which ``s|A`` and ``s|B`` have different pointers, or None."""
    a, b = restrict(moves, 1), restrict(moves, 2)
    for i in range(min(len(a), len(b))):
        if a[i][1] != b[i][1]:
            return i
    return None


@dataclass(frozen=True)
class ZigZagVerdict:
    kind: str  # "zigzag", "pre-zigzag-only" or "neither"
    violation: str = ""

    @property
    def prezigzag(self) -> bool:
        return self.kind != "neither"

    @property
    def zigzag(self) -> bool:
        return self.kind == "zigzag"


def zigzag_check(p: Play | tuple, arena: Arena | None = None) -> ZigZagVerdict:
    arena, moves = _unpack(p, arena)
    verdict = legality_check(moves, arena)
    if not isinstance(verdict, Legal):
        raise IllegalPlay(f"zig-zag analysis needs a legal play: {verdict}")
    problem = prezigzag_violation(arena, moves)
    if problem:
        return ZigZagVerdict("neither", problem)
    k = same_pointers(moves)
    if k is not None:
        return ZigZagVerdict("pre-zigzag-only", f"the restrictions point differently at index {k}")
    return ZigZagVerdict("zigzag")


def dual_moves(moves: Sequence[Entry]) -> tuple[Entry, ...]:
    """Swap each O/P pair and the two sides; see :func:`dual_play`."""
    n = len(moves)
    swap = lambda i: i ^ 1 if (i ^ 1) < n else i  # noqa: E731
    out: list = [None] * n
    for i, ((s, m), j) in enumerate(moves):
        out[swap(i)] = [(3 - s, m), None if j is None else swap(j)]
    for i in range(1, n, 2):
        # an argument-initial move justified by the result-initial move just
        # before it becomes initial, and justifies that move instead
        (s1, _), j1 = moves[i]
        if s1 == 1 and j1 == i - 1:
            out[i - 1][1] = None
            out[i][1] = i - 1
    return tuple((m, j) for m, j in out)


def dual_play(s: Play | tuple, arena: Arena | None = None, dual_arena: Arena | None = None):
    """The dual of a pre-zig-zag play on ``A => B``: the play on ``B => A`` with the same restrictions."""
    arena, moves = _unpack(s, arena)
    problem = prezigzag_violation(arena, moves)
    if problem:
        raise NotPreZigZag(problem)
    out = dual_moves(moves)
    if isinstance(s, Play):
        return Play(dual_arena if dual_arena is not None else _swap_sides(arena), out)
    return out


def split_arrow(arena: Arena) -> tuple[Arena, Arena]:
    """Recover ``A`` and ``B`` from ``A => B``."""
    left = [m for m in arena.moves if m[0] == 1]
    right = [m for m in arena.moves if m[0] == 2]
    flip = {O: P, P: O}
    a_label = {m[1]: (flip[arena.player(m)], arena.kind(m)) for m in left}
    a_enables = {m[1]: [n[1] for n in arena.enables[m] if n[0] == 1] for m in left}
    a_initials = [m[1] for m in left if any(e[0] == 2 for e in arena.enablers(m))]
    b_label = {m[1]: arena.label[m] for m in right}
    b_enables = {m[1]: [n[1] for n in arena.enables[m] if n[0] == 2] for m in right}
    b_initials = [m[1] for m in arena.initials]
    return (Arena([m[1] for m in left], a_label, a_initials, a_enables),
            Arena([m[1] for m in right], b_label, b_initials, b_enables))


def _swap_sides(arena: Arena) -> Arena:
    a, b = split_arrow(arena)
    return arrow_arena(b, a)


__all__ = [
    "Entry", "Illegal", "IllegalPlay", "Legal", "MalformedPlay", "NotPreZigZag", "Play", "PreLegal",
    "ZigZagVerdict", "current_thread", "dual_moves", "dual_play", "initial_ancestor", "is_legal",
    "is_prelegal", "legality_check", "pending_question", "prezigzag_violation", "reindex", "restrict",
    "same_pointers", "show_columns", "show_play", "split_arrow", "thread_positions", "zigzag_check",
]
