"""Arenas, their constructions, and the interpretation of types as finite families.

A move identifier is a nested tuple recording how the move was built:

* ``(k, m)`` -- move ``m`` of the k-th component of a product or arrow
  (in an arrow, component 1 is the argument side, 2 the result side);
* ``("q",)`` -- the opening question of a lifted sum;
* ``("a", i)`` -- the answer selecting the i-th member of a lifted sum;
* ``("in", i, m)`` -- move ``m`` of the i-th member, below its answer.

These tags make systematic renamings easy and give every move a readable,
unique label (see :func:`move_label`).
"""

from __future__ import annotations

import json
from typing import Hashable, Iterable, Sequence

from .syntax.types import Arrow, GVar, Nat, One, Prod, Sum, Type, Var, Zero

Move = Hashable
O, P, Q, A = "O", "P", "Q", "A"

DEFAULT_SIZE_LIMIT = 100_000


class SizeLimit(RuntimeError):
    pass


class NatUnsupported(ValueError):
    pass


class UnknownMove(KeyError):
    pass


class InvalidArena(ValueError):
    pass


class Arena:
    """An arena: moves, their O/P and Q/A labels, initial moves and enabling.

    Arenas are treated as immutable once built.  ``enables[m]`` lists the
    moves that ``m`` enables, in a fixed order.
    """

    __slots__ = ("moves", "label", "initials", "enables", "_enablers")

    def __init__(self, moves: Sequence[Move], label: dict, initials: Sequence[Move], enables: dict):
        self.moves = tuple(moves)
        self.label = dict(label)
        self.initials = tuple(initials)
        self.enables = {m: tuple(enables.get(m, ())) for m in self.moves}
        self._enablers = None

    def __len__(self) -> int:
        return len(self.moves)

    def __repr__(self) -> str:
        return f"<Arena {len(self.moves)} moves, {len(self.initials)} initial>"

    def player(self, m: Move) -> str:
        return self.label[m][0]

    def kind(self, m: Move) -> str:
        return self.label[m][1]

    def is_question(self, m: Move) -> bool:
        return self.label[m][1] == Q

    def edges(self) -> list[tuple[Move, Move]]:
        return [(m, n) for m in self.moves for n in self.enables[m]]

    def enablers(self, m: Move) -> tuple[Move, ...]:
        if self._enablers is None:
            back: dict = {x: [] for x in self.moves}
            for x, y in self.edges():
                back[y].append(x)
            self._enablers = {x: tuple(v) for x, v in back.items()}
        return self._enablers[m]

    def enabled(self, m: Move, n: Move) -> bool:
        return n in self.enables.get(m, ())

    def __contains__(self, m: Move) -> bool:
        return m in self.label

    def same_as(self, other: "Arena") -> bool:
        """Equality of the underlying structures, move names included."""
        return (
            set(self.moves) == set(other.moves)
            and self.label == other.label
            and set(self.initials) == set(other.initials)
            and set(self.edges()) == set(other.edges())
        )

    def rename(self, f) -> "Arena":
        """The same arena with every move ``m`` renamed to ``f(m)``."""
        return Arena(
            [f(m) for m in self.moves],
            {f(m): lab for m, lab in self.label.items()},
            [f(m) for m in self.initials],
            {f(m): [f(n) for n in ns] for m, ns in self.enables.items()},
        )


EMPTY = Arena((), {}, (), {})

ArenaFamily = tuple  # a finite family of arenas, indexed by position


def _flip(lab: tuple[str, str]) -> tuple[str, str]:
    return (P if lab[0] == O else O, lab[1])


def product_n(arenas: Sequence[Arena], limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """Disjoint union of arenas; component ``k`` (from 1) tags its moves ``(k, m)``."""
    if sum(len(a.moves) for a in arenas) > limit:
        raise SizeLimit(f"product would exceed {limit} moves")
    moves, label, initials, enables = [], {}, [], {}
    for k, a in enumerate(arenas, 1):
        for m in a.moves:
            moves.append((k, m))
            label[(k, m)] = a.label[m]
            enables[(k, m)] = [(k, n) for n in a.enables[m]]
        initials.extend((k, m) for m in a.initials)
    return Arena(moves, label, initials, enables)


def product_arena(a: Arena, b: Arena, limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    return product_n((a, b), limit)


def arrow_arena(a: Arena, b: Arena, limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """A => B: A's moves with polarity flipped, hung below every initial move of B."""
    if len(a.moves) + len(b.moves) > limit:
        raise SizeLimit(f"arrow arena would exceed {limit} moves")
    moves, label, enables = [], {}, {}
    for m in a.moves:
        moves.append((1, m))
        label[(1, m)] = _flip(a.label[m])
        enables[(1, m)] = [(1, n) for n in a.enables[m]]
    for m in b.moves:
        moves.append((2, m))
        label[(2, m)] = b.label[m]
        enables[(2, m)] = [(2, n) for n in b.enables[m]]
    for i in b.initials:
        enables[(2, i)] = enables[(2, i)] + [(1, j) for j in a.initials]
    return Arena(moves, label, [(2, i) for i in b.initials], enables)


def lifted_sum_arena(family: Sequence[Arena], limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """Sigma: an opening question, one answer per member, each member below its answer."""
    if 1 + sum(1 + len(a.moves) for a in family) > limit:
        raise SizeLimit(f"lifted sum would exceed {limit} moves")
    q = ("q",)
    moves, label, enables = [q], {q: (O, Q)}, {q: []}
    for i, a in enumerate(family):
        ans = ("a", i)
        moves.append(ans)
        label[ans] = (P, A)
        enables[q].append(ans)
        enables[ans] = [("in", i, m) for m in a.initials]
        for m in a.moves:
            moves.append(("in", i, m))
            label[("in", i, m)] = a.label[m]
            enables[("in", i, m)] = [("in", i, n) for n in a.enables[m]]
    return Arena(moves, label, [q], enables)


def lift_T(family: Sequence[Arena], limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """The lift monad on families: T(A_i) = {Sigma_i A_i}."""
    return lifted_sum_arena(family, limit)


def interpret_type(a: Type, limit: int = DEFAULT_SIZE_LIMIT) -> ArenaFamily:
    """The finite family of arenas denoted by a type.

    Function types use the Kleisli form: [[A -> B]] is the single arena
    Pi_i (A_i => T[[B]]), and var[A] is read as (A -> 1) * (1 -> A).
    """
    if isinstance(a, Zero):
        return ()
    if isinstance(a, One):
        return (EMPTY,)
    if isinstance(a, Sum):
        return interpret_type(a.left, limit) + interpret_type(a.right, limit)
    if isinstance(a, Prod):
        left, right = interpret_type(a.left, limit), interpret_type(a.right, limit)
        return tuple(product_arena(x, y, limit) for x in left for y in right)
    if isinstance(a, Arrow):
        dom = interpret_type(a.dom, limit)
        result = lift_T(interpret_type(a.cod, limit), limit)
        return (product_n([arrow_arena(x, result, limit) for x in dom], limit),)
    if isinstance(a, (Var, GVar)):
        content = interpret_type(a.content, limit)
        t1 = lift_T((EMPTY,), limit)
        write = product_n([arrow_arena(x, t1, limit) for x in content], limit)
        read = lift_T(content, limit)
        return (product_arena(write, read, limit),)
    if isinstance(a, Nat):
        raise NatUnsupported("nat has an infinitely branching arena; only finitary types are interpreted")
    raise TypeError(f"not a type: {a!r}")


def lifted_interpretation(a: Type, limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """T[[a]] as a single arena."""
    return lift_T(interpret_type(a, limit), limit)


def restrict(a: Arena, keep: Iterable[Move]) -> Arena:
    keep = set(keep)
    return Arena(
        [m for m in a.moves if m in keep],
        {m: a.label[m] for m in a.moves if m in keep},
        [m for m in a.initials if m in keep],
        {m: [n for n in a.enables[m] if n in keep] for m in a.moves if m in keep},
    )


def trim(a: Arena) -> Arena:
    """Remove unanswerable questions and everything only reachable through them.

    Iterated to a fixpoint: removing a question can leave another question
    without an answer, and moves may have several enablers.
    """
    alive = set(a.moves)
    while True:
        dead = {
            m for m in alive
            if a.is_question(m) and not any(n in alive and not a.is_question(n) for n in a.enables[m])
        }
        alive -= dead
        reached, todo = set(), [m for m in a.initials if m in alive]
        while todo:
            m = todo.pop()
            if m in reached:
                continue
            reached.add(m)
            todo.extend(n for n in a.enables[m] if n in alive and n not in reached)
        if reached == alive:
            return restrict(a, alive)
        alive = reached


def is_complete(a: Arena) -> bool:
    """Every question enables some answer."""
    return all(any(not a.is_question(n) for n in a.enables[m]) for m in a.moves if a.is_question(m))


def arity(a: Arena, m: Move) -> int:
    if m not in a:
        raise UnknownMove(m)
    return len(a.enables[m])


def validate(a: Arena) -> None:
    """Raise InvalidArena unless ``a`` satisfies the arena conditions.

    Checks: initial moves are O-questions; enabling flips polarity; answers
    are enabled by questions only; enabling is acyclic; every move is
    reachable from an initial move.
    """
    for m in a.initials:
        if m not in a:
            raise InvalidArena(f"initial move {move_label(m)} is not a move")
        if a.label[m] != (O, Q):
            raise InvalidArena(f"initial move {move_label(m)} is labelled {''.join(a.label[m])}, not OQ")
    for m, n in a.edges():
        if n not in a:
            raise InvalidArena(f"{move_label(m)} enables unknown move {move_label(n)}")
        if a.player(m) == a.player(n):
            raise InvalidArena(f"{move_label(m)} enables {move_label(n)} of the same player")
        if a.kind(n) == A and a.kind(m) != Q:
            raise InvalidArena(f"answer {move_label(n)} is enabled by answer {move_label(m)}")
    # acyclicity by depth-first search with colours
    colour: dict = {}
    for root in a.moves:
        if root in colour:
            continue
        stack = [(root, iter(a.enables[root]))]
        colour[root] = 1
        while stack:
            m, it = stack[-1]
            for n in it:
                if colour.get(n) == 1:
                    raise InvalidArena(f"enabling has a cycle through {move_label(n)}")
                if n not in colour:
                    colour[n] = 1
                    stack.append((n, iter(a.enables[n])))
                    break
            else:
                colour[m] = 2
                stack.pop()
    reached, todo = set(), list(a.initials)
    while todo:
        m = todo.pop()
        if m not in reached:
            reached.add(m)
            todo.extend(a.enables[m])
    missing = [m for m in a.moves if m not in reached]
    if missing:
        raise InvalidArena(f"move {move_label(missing[0])} is not reachable from an initial move")


def is_valid(a: Arena) -> bool:
    try:
        validate(a)
    except InvalidArena:
        return False
    return True


# ------------------------------------------------------------------ output

def move_label(m: Move) -> str:
    """A readable, unique string for a structured move identifier."""
    if isinstance(m, tuple):
        if m == ("q",):
            return "q"
        if len(m) == 2 and m[0] == "a":
            return f"a{m[1]}"
        if len(m) == 3 and m[0] == "in":
            return f"{m[1]}/{move_label(m[2])}"
        if len(m) == 2 and isinstance(m[0], int):
            return f"{m[0]}.{move_label(m[1])}"
    return str(m)


def to_json(a: Arena) -> dict:
    return {
        "moves": [{"id": move_label(m), "player": a.player(m), "kind": a.kind(m)} for m in a.moves],
        "initials": [move_label(m) for m in a.initials],
        "enabling": [[move_label(m), move_label(n)] for m, n in a.edges()],
    }


def from_json(data: dict) -> Arena:
    """Rebuild an arena from :func:`to_json` output; moves become their label strings."""
    moves = [d["id"] for d in data["moves"]]
    label = {d["id"]: (d["player"], d["kind"]) for d in data["moves"]}
    enables: dict = {m: [] for m in moves}
    for m, n in data["enabling"]:
        enables[m].append(n)
    a = Arena(moves, label, data["initials"], enables)
    validate(a)
    return a


def to_dot(a: Arena, name: str = "arena") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for m in a.moves:
        shape = "box" if a.kind(m) == Q else "ellipse"
        style = ", style=bold" if m in a.initials else ""
        lab = f"{move_label(m)}\\n{a.player(m)}{a.kind(m)}"
        lines.append(f'  "{move_label(m)}" [label="{lab}", shape={shape}{style}];')
    for m, n in a.edges():
        lines.append(f'  "{move_label(m)}" -> "{move_label(n)}";')
    lines.append("}")
    return "\n".join(lines)


def to_text(a: Arena) -> str:
    """Indented listing, each move under the first move that enables it."""
    if not a.moves:
        return "(empty arena)"
    lines: list[str] = []
    shown: set = set()

    def walk(m: Move, depth: int):
        again = " (see above)" if m in shown else ""
        lines.append(f"{'  ' * depth}{move_label(m)} [{a.player(m)}{a.kind(m)}]{again}")
        if again:
            return
        shown.add(m)
        for n in a.enables[m]:
            walk(n, depth + 1)

    for i in a.initials:
        walk(i, 0)
    return "\n".join(lines)


def dumps(a: Arena) -> str:
    return json.dumps(to_json(a), indent=2)


__all__ = [
    "A", "O", "P", "Q", "Arena", "ArenaFamily", "DEFAULT_SIZE_LIMIT", "EMPTY", "InvalidArena",
    "NatUnsupported", "SizeLimit", "UnknownMove", "arity", "arrow_arena", "from_json",
    "interpret_type", "is_complete", "is_valid", "lift_T", "lifted_interpretation",
    "lifted_sum_arena", "move_label", "product_arena", "product_n", "restrict", "to_dot",
    "to_json", "to_text", "trim", "validate",
]
