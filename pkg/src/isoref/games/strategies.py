"""Strategies as deterministic next-move oracles.

An oracle for ``sigma : A => B`` maps an O-ending play on ``A => B`` to
Player's response ``(move, justifier)``, or ``None`` when Player does not
respond.  Oracles are only meaningful on plays of the strategy; on other
plays their answer is unspecified.  Responses are memoized, which is safe
because oracles are pure functions of the play.
"""

from __future__ import annotations

import hashlib
import random
from typing import Callable, Iterator, Sequence

from ..arena import O, P, Q, Arena, Move, arrow_arena
from ..pathiso import PathMorphism
from .plays import Entry, current_thread, pending_question, reindex, thread_positions

Response = Entry | None


class StrategyOracle:
    """A strategy on ``domain => codomain`` given by its next-move function."""

    def __init__(self, domain: Arena, codomain: Arena, respond: Callable[[tuple], Response], name: str = "sigma"):
        self.domain = domain
        self.codomain = codomain
        self.arena = arrow_arena(domain, codomain)
        self.name = name
        self._respond = respond
        self._cache: dict = {}

    def respond(self, play: Sequence[Entry]) -> Response:
        key = tuple(play)
        if key not in self._cache:
            self._cache[key] = self._respond(key)
        return self._cache[key]

    __call__ = respond

    def __repr__(self) -> str:
        return f"<StrategyOracle {self.name}>"


def legal_moves(arena: Arena, moves: Sequence[Entry], player: str, new_threads: bool = True) -> list[Entry]:
    """Moves of ``player`` that extend ``moves`` to a well-bracketed justified sequence."""
    out: list[Entry] = []
    if new_threads or not moves:
        out.extend((m, None) for m in arena.initials if arena.player(m) == player)
    pending = pending_question(arena, moves)
    for j, (mj, _) in enumerate(moves):
        for n in arena.enables[mj]:
            if arena.player(n) != player:
                continue
            if arena.kind(n) != Q and j != pending:
                continue
            out.append((n, j))
    return out


# ------------------------------------------------------------------ copycat


def _partner(j: int) -> int:
    return j ^ 1


def _copy_response(moves: tuple, translate: Callable[[tuple, int], Move]) -> Response:
    """Copy the last move to the other side; ``translate(moves, i)`` gives the copied move."""
    i = len(moves) - 1
    (s, _), j = moves[i]
    target = (3 - s, translate(moves, i))
    if j is None:
        return (target, i)
    return (target, _partner(j))


def copycat(a: Arena) -> StrategyOracle:
    return StrategyOracle(a, a, lambda moves: _copy_response(moves, lambda ms, i: ms[i][0][1]), "id")


def side_path(moves: Sequence[Entry], i: int) -> tuple:
    """The path (root first) of position ``i`` inside its own side of an arrow play."""
    s = moves[i][0][0]
    path = []
    while True:
        (t, m), j = moves[i]
        path.append(m)
        if j is None or moves[j][0][0] != s:
            break
        i = j
    return tuple(reversed(path))


def copycat_along(phi: PathMorphism, inverse: PathMorphism, domain: Arena, codomain: Arena):
    """Copycat that translates each move through ``phi`` along its path.

    Returns the oracle on ``domain => codomain`` and its inverse on
    ``codomain => domain`` (copycat along ``inverse``).
    """
    if inverse.then(phi).mapping != {q: q for q in inverse.mapping} or \
            phi.then(inverse).mapping != {p: p for p in phi.mapping}:
        raise ValueError("copycat_along needs mutually inverse path morphisms")

    def along(forward: PathMorphism, backward: PathMorphism):
        def translate(moves, i):
            path = side_path(moves, i)
            image = forward(path) if moves[i][0][0] == 1 else backward(path)
            return image[-1]

        return lambda moves: _copy_response(moves, translate)

    sigma = StrategyOracle(domain, codomain, along(phi, inverse), "copycat_along")
    tau = StrategyOracle(codomain, domain, along(inverse, phi), "copycat_along^-1")
    return sigma, tau


# ------------------------------------------------------------------ composition


class _Interaction:
    """Simulate sigma || tau on the visible play of ``A => C``."""

    def __init__(self, sigma: StrategyOracle, tau: StrategyOracle, fuel: int):
        self.sigma, self.tau, self.fuel = sigma, tau, fuel
        self.u: list[tuple[str, Move, int | None]] = []  # (component, move, justifier in u)

    def view(self, left: str, right: str) -> tuple[tuple, list[int]]:
        """Restriction of u to two components as a play on ``left => right``."""
        keep = [i for i, (c, _, _) in enumerate(self.u) if c in (left, right)]
        index = {old: new for new, old in enumerate(keep)}
        out = []
        for i in keep:
            c, m, j = self.u[i]
            out.append(((1 if c == left else 2, m), index.get(j)))
        return tuple(out), keep

    def add(self, comp: str, move: Move, just: int | None) -> int:
        self.u.append((comp, move, just))
        return len(self.u) - 1

    def run(self, comp: str) -> int | None:
        """After an O-move in ``comp``, play until a visible move; its index in u."""
        who = "sigma" if comp == "A" else "tau"
        for _ in range(self.fuel):
            if who == "sigma":
                view, keep = self.view("A", "B")
                r = self.sigma.respond(view)
                if r is None:
                    return None
                (t, m), j = r
                c = "A" if t == 1 else "B"
            else:
                view, keep = self.view("B", "C")
                r = self.tau.respond(view)
                if r is None:
                    return None
                (t, m), j = r
                c = "B" if t == 1 else "C"
            k = self.add(c, m, None if j is None else keep[j])
            if c != "B":
                return k
            who = "tau" if who == "sigma" else "sigma"
        return None  # out of fuel: an infinite hidden dialogue

    def visible_justifier(self, k: int, visible: dict) -> int | None:
        j = self.u[k][2]
        while j is not None and j not in visible:
            j = self.u[j][2]
        return None if j is None else visible[j]


def compose(sigma: StrategyOracle, tau: StrategyOracle, fuel: int = 1000) -> StrategyOracle:
    """``sigma ; tau`` by interaction and hiding.

    A visible move whose justifier is hidden points to its nearest visible
    hereditary justifier.
    """
    if not sigma.codomain.same_as(tau.domain):
        raise ValueError("composition needs the codomain of sigma to be the domain of tau")

    def respond(moves: tuple) -> Response:
        it = _Interaction(sigma, tau, fuel)
        visible: dict[int, int] = {}  # index in u -> index in the visible play
        position: list[int] = []  # index in the visible play -> index in u
        for i in range(0, len(moves), 2):
            (t, m), j = moves[i]
            comp = "A" if t == 1 else "C"
            k = it.add(comp, m, None if j is None else position[j])
            visible[k] = i
            position.append(k)
            r = it.run(comp)
            if r is None:
                return None
            entry = ((1 if it.u[r][0] == "A" else 2, it.u[r][1]), it.visible_justifier(r, visible))
            if i + 1 == len(moves):
                return entry
            if entry != moves[i + 1]:
                return None  # the play is not one of sigma ; tau
            visible[r] = i + 1
            position.append(r)
        return None

    return StrategyOracle(sigma.domain, tau.codomain, respond, f"({sigma.name};{tau.name})")


# ------------------------------------------------------------------ generated oracles


def _digest(*parts) -> int:
    return int.from_bytes(hashlib.sha256(repr(parts).encode()).digest()[:8], "big")


def random_oracle(domain: Arena, codomain: Arena, seed: int, stop: float = 0.1) -> StrategyOracle:
    """A single-threaded strategy choosing its moves pseudo-randomly from the current thread.

    The choice is a deterministic function of ``seed`` and the current
    thread, so the oracle is a genuine (deterministic) strategy.
    """
    arena = arrow_arena(domain, codomain)

    def respond(moves: tuple) -> Response:
        positions = thread_positions(moves)
        thread = reindex(moves, positions)
        options = legal_moves(arena, thread, P, new_threads=False)
        rng = random.Random(_digest(seed, thread))
        if not options or rng.random() < stop:
            return None
        m, j = options[rng.randrange(len(options))]
        return (m, positions[j])

    return StrategyOracle(domain, codomain, respond, f"random{seed}")


def rename_oracle(sigma: StrategyOracle, rename_a: dict, rename_b: dict) -> StrategyOracle:
    """The same strategy on the arenas with moves renamed by the bijections ``rename_a``, ``rename_b``."""
    back_a = {v: k for k, v in rename_a.items()}
    back_b = {v: k for k, v in rename_b.items()}

    def move_back(m):
        return (1, back_a[m[1]]) if m[0] == 1 else (2, back_b[m[1]])

    def move_fwd(m):
        return (1, rename_a[m[1]]) if m[0] == 1 else (2, rename_b[m[1]])

    def respond(moves: tuple) -> Response:
        r = sigma.respond(tuple((move_back(m), j) for m, j in moves))
        return None if r is None else (move_fwd(r[0]), r[1])

    return StrategyOracle(
        sigma.domain.rename(rename_a.__getitem__), sigma.codomain.rename(rename_b.__getitem__),
        respond, f"rename({sigma.name})",
    )


# ------------------------------------------------------------------ exploring plays


def sample_play(sigma: StrategyOracle, rng: random.Random, max_len: int = 12, new_threads: bool = False) -> tuple:
    """A play of ``sigma`` with randomly chosen Opponent moves."""
    moves: tuple = ()
    while len(moves) < max_len:
        options = legal_moves(sigma.arena, moves, O, new_threads=new_threads)
        if not options:
            break
        moves = moves + (options[rng.randrange(len(options))],)
        if len(moves) >= max_len:
            break
        r = sigma.respond(moves)
        if r is None:
            break
        moves = moves + (r,)
    return moves


def enumerate_plays(sigma: StrategyOracle, max_len: int = 12, new_threads: bool = False,
                    limit: int | None = None) -> Iterator[tuple]:
    """Every play of ``sigma`` up to ``max_len`` moves: the P-ending plays and the unanswered O-ending ones."""
    count = 0
    stack: list[tuple] = [()]
    while stack:
        moves = stack.pop()
        yield moves
        count += 1
        if limit is not None and count >= limit:
            return
        if len(moves) >= max_len:
            continue
        for o in reversed(legal_moves(sigma.arena, moves, O, new_threads=new_threads)):
            extended = moves + (o,)
            r = sigma.respond(extended) if len(extended) < max_len else None
            if r is None:
                yield extended
                count += 1
                if limit is not None and count >= limit:
                    return
            else:
                stack.append(extended + (r,))


def o_ending_prefixes(moves: tuple) -> list[tuple]:
    return [moves[:i] for i in range(1, len(moves) + 1, 2)]


def single_thread_violation(sigma: StrategyOracle, moves: tuple) -> str | None:
    """Check that the response to ``moves`` (O-ending) is determined by its current thread."""
    r = sigma.respond(moves)
    positions = thread_positions(moves)
    r_thread = sigma.respond(current_thread(moves))
    if r is None or r_thread is None:
        return None if r is None and r_thread is None else "response depends on other threads"
    if r[0] != r_thread[0]:
        return "response move depends on other threads"
    j, jt = r[1], r_thread[1]
    expected = None if jt is None else positions[jt]
    if j != expected:
        return "response points outside the current thread"
    return None


__all__ = [
    "StrategyOracle", "compose", "copycat", "copycat_along", "enumerate_plays", "legal_moves",
    "o_ending_prefixes", "random_oracle", "rename_oracle", "sample_play", "side_path",
    "single_thread_violation",
]
