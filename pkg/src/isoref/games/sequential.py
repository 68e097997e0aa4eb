"""From inverse strategies to sequential morphisms on threads.

Given inverse strategies ``sigma : A => B`` and ``tau : B => A``, every
pre-legal thread ``s`` on ``A`` lifts to a unique play ``s'`` of ``sigma``
with ``s'|A = s``.  Player moves of ``A`` are fed to ``sigma``; Opponent
moves of ``A`` are fed to ``tau`` on the dual play, and the answer is
swapped back.  The sequential morphism sends ``s`` to ``s'|B``.

Mutual inverseness is never checked globally: any missing or misplaced
response met along the way raises :class:`InverseViolation`.
"""

from __future__ import annotations

from typing import Sequence

from ..arena import P
from .plays import Entry, dual_moves, prezigzag_violation, restrict
from .strategies import StrategyOracle


class InverseViolation(RuntimeError):
    pass


def lift_thread(sigma: StrategyOracle, tau: StrategyOracle, s: Sequence[Entry]) -> tuple[Entry, ...]:
    """The play ``s'`` of ``sigma`` on ``A => B`` with ``s'|A = s``."""
    a_arena = sigma.domain
    lifted: tuple = ()
    position: list[int] = []  # index in s -> index in the lifted play
    for k, (a, j) in enumerate(s):
        jj = None if j is None else position[j]
        if a_arena.player(a) == P:
            if jj is None:
                raise InverseViolation(f"position {k}: a Player move of the argument arena has no justifier")
            lifted = lifted + (((1, a), jj),)
            position.append(len(lifted) - 1)
            r = sigma.respond(lifted)
            if r is None:
                raise InverseViolation(f"sigma does not respond after {k + 1} moves of the thread")
            if r[0][0] != 2:
                raise InverseViolation(f"sigma responds on the same side after {k + 1} moves")
            lifted = lifted + (r,)
        else:
            # an Opponent move of A: ask tau on the dual play, then swap back
            dual = dual_moves(lifted) + (((2, a), None if jj is None else jj ^ 1),)
            r = tau.respond(dual)
            if r is None:
                raise InverseViolation(f"tau does not respond after {k + 1} moves of the thread")
            if r[0][0] != 1:
                raise InverseViolation(f"tau responds on the same side after {k + 1} moves")
            dual = dual + (r,)
            problem = prezigzag_violation(tau.arena, dual)
            if problem:
                raise InverseViolation(f"tau's play is not pre-zig-zag: {problem}")
            lifted = dual_moves(dual)
            position.append(len(lifted) - 1)
    return lifted


class SequentialMorphism:
    """``phi(s) = lift_thread(sigma, tau, s)|B`` on pre-legal threads of ``A``."""

    def __init__(self, sigma: StrategyOracle, tau: StrategyOracle):
        self.sigma, self.tau = sigma, tau
        self.source = sigma.domain
        self.target = sigma.codomain
        self._cache: dict = {}

    def __call__(self, s: Sequence[Entry]) -> tuple[Entry, ...]:
        key = tuple(s)
        if key not in self._cache:
            self._cache[key] = restrict(lift_thread(self.sigma, self.tau, key), 2)
        return self._cache[key]

    def image_entry(self, s: Sequence[Entry]) -> Entry:
        """The last entry of ``phi(s)``."""
        return self(s)[-1]


def sequential_morphism(sigma: StrategyOracle, tau: StrategyOracle) -> SequentialMorphism:
    return SequentialMorphism(sigma, tau)


__all__ = ["InverseViolation", "SequentialMorphism", "lift_thread", "sequential_morphism"]
