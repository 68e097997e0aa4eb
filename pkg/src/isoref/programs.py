"""Example programs and a generator of random well-typed closed programs.

The fixed programs are written in the surface syntax:

* the non-trivial involution on ``(bool -> 1) -> 1``, which keeps a flag
  recording whether its argument has been called before;
* the two Hilbert-hotel terms between ``nat -> nat -> 1`` and ``nat -> 1``,
  built on the pairing ``phi_k(i, m) = m * k + i`` (``0 <= i < k``);
* a while loop, written with ``Y``, that flips a stored bool until it is false;
* a set of closed programs using ``mkvar``.
"""

from __future__ import annotations

import random
from typing import Callable

from .syntax import parse_term, parse_type
from .syntax import terms as T
from .syntax.types import BOOL, ONE, Arrow, Prod, Sum, Type, Var

INVOLUTION_TYPE = "(bool -> 1) -> 1"

# f : (bool -> 1) -> 1 |- M : (bool -> 1) -> 1
INVOLUTION_BODY = r"""
new r : bool := true in
\g : bool -> 1. f (\b : bool. if !r then (r := false; g b) else g (not b))
"""


def involution_term() -> T.Term:
    """``fun f. M`` for the involution ``M`` above."""
    return parse_term(rf"\f : {INVOLUTION_TYPE}. {INVOLUTION_BODY}")


def involution_twice() -> T.Term:
    """``fun x. (fun f. M) ((fun f. M) x)``."""
    m = involution_term()
    x = T.fresh("x")
    return T.lam(x, parse_type(INVOLUTION_TYPE), T.App(m, T.App(m, T.FVar(x))))


def pair_code(i: int, m: int, k: int) -> int:
    """``phi_k(i, m)``."""
    if not 0 <= i < k:
        raise ValueError("phi_k needs 0 <= i < k")
    return m * k + i


def pair_decode(n: int, k: int) -> tuple[int, int]:
    """``phi_k^-1(n) = (i, m)``."""
    return n % k, n // k


# f : nat -> nat -> 1 |- forth : nat -> 1
FORTH = r"""
\f : nat -> nat -> 1.
new count : nat := 0, func : nat -> nat -> 1 := (\z : nat. bot[nat -> 1]) in
\n : nat.
  let k = !count + 1 in
  let p = n mod k in
  let q = n div k in
  if p = 0 then
    (let x = f q in
     count := !count + 1;
     let c = !count in
     func := (let g = !func in \n2 : nat. if n2 = c then x else g n2))
  else !func p q
"""

# f : nat -> 1 |- back : nat -> nat -> 1
BACK = r"""
\f : nat -> 1.
new count : nat := 0 in
\n : nat.
  f (n * (!count + 1));
  count := !count + 1;
  let c = !count in
  \p : nat. f (p * (!count + 1) + c)
"""

CURRIED = "nat -> nat -> 1"
UNCURRIED = "nat -> 1"


def hotel_terms() -> tuple[T.Term, T.Term]:
    """The closed functions ``forth : (nat->nat->1) -> (nat->1)`` and ``back``."""
    return parse_term(FORTH, nat_enabled=True), parse_term(BACK, nat_enabled=True)


def hotel_round_trips() -> tuple[T.Term, T.Term]:
    """``fun x. back (forth x)`` and ``fun x. forth (back x)``."""
    forth, back = hotel_terms()
    x, y = T.fresh("x"), T.fresh("y")
    curried, uncurried = parse_type(CURRIED, True), parse_type(UNCURRIED, True)
    bf = T.lam(x, curried, T.App(back, T.App(forth, T.FVar(x))))
    fb = T.lam(y, uncurried, T.App(forth, T.App(back, T.FVar(y))))
    return bf, fb


FLIP_LOOP = r"""
new b : bool := true in
new steps : bool := false in
Y[1 -> 1] (\loop : 1 -> 1. \u : 1.
  if !b then (b := not !b; steps := true; loop ()) else ()) ();
(!b, !steps)
"""

MKVAR_PROGRAMS = [
    r"!(mkvar (\a:1. ()) (\u:1. ()))",
    r"new x : bool := true in let v = mkvar (\a:bool. x := a) (\u:1. !x) in v := false; !x",
    r"let v = mkvar (\a:bool. ()) (\u:1. true) in v := false; !v",
    r"new c : bool := false in let v = mkvar (\a:1. c := not !c) (\u:1. ()) in v := (); v := (); !c",
    r"(\v : var[bool]. v := true; !v) (mkvar (\a:bool. ()) (\u:1. false))",
    r"new x : bool := false in let w = mkvar (\a:bool. x := not a) (\u:1. not !x) in w := true; (!w, !x)",
    r"!(mkvar (\a:1. ()) (\u:1. bot[1]))",
    r"new x : bool := true in new y : var[bool] := mkvar (\a:bool. x := a) (\u:1. !x) in (!y) := false; !x",
    r"let s = inl[1] (mkvar (\a:bool. ()) (\u:1. true)) in case s of inl v => !v | inr u => false",
    r"new z : bool := false in let p = (mkvar (\a:bool. ()) (\u:1. true), z) in (snd p) := !(fst p); !(snd p)",
    r"new f : 1 -> bool := (\u:1. false) in let v = mkvar (\g:1 -> bool. f := g) (\u:1. !f) in v := (\u:1. true); (!v) ()",
    r"let v = mkvar (\a:1. bot[1]) (\u:1. ()) in v := ()",
    r"new n : bool := true in let v = mkvar (\a:bool. n := a) (\u:1. !n) in "
    r"Y[1 -> 1] (\loop:1 -> 1. \u:1. if !v then (v := false; loop ()) else ()) (); !n",
]


# ------------------------------------------------------------------ random programs

_BASE: tuple[Type, ...] = (ONE, BOOL, Prod(ONE, BOOL), Sum(BOOL, ONE), Arrow(BOOL, BOOL), Arrow(ONE, ONE),
                           Var(BOOL), Var(ONE))


class ProgramGenerator:
    """Random closed well-typed programs over a small universe of types.

    Programs may allocate and update references, use ``mkvar`` and, rarely,
    diverge through ``bot``.  Reads always go through initialized cells.
    """

    def __init__(self, rng: random.Random, types: tuple[Type, ...] = _BASE, diverge: float = 0.01):
        self.rng = rng
        self.types = types
        self.diverge = diverge

    def program(self, depth: int = 4) -> tuple[T.Term, Type]:
        t = self.rng.choice(self.types)
        return self.term(t, {}, depth), t

    def value(self, t: Type, env: dict, d: int) -> T.Term:
        r = self.rng
        if t == ONE:
            return T.UNIT
        if isinstance(t, Sum):
            if r.random() < 0.5:
                return T.Inj(1, self.value(t.left, env, d), t.right)
            return T.Inj(2, self.value(t.right, env, d), t.left)
        if isinstance(t, Prod):
            return T.Pair(self.value(t.left, env, d), self.value(t.right, env, d))
        if isinstance(t, Arrow):
            x = T.fresh("x")
            return T.lam(x, t.dom, self.term(t.cod, {**env, x: t.dom}, max(d - 1, 0)))
        if isinstance(t, Var):
            x = T.fresh("c")
            return T.new_init(x, t.content, self.value(t.content, env, 0), T.FVar(x))
        raise ValueError(f"no values of type {t}")

    def term(self, t: Type, env: dict, d: int) -> T.Term:
        r = self.rng
        names = [x for x, a in env.items() if a == t]
        if d <= 0:
            if names and r.random() < 0.5:
                return T.FVar(r.choice(names))
            return self.value(t, env, 0)
        if r.random() < self.diverge:
            return T.bottom(t)
        options: list[Callable[[], T.Term]] = [lambda: self.value(t, env, d)]
        if names:
            options.append(lambda: T.FVar(r.choice(names)))
        options += [self._let(t, env, d), self._app(t, env, d), self._if(t, env, d), self._seq(t, env, d),
                    self._proj(t, env, d), self._case(t, env, d)]
        if t in (ONE,):
            options.append(self._assign(env, d))
        if t in (ONE, BOOL):
            options.append(self._deref(t, env, d))
        if isinstance(t, Var):
            options.append(self._mkvar(t, env, d))
        if t == BOOL:
            options.append(lambda: T.not_(self.term(BOOL, env, d - 1)))
        return r.choice(options)()

    def _let(self, t, env, d):
        def build():
            a = self.rng.choice(self.types)
            x = T.fresh("l")
            return T.let(x, self.term(a, env, d - 1), self.term(t, {**env, x: a}, d - 1), a)
        return build

    def _app(self, t, env, d):
        def build():
            a = self.rng.choice(self.types)
            return T.App(self.term(Arrow(a, t), env, d - 1), self.term(a, env, d - 1))
        return build

    def _if(self, t, env, d):
        return lambda: T.if_(self.term(BOOL, env, d - 1), self.term(t, env, d - 1), self.term(t, env, d - 1))

    def _seq(self, t, env, d):
        return lambda: T.seq(self.term(ONE, env, d - 1), self.term(t, env, d - 1))

    def _proj(self, t, env, d):
        def build():
            other = self.rng.choice((ONE, BOOL))
            if self.rng.random() < 0.5:
                return T.Proj(1, self.term(Prod(t, other), env, d - 1))
            return T.Proj(2, self.term(Prod(other, t), env, d - 1))
        return build

    def _case(self, t, env, d):
        def build():
            a, b = self.rng.choice((ONE, BOOL)), self.rng.choice((ONE, BOOL))
            y, z = T.fresh("y"), T.fresh("z")
            return T.case(self.term(Sum(a, b), env, d - 1),
                          (y, self.term(t, {**env, y: a}, d - 1)), (z, self.term(t, {**env, z: b}, d - 1)))
        return build

    def _assign(self, env, d):
        def build():
            a = self.rng.choice((ONE, BOOL))
            return T.Assign(self.term(Var(a), env, d - 1), self.term(a, env, d - 1))
        return build

    def _deref(self, t, env, d):
        return lambda: T.Deref(self.term(Var(t), env, d - 1))

    def _mkvar(self, t, env, d):
        def build():
            a = t.content
            w = self.term(Arrow(a, ONE), env, d - 1)
            rd = self.term(Arrow(ONE, a), env, d - 1)
            return T.MkVar(w, rd)
        return build


def random_programs(n: int, seed: int = 0, depth: int = 4) -> list[tuple[T.Term, Type]]:
    gen = ProgramGenerator(random.Random(seed))
    return [gen.program(depth) for _ in range(n)]


__all__ = [
    "BACK", "CURRIED", "FLIP_LOOP", "FORTH", "INVOLUTION_BODY", "INVOLUTION_TYPE", "MKVAR_PROGRAMS",
    "ProgramGenerator", "UNCURRIED", "hotel_round_trips", "hotel_terms", "involution_term",
    "involution_twice", "pair_code", "pair_decode", "random_programs",
]
