"""Term syntax, in locally nameless form.

Bound variables are de Bruijn indices (``BVar``); the name a binder was
written with is kept as a hint that does not take part in equality, so
alpha-equivalent terms compare equal.  Free variables are ``FVar`` by name.
Programs built in Python use :func:`lam` and friends, which take a name and
abstract it, so nobody has to count indices by hand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .types import ONE, Arrow, Type, Var


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import show_term

        return show_term(self)

    def __repr__(self) -> str:
        return f"<term {self}>"


@dataclass(frozen=True, repr=False)
class BVar(Term):
    index: int
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True, repr=False)
class FVar(Term):
    name: str


@dataclass(frozen=True, repr=False)
class Lam(Term):
    ty: Type | None  # None only for `let`-bound lambdas applied on the spot
    body: Term
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True, repr=False)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, repr=False)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Proj(Term):
    index: int  # 1 or 2
    body: Term


@dataclass(frozen=True, repr=False)
class Unit(Term):
    pass


@dataclass(frozen=True, repr=False)
class Inj(Term):
    index: int  # 1 or 2
    body: Term
    other: Type  # the summand this injection does not land in


@dataclass(frozen=True, repr=False)
class Case(Term):
    scrutinee: Term
    left: Term  # binds one variable
    right: Term  # binds one variable
    left_hint: str = field(default="x", compare=False)
    right_hint: str = field(default="y", compare=False)


@dataclass(frozen=True, repr=False)
class New(Term):
    ty: Type
    good: bool = False


@dataclass(frozen=True, repr=False)
class Assign(Term):
    ref: Term
    value: Term
    good: bool = False


@dataclass(frozen=True, repr=False)
class Deref(Term):
    ref: Term
    good: bool = False


@dataclass(frozen=True, repr=False)
class MkVar(Term):
    write: Term
    read: Term


@dataclass(frozen=True, repr=False)
class Loc(Term):
    id: int
    good: bool = False


@dataclass(frozen=True, repr=False)
class Num(Term):
    value: int


NAT_OPS = ("+", "-", "*", "div", "mod", "=", "<")


@dataclass(frozen=True, repr=False)
class Prim(Term):
    op: str
    left: Term
    right: Term


UNIT = Unit()


# ---------------------------------------------------------------- traversal

def binders(t: Term) -> tuple[int, ...]:
    """How many variables each child of ``t`` binds, in child order."""
    if isinstance(t, Lam):
        return (1,)
    if isinstance(t, Case):
        return (0, 1, 1)
    return tuple(0 for _ in subterms(t))


def subterms(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, (App,)):
        return (t.fn, t.arg)
    if isinstance(t, (Pair, Prim)):
        return (t.left, t.right)
    if isinstance(t, (Proj, Inj)):
        return (t.body,)
    if isinstance(t, Case):
        return (t.scrutinee, t.left, t.right)
    if isinstance(t, Assign):
        return (t.ref, t.value)
    if isinstance(t, Deref):
        return (t.ref,)
    if isinstance(t, MkVar):
        return (t.write, t.read)
    return ()


def with_subterms(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, Lam):
        return Lam(t.ty, kids[0], t.hint)
    if isinstance(t, App):
        return App(*kids)
    if isinstance(t, Pair):
        return Pair(*kids)
    if isinstance(t, Prim):
        return Prim(t.op, *kids)
    if isinstance(t, Proj):
        return Proj(t.index, kids[0])
    if isinstance(t, Inj):
        return Inj(t.index, kids[0], t.other)
    if isinstance(t, Case):
        return Case(kids[0], kids[1], kids[2], t.left_hint, t.right_hint)
    if isinstance(t, Assign):
        return Assign(kids[0], kids[1], t.good)
    if isinstance(t, Deref):
        return Deref(kids[0], t.good)
    if isinstance(t, MkVar):
        return MkVar(*kids)
    return t


def _map_vars(t: Term, fn, depth: int = 0) -> Term:
    """Rebuild ``t`` calling ``fn(var, depth)`` on every BVar/FVar."""
    if isinstance(t, (BVar, FVar)):
        return fn(t, depth)
    kids = subterms(t)
    if not kids:
        return t
    new = tuple(_map_vars(k, fn, depth + b) for k, b in zip(kids, binders(t)))
    if all(a is b for a, b in zip(new, kids)):
        return t
    return with_subterms(t, new)


def abstract(t: Term, name: str) -> Term:
    """Turn free occurrences of ``name`` into the variable bound just above ``t``."""

    def go(v, depth):
        if isinstance(v, FVar) and v.name == name:
            return BVar(depth, name)
        return v

    return _map_vars(t, go)


def instantiate(body: Term, value: Term) -> Term:
    """Substitute ``value`` for the variable bound just above ``body``.

    ``value`` must not contain dangling bound variables (true of every term
    built from closed pieces), so no shifting is needed.
    """

    def go(v, depth):
        if isinstance(v, BVar):
            if v.index == depth:
                return value
            if v.index > depth:
                return BVar(v.index - 1, v.hint)
        return v

    return _map_vars(body, go)


def shift(t: Term, by: int = 1, cutoff: int = 0) -> Term:
    def go(v, depth):
        if isinstance(v, BVar) and v.index >= depth + cutoff:
            return BVar(v.index + by, v.hint)
        return v

    return _map_vars(t, go)


def free_vars(t: Term) -> set[str]:
    out: set[str] = set()

    def go(v, depth):
        if isinstance(v, FVar):
            out.add(v.name)
        return v

    _map_vars(t, go)
    return out


def subst_free(t: Term, name: str, value: Term) -> Term:
    """Replace the free variable ``name`` with a closed ``value``."""

    def go(v, depth):
        if isinstance(v, FVar) and v.name == name:
            return value
        return v

    return _map_vars(t, go)


def is_closed(t: Term, depth: int = 0) -> bool:
    if isinstance(t, BVar):
        return t.index < depth
    if isinstance(t, FVar):
        return False
    return all(is_closed(k, depth + b) for k, b in zip(subterms(t), binders(t)))


def term_size(t: Term) -> int:
    return 1 + sum(term_size(k) for k in subterms(t))


def contains_node(t: Term, cls) -> bool:
    return isinstance(t, cls) or any(contains_node(k, cls) for k in subterms(t))


# ------------------------------------------------------------------ builders

_fresh = itertools.count()


def fresh(base: str = "v") -> str:
    return f"{base}%{next(_fresh)}"


def lam(name: str, ty: Type | None, body: Term) -> Lam:
    return Lam(ty, abstract(body, name), name.split("%")[0])


def case(scrutinee: Term, left: tuple[str, Term], right: tuple[str, Term]) -> Case:
    (x, n1), (y, n2) = left, right
    return Case(scrutinee, abstract(n1, x), abstract(n2, y), x.split("%")[0], y.split("%")[0])


def app(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def let(name: str, value: Term, body: Term, ty: Type | None = None) -> Term:
    return App(lam(name, ty, body), value)


def seq(first: Term, then: Term) -> Term:
    """``first; then``, i.e. ``(fun _ : 1. then) first``."""
    return App(Lam(ONE, shift(then), "_"), first)


def new_in(name: str, ty: Type, body: Term) -> Term:
    """``new name : ty in body``."""
    return App(lam(name, Var(ty), body), New(ty))


def new_init(name: str, ty: Type, init: Term, body: Term) -> Term:
    """``new name : ty := init in body``; ``init`` is evaluated first."""
    v = fresh("init")
    return let(v, init, new_in(name, ty, seq(Assign(FVar(name), FVar(v)), body)))


TRUE = Inj(1, UNIT, ONE)
FALSE = Inj(2, UNIT, ONE)


def if_(cond: Term, then: Term, else_: Term) -> Term:
    return Case(cond, shift(then), shift(else_), "_", "_")


def not_(b: Term) -> Term:
    return if_(b, FALSE, TRUE)


def fix(a: Type, b: Type) -> Term:
    """The fixed point combinator Y at type A -> B, built from a reference.

    fun f. new y : A -> B in y := (fun a. f !y a); !y
    """
    fun_t = Arrow(a, b)
    f, y, x = fresh("f"), fresh("y"), fresh("a")
    body = new_in(
        y,
        fun_t,
        seq(
            Assign(FVar(y), lam(x, a, app(FVar(f), Deref(FVar(y)), FVar(x)))),
            Deref(FVar(y)),
        ),
    )
    return lam(f, Arrow(fun_t, fun_t), body)


def bottom(a: Type) -> Term:
    """A divergent inhabitant of ``a``: Y (fun x. x) ()."""
    x = fresh("x")
    fun_t = Arrow(ONE, a)
    return app(fix(ONE, a), lam(x, fun_t, FVar(x)), UNIT)
