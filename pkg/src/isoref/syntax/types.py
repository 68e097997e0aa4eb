"""Types of the language: 0 | 1 | A + B | A * B | A -> B | var[A], plus nat.

Types are immutable dataclasses, so structural equality is ``==`` and they
can be used as dictionary keys.  ``GVar`` is an internal marker used only by
the mkvar-elimination pass; it never comes out of the parser.
"""

from __future__ import annotations

from dataclasses import dataclass


class Type:
    __slots__ = ()

    def __str__(self) -> str:
        return show_type(self)

    def __repr__(self) -> str:
        return f"<type {show_type(self)}>"


@dataclass(frozen=True, repr=False)
class Zero(Type):
    pass


@dataclass(frozen=True, repr=False)
class One(Type):
    pass


@dataclass(frozen=True, repr=False)
class Nat(Type):
    pass


@dataclass(frozen=True, repr=False)
class Sum(Type):
    left: Type
    right: Type


@dataclass(frozen=True, repr=False)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True, repr=False)
class Arrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True, repr=False)
class Var(Type):
    content: Type


@dataclass(frozen=True, repr=False)
class GVar(Type):
    # good-variable reference type; only produced inside eliminate_mkvar
    content: Type


ZERO = Zero()
ONE = One()
NAT = Nat()
BOOL = Sum(ONE, ONE)


def children(t: Type) -> tuple[Type, ...]:
    if isinstance(t, (Sum, Prod)):
        return (t.left, t.right)
    if isinstance(t, Arrow):
        return (t.dom, t.cod)
    if isinstance(t, (Var, GVar)):
        return (t.content,)
    return ()


def rebuild(t: Type, kids: tuple[Type, ...]) -> Type:
    """Return ``t`` with its immediate children replaced by ``kids``."""
    if isinstance(t, (Sum, Prod, Arrow)):
        return type(t)(*kids)
    if isinstance(t, (Var, GVar)):
        return type(t)(kids[0])
    return t


def size(t: Type) -> int:
    """Number of AST nodes."""
    return 1 + sum(size(c) for c in children(t))


def contains(t: Type, cls) -> bool:
    return isinstance(t, cls) or any(contains(c, cls) for c in children(t))


def subterm(t: Type, pos: tuple[int, ...]) -> Type:
    for i in pos:
        t = children(t)[i]
    return t


def replace_at(t: Type, pos: tuple[int, ...], new: Type) -> Type:
    if not pos:
        return new
    kids = list(children(t))
    kids[pos[0]] = replace_at(kids[pos[0]], pos[1:], new)
    return rebuild(t, tuple(kids))


# precedence: -> (1) < + (2) < * (3) < atoms (4).  + and * associate left,
# -> associates right.
def _prec(t: Type) -> int:
    if isinstance(t, Arrow):
        return 1
    if isinstance(t, Sum):
        return 2
    if isinstance(t, Prod):
        return 3
    return 4


def show_type(t: Type) -> str:
    def wrap(s: Type, need: int) -> str:
        text = show_type(s)
        return f"({text})" if _prec(s) < need else text

    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Nat):
        return "nat"
    if isinstance(t, Var):
        return f"var[{show_type(t.content)}]"
    if isinstance(t, GVar):
        return f"gvar[{show_type(t.content)}]"
    if isinstance(t, Sum):
        return f"{wrap(t.left, 2)} + {wrap(t.right, 3)}"
    if isinstance(t, Prod):
        return f"{wrap(t.left, 3)} * {wrap(t.right, 4)}"
    if isinstance(t, Arrow):
        return f"{wrap(t.dom, 2)} -> {wrap(t.cod, 1)}"
    raise TypeError(f"not a type: {t!r}")


def enumerate_types(max_nodes: int, leaves=(ZERO, ONE), binaries=(Sum, Prod, Arrow), unaries=()):
    """All types with at most ``max_nodes`` AST nodes, smallest first.

    The order is deterministic: by size, then by constructor order given.
    """
    by_size: dict[int, list[Type]] = {1: list(leaves)}
    for n in range(2, max_nodes + 1):
        out: list[Type] = []
        for u in unaries:
            out.extend(u(t) for t in by_size.get(n - 1, []))
        for ctor in binaries:
            for k in range(1, n - 1):
                for a in by_size.get(k, []):
                    for b in by_size.get(n - 1 - k, []):
                        out.append(ctor(a, b))
        by_size[n] = out
    return [t for n in range(1, max_nodes + 1) for t in by_size[n]]
