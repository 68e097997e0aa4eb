"""Canonical forms of types under the equational theory of isomorphisms.

The theory has eleven equations::

    A * B = B * A                 A + B = B + A
    A * (B * C) = (A * B) * C     A + (B + C) = (A + B) + C
    1 * A = A                     0 + A = A
    A * (B + C) = A * B + A * C   (A + B) -> C = (A -> C) * (B -> C)
    0 -> A = 1                    A -> 0 = 1
    var[A] = (A -> 1) * (1 -> A)

Normalization eliminates ``var`` first, then rebuilds the type bottom-up
with smart constructors for ``+``, ``*`` and ``->`` that assume their
arguments are already canonical.  Each local rewrite is recorded as a
:class:`Step` so coercions can be synthesized from the trace.  Sums and
products are kept as left-nested chains, flattened and sorted.

Canonical forms follow the grammar::

    T ::= 0 | 1 | S | P | Ar        S ::= L + ... + L   (at least two)
    P ::= Ar * ... * Ar (at least two)
    Ar ::= L -> R                   L ::= Ar | P | 1     R ::= Ar | P | S | 1
"""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax.types import (
    ONE, ZERO, Arrow, GVar, Nat, One, Prod, Sum, Type, Var, Zero, replace_at, show_type, subterm,
)


class VarPresent(ValueError):
    pass


def measure(a: Type) -> int:
    """|0| = |1| = 1, |A+B| = |A|+2|B|, |A*B| = (|A|+1)|B|, |A->B| = (|B|+1)^|A|."""
    if isinstance(a, (Zero, One)):
        return 1
    if isinstance(a, Sum):
        return measure(a.left) + 2 * measure(a.right)
    if isinstance(a, Prod):
        return (measure(a.left) + 1) * measure(a.right)
    if isinstance(a, Arrow):
        return (measure(a.cod) + 1) ** measure(a.dom)
    if isinstance(a, (Var, GVar)):
        raise VarPresent(f"measure is undefined on reference types: {show_type(a)}")
    raise VarPresent(f"measure is undefined on {show_type(a)}")


def serialize(a: Type) -> str:
    """Fully parenthesized text, used to break ties in the canonical order."""
    if isinstance(a, Zero):
        return "0"
    if isinstance(a, One):
        return "1"
    if isinstance(a, Sum):
        return f"({serialize(a.left)}+{serialize(a.right)})"
    if isinstance(a, Prod):
        return f"({serialize(a.left)}*{serialize(a.right)})"
    if isinstance(a, Arrow):
        return f"({serialize(a.dom)}->{serialize(a.cod)})"
    if isinstance(a, Var):
        return f"var[{serialize(a.content)}]"
    raise ValueError(f"cannot serialize {a!r}")


def order_key(a: Type) -> tuple[int, str]:
    """Operands of sums and products are sorted by decreasing measure, then text.

    Putting heavier operands first is what makes every sorting step
    non-increasing for the measure.
    """
    return (-measure(a), serialize(a))


# --------------------------------------------------------------- canonical types


class CanonicalType:
    __slots__ = ()

    def __str__(self) -> str:
        return show_type(embed(self))

    def __repr__(self) -> str:
        return f"<canonical {self}>"


@dataclass(frozen=True, repr=False)
class CZero(CanonicalType):
    pass


@dataclass(frozen=True, repr=False)
class COne(CanonicalType):
    pass


@dataclass(frozen=True, repr=False)
class CSum(CanonicalType):
    items: tuple[CanonicalType, ...]


@dataclass(frozen=True, repr=False)
class CProd(CanonicalType):
    items: tuple[CanonicalType, ...]


@dataclass(frozen=True, repr=False)
class CArrow(CanonicalType):
    dom: CanonicalType
    cod: CanonicalType


def embed(c: CanonicalType) -> Type:
    """The ordinary type a canonical form stands for (chains nest to the left)."""
    if isinstance(c, CZero):
        return ZERO
    if isinstance(c, COne):
        return ONE
    if isinstance(c, (CSum, CProd)):
        ctor = Sum if isinstance(c, CSum) else Prod
        parts = [embed(i) for i in c.items]
        out = parts[0]
        for p in parts[1:]:
            out = ctor(out, p)
        return out
    if isinstance(c, CArrow):
        return Arrow(embed(c.dom), embed(c.cod))
    raise TypeError(f"not a canonical type: {c!r}")


def chain(a: Type, ctor) -> list[Type]:
    """Operands of a left-nested chain built with ``ctor``."""
    items = []
    while isinstance(a, ctor):
        items.append(a.right)
        a = a.left
    items.append(a)
    return items[::-1]


def build_chain(items: list[Type], ctor) -> Type:
    out = items[0]
    for i in items[1:]:
        out = ctor(out, i)
    return out


def from_type(a: Type) -> CanonicalType:
    """Read a type that is already in normal form as a CanonicalType."""
    if isinstance(a, Zero):
        return CZero()
    if isinstance(a, One):
        return COne()
    if isinstance(a, Sum):
        return CSum(tuple(from_type(i) for i in chain(a, Sum)))
    if isinstance(a, Prod):
        return CProd(tuple(from_type(i) for i in chain(a, Prod)))
    if isinstance(a, Arrow):
        return CArrow(from_type(a.dom), from_type(a.cod))
    raise ValueError(f"not in normal form: {show_type(a)}")


@dataclass(frozen=True)
class GrammarCheck:
    ok: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.ok


def grammar_check(c: CanonicalType) -> GrammarCheck:
    """Check every production of the canonical grammar, plus sortedness and flatness."""
    try:
        if not isinstance(c, (CZero, COne)):
            _check(c)
    except _Violation as v:
        return GrammarCheck(False, str(v))
    return GrammarCheck(True)


class _Violation(Exception):
    pass


_L = (CArrow, CProd, COne)
_R = (CArrow, CProd, CSum, COne)


def _check(c: CanonicalType):
    if isinstance(c, CZero):
        raise _Violation("0 occurs inside a larger type")
    if isinstance(c, COne):
        return
    if isinstance(c, (CSum, CProd)):
        name = "sum" if isinstance(c, CSum) else "product"
        if len(c.items) < 2:
            raise _Violation(f"{name} with {len(c.items)} operand(s)")
        allowed = _L if isinstance(c, CSum) else (CArrow,)
        for i in c.items:
            if not isinstance(i, allowed):
                raise _Violation(f"{name} operand {i} is not allowed there")
            _check(i)
        keys = [order_key(embed(i)) for i in c.items]
        if keys != sorted(keys):
            raise _Violation(f"{name} operands of {c} are not sorted")
        return
    if isinstance(c, CArrow):
        if not isinstance(c.dom, _L):
            raise _Violation(f"arrow domain {c.dom} is not allowed")
        if not isinstance(c.cod, _R):
            raise _Violation(f"arrow codomain {c.cod} is not allowed")
        _check(c.dom)
        _check(c.cod)
        return
    raise _Violation(f"unknown form {c!r}")


# --------------------------------------------------------------- normalization


@dataclass(frozen=True)
class Step:
    """One rewrite: at ``position`` in ``before``, ``lhs`` became ``rhs``."""

    rule: str
    position: tuple[int, ...]
    before: Type
    after: Type
    lhs: Type
    rhs: Type

    def __str__(self) -> str:
        where = ".".join(str(i) for i in self.position) or "root"
        return f"{self.rule:<16} at {where:<8} {show_type(self.lhs)}  ~>  {show_type(self.rhs)}"


RewriteTrace = tuple  # of Step

# rules on which the measure strictly decreases; the others only do not increase
STRICT_RULES = frozenset({
    "sum-zero-left", "sum-zero-right", "prod-unit-left", "prod-unit-right",
    "prod-zero-left", "prod-zero-right", "arrow-zero-dom", "arrow-zero-cod",
    "arrow-sum", "sum-assoc", "prod-assoc",
})
DISTRIBUTIVITY_RULES = frozenset({"distrib-left", "distrib-right"})


class _Normalizer:
    def __init__(self, a: Type):
        self.current = a
        self.steps: list[Step] = []

    def rewrite(self, rule: str, pos: tuple[int, ...], new: Type) -> Type:
        old = subterm(self.current, pos)
        after = replace_at(self.current, pos, new)
        self.steps.append(Step(rule, pos, self.current, after, old, new))
        self.current = after
        return new

    def norm(self, a: Type, pos: tuple[int, ...]) -> Type:
        if isinstance(a, (Zero, One)):
            return a
        if isinstance(a, Var):
            c = a.content
            expanded = self.rewrite("var-elim", pos, Prod(Arrow(c, ONE), Arrow(ONE, c)))
            return self.norm(expanded, pos)
        if isinstance(a, Sum):
            left = self.norm(a.left, pos + (0,))
            right = self.norm(a.right, pos + (1,))
            return self.sum(left, right, pos)
        if isinstance(a, Prod):
            left = self.norm(a.left, pos + (0,))
            right = self.norm(a.right, pos + (1,))
            return self.prod(left, right, pos)
        if isinstance(a, Arrow):
            dom = self.norm(a.dom, pos + (0,))
            cod = self.norm(a.cod, pos + (1,))
            return self.arrow(dom, cod, pos)
        if isinstance(a, Nat):
            raise ValueError("nat has no canonical form in this theory")
        raise TypeError(f"not a type: {a!r}")

    # smart constructors: arguments are canonical, so is the result
    def sum(self, a: Type, b: Type, pos) -> Type:
        if isinstance(a, Zero):
            return self.rewrite("sum-zero-left", pos, b)
        if isinstance(b, Zero):
            return self.rewrite("sum-zero-right", pos, a)
        self.flatten(Sum(a, b), pos, Sum, "sum-assoc")
        return self.sort(pos, Sum, "sum-sort")

    def prod(self, a: Type, b: Type, pos) -> Type:
        if isinstance(a, Zero):
            return self.rewrite("prod-zero-left", pos, ZERO)
        if isinstance(b, Zero):
            return self.rewrite("prod-zero-right", pos, ZERO)
        if isinstance(a, One):
            return self.rewrite("prod-unit-left", pos, b)
        if isinstance(b, One):
            return self.rewrite("prod-unit-right", pos, a)
        if isinstance(b, Sum):
            self.rewrite("distrib-left", pos, Sum(Prod(a, b.left), Prod(a, b.right)))
            left = self.prod(a, b.left, pos + (0,))
            right = self.prod(a, b.right, pos + (1,))
            return self.sum(left, right, pos)
        if isinstance(a, Sum):
            self.rewrite("distrib-right", pos, Sum(Prod(a.left, b), Prod(a.right, b)))
            left = self.prod(a.left, b, pos + (0,))
            right = self.prod(a.right, b, pos + (1,))
            return self.sum(left, right, pos)
        self.flatten(Prod(a, b), pos, Prod, "prod-assoc")
        return self.sort(pos, Prod, "prod-sort")

    def arrow(self, a: Type, b: Type, pos) -> Type:
        if isinstance(a, Zero):
            return self.rewrite("arrow-zero-dom", pos, ONE)
        if isinstance(b, Zero):
            return self.rewrite("arrow-zero-cod", pos, ONE)
        if isinstance(a, Sum):
            self.rewrite("arrow-sum", pos, Prod(Arrow(a.left, b), Arrow(a.right, b)))
            left = self.arrow(a.left, b, pos + (0,))
            right = self.arrow(a.right, b, pos + (1,))
            return self.prod(left, right, pos)
        return Arrow(a, b)

    def flatten(self, a: Type, pos, ctor, rule: str) -> Type:
        """Reassociate ``a`` (at ``pos``) into a left-nested chain."""
        while isinstance(a.right, ctor):
            a = self.rewrite(rule, pos, ctor(ctor(a.left, a.right.left), a.right.right))
        if isinstance(a.left, ctor):
            self.flatten(a.left, pos + (0,), ctor, rule)
        return subterm(self.current, pos)

    def sort(self, pos, ctor, rule: str) -> Type:
        a = subterm(self.current, pos)
        items = chain(a, ctor)
        ordered = sorted(items, key=order_key)
        if ordered == items:
            return a
        return self.rewrite(rule, pos, build_chain(ordered, ctor))


def normalize(a: Type) -> tuple[Type, RewriteTrace]:
    """Normal form of ``a`` as an ordinary type, with the rewrite trace leading to it."""
    n = _Normalizer(a)
    result = n.norm(a, ())
    assert result == n.current, "normalizer lost track of the current type"
    return result, tuple(n.steps)


def canonical_form(a: Type) -> tuple[CanonicalType, RewriteTrace]:
    result, steps = normalize(a)
    return from_type(result), steps


def decide_iso_syntactic(a: Type, b: Type) -> bool:
    return canonical_form(a)[0] == canonical_form(b)[0]


def show_trace(steps: RewriteTrace) -> str:
    if not steps:
        return "(already canonical)"
    lines = []
    for s in steps:
        lines.append(f"{s}\n    {show_type(s.before)}\n ~> {show_type(s.after)}")
    return "\n".join(lines)


__all__ = [
    "CArrow", "COne", "CProd", "CSum", "CZero", "CanonicalType", "DISTRIBUTIVITY_RULES",
    "GrammarCheck", "RewriteTrace", "STRICT_RULES", "Step", "VarPresent", "canonical_form",
    "decide_iso_syntactic", "embed", "from_type", "grammar_check", "measure", "normalize",
    "order_key", "serialize", "show_trace",
]
