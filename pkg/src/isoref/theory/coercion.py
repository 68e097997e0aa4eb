"""Coercions between isomorphic types, read off the rewrite traces.

Every rewrite rule comes with a pair of open terms ``x : lhs |- M : rhs``
and ``y : rhs |- N : lhs`` that are mutually inverse up to observational
equivalence.  A step deep inside a type is lifted through the surrounding
type constructors by congruence; steps are chained by composition.  The
coercion from ``A`` to ``B`` goes forward along the trace of ``A`` to the
shared canonical form and backward along the trace of ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax import terms as T
from ..syntax.printer import show_term
from ..syntax.types import ONE, Arrow, Prod, Sum, Type, Var, show_type
from .canonical import Step, build_chain, canonical_form, chain


class NotIsomorphicTypes(ValueError):
    pass


@dataclass(frozen=True)
class Coercion:
    """``var : src |- body : dst``."""

    src: Type
    dst: Type
    var: str
    body: T.Term

    @classmethod
    def identity(cls, a: Type) -> "Coercion":
        x = T.fresh("x")
        return cls(a, a, x, T.FVar(x))

    def is_identity(self) -> bool:
        return self.body == T.FVar(self.var)

    def at(self, arg: T.Term) -> T.Term:
        """The body with ``arg`` for the variable (bound by a let unless it is a variable)."""
        if isinstance(arg, T.FVar):
            return T.subst_free(self.body, self.var, arg)
        return T.let(self.var, arg, self.body, self.src)

    def then(self, other: "Coercion") -> "Coercion":
        """``other`` after ``self``, as ``(fun y. other) self``."""
        if self.dst != other.src:
            raise ValueError(f"cannot compose {show_type(self.dst)} with {show_type(other.src)}")
        if self.is_identity():
            return Coercion(self.src, other.dst, other.var, other.body)
        if other.is_identity():
            return Coercion(self.src, other.dst, self.var, self.body)
        return Coercion(self.src, other.dst, self.var, other.at(self.body))

    def as_lambda(self) -> T.Lam:
        return T.lam(self.var, self.src, self.body)

    def named(self, name: str) -> "Coercion":
        """The same coercion with its free variable called ``name``."""
        return Coercion(self.src, self.dst, name, T.subst_free(self.body, self.var, T.FVar(name)))

    def show(self, name: str | None = None) -> str:
        c = self.named(name) if name else self
        return f"{c.var} : {show_type(c.src)} |- {show_term(c.body)} : {show_type(c.dst)}"


@dataclass(frozen=True)
class CoercionPair:
    forward: Coercion
    backward: Coercion

    def show(self) -> str:
        return f"forward:  {self.forward.show('x')}\nbackward: {self.backward.show('y')}"


# --------------------------------------------------------------- chains


def _case_chain(scrut: T.Term, items: list[Type], branch) -> T.Term:
    """Case analysis of a left-nested sum; ``branch(k, v)`` handles summand ``k`` bound to ``v``."""
    if len(items) == 1:
        return branch(0, scrut)
    p, last = T.fresh("s"), T.fresh("s")
    return T.case(
        scrut,
        (p, _case_chain(T.FVar(p), items[:-1], branch)),
        (last, branch(len(items) - 1, T.FVar(last))),
    )


def _inj_chain(items: list[Type], k: int, m: T.Term) -> T.Term:
    if len(items) == 1:
        return m
    if k == len(items) - 1:
        return T.Inj(2, m, build_chain(items[:-1], Sum))
    return T.Inj(1, _inj_chain(items[:-1], k, m), items[-1])


def _proj_chain(x: T.Term, n: int, k: int) -> T.Term:
    if n == 1:
        return x
    if k == n - 1:
        return T.Proj(2, x)
    return _proj_chain(T.Proj(1, x), n - 1, k)


def _tuple_chain(parts: list[T.Term]) -> T.Term:
    out = parts[0]
    for p in parts[1:]:
        out = T.Pair(out, p)
    return out


def _permutation(before: list[Type], after: list[Type]) -> list[int]:
    """``perm[i]`` is the position in ``after`` of operand ``i`` of ``before``."""
    used: set[int] = set()
    perm = []
    for item in before:
        j = next(j for j, x in enumerate(after) if x == item and j not in used)
        used.add(j)
        perm.append(j)
    return perm


def _sum_perm(before: list[Type], after: list[Type], x: str) -> T.Term:
    perm = _permutation(before, after)
    return _case_chain(T.FVar(x), before, lambda k, v: _inj_chain(after, perm[k], v))


def _prod_perm(before: list[Type], after: list[Type], x: str) -> T.Term:
    perm = _permutation(before, after)
    source = {j: i for i, j in enumerate(perm)}
    return _tuple_chain([_proj_chain(T.FVar(x), len(before), source[j]) for j in range(len(after))])


# --------------------------------------------------------------- local witnesses


def _local(rule: str, lhs: Type, rhs: Type) -> tuple[T.Term, T.Term, str, str]:
    """Bodies of ``x : lhs |- M : rhs`` and ``y : rhs |- N : lhs``, with the names x, y."""
    x, y = T.fresh("x"), T.fresh("y")
    X, Y = T.FVar(x), T.FVar(y)
    fwd, bwd = _witness(rule, lhs, rhs, X, Y, x, y)
    return fwd, bwd, x, y


def _witness(rule, lhs, rhs, X, Y, x, y):
    if rule == "var-elim":
        a = lhs.content
        v, u = T.fresh("a"), T.fresh("u")
        fwd = T.Pair(T.lam(v, a, T.Assign(X, T.FVar(v))), T.lam(u, ONE, T.Deref(X)))
        return fwd, T.MkVar(T.Proj(1, Y), T.Proj(2, Y))
    if rule == "sum-zero-left":
        z, v = T.fresh("z"), T.fresh("a")
        fwd = T.case(X, (z, T.bottom(rhs)), (v, T.FVar(v)))
        return fwd, T.Inj(2, Y, lhs.left)
    if rule == "sum-zero-right":
        z, v = T.fresh("z"), T.fresh("a")
        fwd = T.case(X, (v, T.FVar(v)), (z, T.bottom(rhs)))
        return fwd, T.Inj(1, Y, lhs.right)
    if rule == "prod-unit-left":
        return T.Proj(2, X), T.Pair(T.UNIT, Y)
    if rule == "prod-unit-right":
        return T.Proj(1, X), T.Pair(Y, T.UNIT)
    if rule == "prod-zero-left":
        return T.Proj(1, X), T.bottom(lhs)
    if rule == "prod-zero-right":
        return T.Proj(2, X), T.bottom(lhs)
    if rule == "distrib-left":
        a, b, c = lhs.left, lhs.right.left, lhs.right.right
        p, q = T.fresh("b"), T.fresh("c")
        fwd = T.case(
            T.Proj(2, X),
            (p, T.Inj(1, T.Pair(T.Proj(1, X), T.FVar(p)), Prod(a, c))),
            (q, T.Inj(2, T.Pair(T.Proj(1, X), T.FVar(q)), Prod(a, b))),
        )
        p, q = T.fresh("p"), T.fresh("p")
        bwd = T.case(
            Y,
            (p, T.Pair(T.Proj(1, T.FVar(p)), T.Inj(1, T.Proj(2, T.FVar(p)), c))),
            (q, T.Pair(T.Proj(1, T.FVar(q)), T.Inj(2, T.Proj(2, T.FVar(q)), b))),
        )
        return fwd, bwd
    if rule == "distrib-right":
        a, b, c = lhs.left.left, lhs.left.right, lhs.right
        p, q = T.fresh("a"), T.fresh("b")
        fwd = T.case(
            T.Proj(1, X),
            (p, T.Inj(1, T.Pair(T.FVar(p), T.Proj(2, X)), Prod(b, c))),
            (q, T.Inj(2, T.Pair(T.FVar(q), T.Proj(2, X)), Prod(a, c))),
        )
        p, q = T.fresh("p"), T.fresh("p")
        bwd = T.case(
            Y,
            (p, T.Pair(T.Inj(1, T.Proj(1, T.FVar(p)), b), T.Proj(2, T.FVar(p)))),
            (q, T.Pair(T.Inj(2, T.Proj(1, T.FVar(q)), a), T.Proj(2, T.FVar(q)))),
        )
        return fwd, bwd
    if rule == "arrow-sum":
        a, b, c = lhs.dom.left, lhs.dom.right, lhs.cod
        p, q = T.fresh("a"), T.fresh("b")
        fwd = T.Pair(
            T.lam(p, a, T.App(X, T.Inj(1, T.FVar(p), b))),
            T.lam(q, b, T.App(X, T.Inj(2, T.FVar(q), a))),
        )
        s, p, q = T.fresh("s"), T.fresh("a"), T.fresh("b")
        bwd = T.lam(s, lhs.dom, T.case(
            T.FVar(s),
            (p, T.App(T.Proj(1, Y), T.FVar(p))),
            (q, T.App(T.Proj(2, Y), T.FVar(q))),
        ))
        return fwd, bwd
    if rule == "arrow-zero-dom":
        z = T.fresh("z")
        return T.UNIT, T.lam(z, lhs.dom, T.bottom(lhs.cod))
    if rule == "arrow-zero-cod":
        v = T.fresh("a")
        return T.UNIT, T.lam(v, lhs.dom, T.bottom(lhs.cod))
    if rule == "sum-assoc":
        a, b, c = lhs.left, lhs.right.left, lhs.right.right
        p, s, q, r = T.fresh("a"), T.fresh("s"), T.fresh("b"), T.fresh("c")
        fwd = T.case(
            X,
            (p, T.Inj(1, T.Inj(1, T.FVar(p), b), c)),
            (s, T.case(
                T.FVar(s),
                (q, T.Inj(1, T.Inj(2, T.FVar(q), a), c)),
                (r, T.Inj(2, T.FVar(r), Sum(a, b))),
            )),
        )
        s, p, q, r = T.fresh("s"), T.fresh("a"), T.fresh("b"), T.fresh("c")
        bwd = T.case(
            Y,
            (s, T.case(
                T.FVar(s),
                (p, T.Inj(1, T.FVar(p), Sum(b, c))),
                (q, T.Inj(2, T.Inj(1, T.FVar(q), c), a)),
            )),
            (r, T.Inj(2, T.Inj(2, T.FVar(r), b), a)),
        )
        return fwd, bwd
    if rule == "prod-assoc":
        fwd = T.Pair(T.Pair(T.Proj(1, X), T.Proj(1, T.Proj(2, X))), T.Proj(2, T.Proj(2, X)))
        bwd = T.Pair(T.Proj(1, T.Proj(1, Y)), T.Pair(T.Proj(2, T.Proj(1, Y)), T.Proj(2, Y)))
        return fwd, bwd
    if rule == "sum-sort":
        before, after = chain(lhs, Sum), chain(rhs, Sum)
        return _sum_perm(before, after, x), _sum_perm(after, before, y)
    if rule == "prod-sort":
        before, after = chain(lhs, Prod), chain(rhs, Prod)
        return _prod_perm(before, after, x), _prod_perm(after, before, y)
    raise ValueError(f"no witness for rule {rule}")


# --------------------------------------------------------------- congruence


def _lift(whole: Type, whole_after: Type, pos: tuple[int, ...], fwd: Coercion, bwd: Coercion):
    """Extend a pair of coercions at ``pos`` to the whole type."""
    if not pos:
        return fwd, bwd
    i = pos[0]
    kids, kids_after = _kids(whole), _kids(whole_after)
    f, b = _lift(kids[i], kids_after[i], pos[1:], fwd, bwd)
    return _congruence(whole, whole_after, i, f, b), _congruence(whole_after, whole, i, b, f)


def _kids(a: Type) -> tuple[Type, ...]:
    if isinstance(a, (Sum, Prod)):
        return (a.left, a.right)
    if isinstance(a, Arrow):
        return (a.dom, a.cod)
    if isinstance(a, Var):
        return (a.content,)
    raise ValueError(f"{show_type(a)} has no components")


def _congruence(src: Type, dst: Type, i: int, f: Coercion, b: Coercion) -> Coercion:
    """From ``src`` to ``dst``, which differ in component ``i``; ``f`` maps that component forward, ``b`` back."""
    z = T.fresh("z")
    Z = T.FVar(z)
    if isinstance(src, Sum):
        p, q = T.fresh("l"), T.fresh("r")
        if i == 0:
            body = T.case(Z, (p, T.Inj(1, f.at(T.FVar(p)), dst.right)), (q, T.Inj(2, T.FVar(q), dst.left)))
        else:
            body = T.case(Z, (p, T.Inj(1, T.FVar(p), dst.right)), (q, T.Inj(2, f.at(T.FVar(q)), dst.left)))
    elif isinstance(src, Prod):
        if i == 0:
            body = T.Pair(f.at(T.Proj(1, Z)), T.Proj(2, Z))
        else:
            body = T.Pair(T.Proj(1, Z), f.at(T.Proj(2, Z)))
    elif isinstance(src, Arrow):
        v = T.fresh("a")
        if i == 0:
            body = T.lam(v, dst.dom, T.App(Z, b.at(T.FVar(v))))
        else:
            body = T.lam(v, src.dom, f.at(T.App(Z, T.FVar(v))))
    elif isinstance(src, Var):
        v, u = T.fresh("a"), T.fresh("u")
        body = T.MkVar(
            T.lam(v, dst.content, T.Assign(Z, b.at(T.FVar(v)))),
            T.lam(u, ONE, f.at(T.Deref(Z))),
        )
    else:
        raise ValueError(f"no congruence for {show_type(src)}")
    return Coercion(src, dst, z, body)


def step_coercions(step: Step) -> tuple[Coercion, Coercion]:
    """Forward and backward coercions for one rewrite step on the whole type."""
    fwd, bwd, x, y = _local(step.rule, step.lhs, step.rhs)
    return _lift(
        step.before, step.after, step.position,
        Coercion(step.lhs, step.rhs, x, fwd), Coercion(step.rhs, step.lhs, y, bwd),
    )


def trace_coercions(a: Type, steps) -> tuple[Coercion, Coercion]:
    """Coercions between ``a`` and the end of its trace, in both directions."""
    forward = Coercion.identity(a)
    backward = Coercion.identity(a)
    for s in steps:
        f, b = step_coercions(s)
        forward = forward.then(f)
        backward = b.then(backward)
    return forward, backward


def synthesize_coercion(a: Type, b: Type) -> CoercionPair:
    """Mutually inverse ``x : a |- M : b`` and ``y : b |- N : a``.

    Raises NotIsomorphicTypes when the canonical forms differ.
    """
    if a == b:
        return CoercionPair(Coercion.identity(a).named("x"), Coercion.identity(a).named("y"))
    ca, sa = canonical_form(a)
    cb, sb = canonical_form(b)
    if ca != cb:
        raise NotIsomorphicTypes(f"{show_type(a)} and {show_type(b)} have different canonical forms: {ca} vs {cb}")
    fa, ba = trace_coercions(a, sa)
    fb, bb = trace_coercions(b, sb)
    return CoercionPair(fa.then(bb).named("x"), fb.then(ba).named("y"))


__all__ = [
    "Coercion", "CoercionPair", "NotIsomorphicTypes", "step_coercions", "synthesize_coercion",
    "trace_coercions",
]
