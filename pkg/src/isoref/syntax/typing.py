"""Syntax-directed typechecking."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .types import BOOL, NAT, ONE, Arrow, GVar, Nat, Prod, Sum, Type, Var


class IllTyped(TypeError):
    """Raised with the name of the typing rule that failed and the offending subterm."""

    def __init__(self, rule: str, term: T.Term, message: str):
        self.rule = rule
        self.term = term
        super().__init__(f"[{rule}] {message} in {_short(term)}")


def _short(t: T.Term, limit: int = 80) -> str:
    text = str(t)
    return text if len(text) <= limit else text[: limit - 3] + "..."


@dataclass(frozen=True)
class TypingContext:
    """Ordered variable typing plus a location typing (location id -> content type)."""

    vars: tuple[tuple[str, Type], ...] = ()
    locs: tuple[tuple[int, Type], ...] = ()
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [n for n, _ in self.vars]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable in context: {names}")
        ids = [i for i, _ in self.locs]
        if len(set(ids)) != len(ids):
            raise ValueError("location typing is not functional")
        object.__setattr__(self, "_lookup", (dict(self.vars), dict(self.locs)))

    @classmethod
    def of(cls, variables: dict | None = None, locations: dict | None = None) -> "TypingContext":
        return cls(tuple((variables or {}).items()), tuple((locations or {}).items()))

    def var_type(self, name: str) -> Type | None:
        return self._lookup[0].get(name)

    def loc_type(self, ident: int) -> Type | None:
        return self._lookup[1].get(ident)

    def extend(self, name: str, ty: Type) -> "TypingContext":
        return TypingContext(tuple((n, t) for n, t in self.vars if n != name) + ((name, ty),), self.locs)


EMPTY = TypingContext()


def typecheck(ctx: TypingContext, m: T.Term) -> Type:
    return _Checker(ctx).check(m, [])


class _Checker:
    def __init__(self, ctx: TypingContext):
        self.ctx = ctx

    def check(self, m: T.Term, env: list[Type]) -> Type:
        """``env[-1]`` is the type of BVar 0."""
        c = self.check
        if isinstance(m, T.BVar):
            if m.index >= len(env):
                raise IllTyped("var", m, "dangling bound variable")
            return env[-1 - m.index]
        if isinstance(m, T.FVar):
            ty = self.ctx.var_type(m.name)
            if ty is None:
                raise IllTyped("var", m, f"unbound variable {m.name}")
            return ty
        if isinstance(m, T.Unit):
            return ONE
        if isinstance(m, T.Lam):
            if m.ty is None:
                raise IllTyped("lam", m, "abstraction without a domain annotation")
            return Arrow(m.ty, self.under(m.ty, m.body, env))
        if isinstance(m, T.App):
            if isinstance(m.fn, T.Lam) and m.fn.ty is None:
                arg = c(m.arg, env)
                return self.under(arg, m.fn.body, env)
            fn = c(m.fn, env)
            if not isinstance(fn, Arrow):
                raise IllTyped("app", m, f"applying a non-function of type {fn}")
            arg = c(m.arg, env)
            if arg != fn.dom:
                raise IllTyped("app", m, f"argument has type {arg}, expected {fn.dom}")
            return fn.cod
        if isinstance(m, T.Pair):
            return Prod(c(m.left, env), c(m.right, env))
        if isinstance(m, T.Proj):
            ty = c(m.body, env)
            if not isinstance(ty, Prod):
                raise IllTyped(f"proj{m.index}", m, f"projection of non-product type {ty}")
            return ty.left if m.index == 1 else ty.right
        if isinstance(m, T.Inj):
            ty = c(m.body, env)
            return Sum(ty, m.other) if m.index == 1 else Sum(m.other, ty)
        if isinstance(m, T.Case):
            ty = c(m.scrutinee, env)
            if not isinstance(ty, Sum):
                raise IllTyped("case", m, f"case analysis on non-sum type {ty}")
            left = self.under(ty.left, m.left, env)
            right = self.under(ty.right, m.right, env)
            if left != right:
                raise IllTyped("case", m, f"branches have types {left} and {right}")
            return left
        if isinstance(m, T.New):
            return GVar(m.ty) if m.good else Var(m.ty)
        if isinstance(m, T.Loc):
            ty = self.ctx.loc_type(m.id)
            if ty is None:
                raise IllTyped("loc", m, f"untyped location @{m.id}")
            return GVar(ty) if m.good else Var(ty)
        if isinstance(m, T.Deref):
            content = self.ref_content(m, c(m.ref, env), m.good, "deref")
            return content
        if isinstance(m, T.Assign):
            content = self.ref_content(m, c(m.ref, env), m.good, "assign")
            val = c(m.value, env)
            if val != content:
                raise IllTyped("assign", m, f"storing {val} into a reference of {content}")
            return ONE
        if isinstance(m, T.MkVar):
            w, r = c(m.write, env), c(m.read, env)
            if not (isinstance(w, Arrow) and w.cod == ONE):
                raise IllTyped("mkvar", m, f"write method has type {w}, expected A -> 1")
            if not (isinstance(r, Arrow) and r.dom == ONE):
                raise IllTyped("mkvar", m, f"read method has type {r}, expected 1 -> A")
            if w.dom != r.cod:
                raise IllTyped("mkvar", m, f"write takes {w.dom} but read returns {r.cod}")
            return Var(w.dom)
        if isinstance(m, T.Num):
            return NAT
        if isinstance(m, T.Prim):
            for side in (m.left, m.right):
                ty = c(side, env)
                if not isinstance(ty, Nat):
                    raise IllTyped("prim", m, f"operand of {m.op} has type {ty}, expected nat")
            return BOOL if m.op in ("=", "<") else NAT
        raise IllTyped("term", m, "unknown term constructor")

    def under(self, ty: Type, body: T.Term, env: list[Type]) -> Type:
        env.append(ty)
        try:
            return self.check(body, env)
        finally:
            env.pop()

    @staticmethod
    def ref_content(m: T.Term, ty: Type, good: bool, rule: str) -> Type:
        want = GVar if good else Var
        if not isinstance(ty, want):
            kind = "gvar" if good else "var"
            raise IllTyped(rule, m, f"expected a {kind}[_] reference, got {ty}")
        return ty.content
