"""Elimination of bad variables.

A reference of type ``var[A]`` is represented after translation either as a
genuine cell or as the pair of methods a ``mkvar`` was built from::

    var[A]      ~>  gvar[A'] + (A' -> 1) * (1 -> A')
    new         ~>  inl newg
    !M          ~>  case M' of inl c => getg c | inr m => (snd m) ()
    M := N      ~>  case M' of inl c => setg c N' | inr m => (fst m) N'
    mkvar M N   ~>  inr (M', N')

``translate`` works on the extended language with good variables; ``merge``
turns good variables back into ordinary ones; ``eliminate_mkvar`` is their
composite, a source-to-source pass on ordinary programs.
"""

from __future__ import annotations

from . import terms as T
from .types import ONE, Arrow, GVar, Prod, Sum, Type, Var, children, rebuild


def translate_type(a: Type) -> Type:
    if isinstance(a, Var):
        inner = translate_type(a.content)
        return Sum(GVar(inner), _methods(inner))
    if isinstance(a, GVar):
        return a
    return rebuild(a, tuple(translate_type(c) for c in children(a)))


def _methods(a: Type) -> Type:
    return Prod(Arrow(a, ONE), Arrow(ONE, a))


def merge_type(a: Type) -> Type:
    if isinstance(a, GVar):
        return Var(merge_type(a.content))
    return rebuild(a, tuple(merge_type(c) for c in children(a)))


def translate(m: T.Term, ctx=None) -> T.Term:
    """The mkvar-eliminating translation on the extended language.

    ``ctx`` types the free variables and locations of ``m`` (source types);
    it is needed to annotate the injections the translation introduces.
    """
    return _Translator(ctx).go(m, [])


def merge(m: T.Term) -> T.Term:
    """Turn good variables back into ordinary references."""
    if isinstance(m, T.Lam):
        ty = None if m.ty is None else merge_type(m.ty)
        return T.Lam(ty, merge(m.body), m.hint)
    if isinstance(m, T.Inj):
        return T.Inj(m.index, merge(m.body), merge_type(m.other))
    if isinstance(m, T.New):
        return T.New(merge_type(m.ty))
    if isinstance(m, T.Loc):
        return T.Loc(m.id)
    if isinstance(m, T.Deref):
        return T.Deref(merge(m.ref))
    if isinstance(m, T.Assign):
        return T.Assign(merge(m.ref), merge(m.value))
    kids = T.subterms(m)
    if not kids:
        return m
    return T.with_subterms(m, tuple(merge(k) for k in kids))


def translate_context(ctx):
    from .typing import TypingContext

    return TypingContext(
        tuple((n, merge_type(translate_type(t))) for n, t in ctx.vars),
        tuple((i, merge_type(translate_type(t))) for i, t in ctx.locs),
    )


def eliminate_mkvar(m: T.Term, ctx=None) -> tuple[T.Term, "TypeTranslation"]:
    """Remove every mkvar from an ordinary program.

    Returns the translated term and the type translation it was typed
    against, which sends ``var[A]`` to ``var[A'] + (A' -> 1) * (1 -> A')``.
    """
    return merge(translate(m, ctx)), TypeTranslation()


class TypeTranslation:
    """The type-level part of :func:`eliminate_mkvar`."""

    def __call__(self, a: Type) -> Type:
        return merge_type(translate_type(a))

    def __repr__(self) -> str:
        return "TypeTranslation(var[A] -> var[A'] + (A' -> 1) * (1 -> A'))"


class _Translator:
    """Type-aware walk: mkvar needs the content type for its injection."""

    def __init__(self, ctx=None):
        from .typing import EMPTY

        self.ctx = ctx or EMPTY

    def content(self, m: T.Term, env: list[Type]) -> Type:
        from .typing import _Checker

        ty = _Checker(self.ctx).check(m, list(env))
        return ty.cod

    def go(self, m: T.Term, env: list[Type]) -> T.Term:
        """``env`` holds source types of enclosing binders (innermost last)."""
        if isinstance(m, T.Lam):
            ty = None if m.ty is None else translate_type(m.ty)
            return T.Lam(ty, self.bind(m.ty, m.body, env), m.hint)
        if isinstance(m, T.App) and isinstance(m.fn, T.Lam) and m.fn.ty is None:
            from .typing import _Checker

            arg_ty = _Checker(self.ctx).check(m.arg, list(env))
            fn = T.Lam(None, self.bind(arg_ty, m.fn.body, env), m.fn.hint)
            return T.App(fn, self.go(m.arg, env))
        if isinstance(m, T.Case):
            from .typing import _Checker

            st = _Checker(self.ctx).check(m.scrutinee, list(env))
            return T.Case(
                self.go(m.scrutinee, env),
                self.bind(st.left, m.left, env),
                self.bind(st.right, m.right, env),
                m.left_hint,
                m.right_hint,
            )
        if isinstance(m, T.Inj):
            return T.Inj(m.index, self.go(m.body, env), translate_type(m.other))
        if isinstance(m, T.New):
            if m.good:
                return m
            a = translate_type(m.ty)
            return T.Inj(1, T.New(a, good=True), _methods(a))
        if isinstance(m, T.Loc):
            if m.good:
                return m
            a = translate_type(self.ctx.loc_type(m.id))
            return T.Inj(1, T.Loc(m.id, good=True), _methods(a))
        if isinstance(m, T.Deref) and not m.good:
            left = T.Deref(T.BVar(0, "c"), good=True)
            right = T.App(T.Proj(2, T.BVar(0, "m")), T.UNIT)
            return T.Case(self.go(m.ref, env), left, right, "c", "m")
        if isinstance(m, T.Assign) and not m.good:
            value = T.shift(self.go(m.value, env))
            left = T.Assign(T.BVar(0, "c"), value, good=True)
            right = T.App(T.Proj(1, T.BVar(0, "m")), value)
            return T.Case(self.go(m.ref, env), left, right, "c", "m")
        if isinstance(m, T.MkVar):
            a = translate_type(self.content(m.read, env))
            return T.Inj(2, T.Pair(self.go(m.write, env), self.go(m.read, env)), GVar(a))
        kids = T.subterms(m)
        if not kids:
            return m
        return T.with_subterms(m, tuple(self.go(k, env) for k in kids))

    def bind(self, ty: Type, body: T.Term, env: list[Type]) -> T.Term:
        env.append(ty)
        try:
            return self.go(body, env)
        finally:
            env.pop()
