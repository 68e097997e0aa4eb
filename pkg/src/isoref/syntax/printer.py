"""Pretty-printer: fully parenthesized core terms that parse back to themselves."""

from __future__ import annotations

from . import terms as T
from .types import show_type


def _base(hint: str) -> str:
    base = hint.split("%")[0].rstrip("'")
    if not base or not (base[0].isalpha() or base[0] == "_") or base in _RESERVED:
        return "x"
    return base


def _reserved():
    from .parser import KEYWORDS

    return KEYWORDS


_RESERVED: set[str] = set()


def show_term(t: T.Term) -> str:
    if not _RESERVED:
        _RESERVED.update(_reserved())
    taken = set(T.free_vars(t))
    return _show(t, [], taken)


def _pick(hint: str, scope: list[str], taken: set[str], used: bool) -> str:
    base = _base(hint)
    if not used and base == "_" and "_" not in taken:
        return "_"
    if base == "_":
        base = "x"
    avoid = taken | set(scope)
    name, n = base, 0
    while name in avoid:
        n += 1
        name = f"{base}{n}"
    return name


def _uses_index0(body: T.Term) -> bool:
    def go(t, depth):
        if isinstance(t, T.BVar):
            return t.index == depth
        return any(go(k, depth + b) for k, b in zip(T.subterms(t), T.binders(t)))

    return go(body, 0)


def _show(t: T.Term, scope: list[str], taken: set[str]) -> str:
    """``scope[-1]`` is the name of BVar 0."""
    s = lambda u: _show(u, scope, taken)  # noqa: E731

    def under(hint: str, body: T.Term) -> tuple[str, str]:
        name = _pick(hint, scope, taken, _uses_index0(body))
        scope.append(name)
        try:
            return name, _show(body, scope, taken)
        finally:
            scope.pop()

    if isinstance(t, T.BVar):
        if t.index >= len(scope):
            return f"<dangling {t.index}>"
        return scope[-1 - t.index]
    if isinstance(t, T.FVar):
        return t.name
    if isinstance(t, T.Lam):
        name, body = under(t.hint, t.body)
        if t.ty is None:
            return f"(\\{name}. {body})"
        return f"(\\{name}:{show_type(t.ty)}. {body})"
    if isinstance(t, T.App):
        return f"({s(t.fn)} {s(t.arg)})"
    if isinstance(t, T.Pair):
        return f"({s(t.left)}, {s(t.right)})"
    if isinstance(t, T.Proj):
        return f"({'fst' if t.index == 1 else 'snd'} {s(t.body)})"
    if isinstance(t, T.Unit):
        return "()"
    if isinstance(t, T.Inj):
        tag = "inl" if t.index == 1 else "inr"
        return f"({tag}[{show_type(t.other)}] {s(t.body)})"
    if isinstance(t, T.Case):
        x, left = under(t.left_hint, t.left)
        y, right = under(t.right_hint, t.right)
        return f"(case {s(t.scrutinee)} of inl {x} => {left} | inr {y} => {right})"
    if isinstance(t, T.New):
        return f"new{'g' if t.good else ''}[{show_type(t.ty)}]"
    if isinstance(t, T.Assign):
        if t.good:
            return f"(setg {s(t.ref)} {s(t.value)})"
        return f"({s(t.ref)} := {s(t.value)})"
    if isinstance(t, T.Deref):
        if t.good:
            return f"(getg {s(t.ref)})"
        return f"(!{s(t.ref)})"
    if isinstance(t, T.MkVar):
        return f"(mkvar {s(t.write)} {s(t.read)})"
    if isinstance(t, T.Loc):
        return f"@{t.id}{'g' if t.good else ''}"
    if isinstance(t, T.Num):
        return str(t.value)
    if isinstance(t, T.Prim):
        return f"({s(t.left)} {t.op} {s(t.right)})"
    raise TypeError(f"not a term: {t!r}")
