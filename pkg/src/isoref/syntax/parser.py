"""Recursive-descent parser for types and terms.

Types::

    A ::= A -> A | A + A | A * A | 0 | 1 | bool | nat | var[A] | (A)

with ``*`` binding tighter than ``+`` and ``+`` tighter than ``->``; ``->``
associates to the right, ``+`` and ``*`` to the left.  ``→`` and ``×`` are
accepted for ``->`` and ``*``.

Terms (loosest first)::

    M ::= M; M                                 sequencing
        | \\x:A. M  |  \\x. M                    abstraction (also λ)
        | let x [: A] = M in M  |  let (x, y) = M in M
        | new x : A [:= M], ... in M
        | if M then M else M
        | case M of inl x => M | inr y => M
        | M := M
        | M = M | M < M | M + M | M - M | M * M | M div M | M mod M   (nat only)
        | M M                                  application
        | fst M | snd M | not M | inl[B] M | inr[A] M | mkvar M M
        | !M | x | () | (M) | (M, M) | true | false | new[A] | bot[A] | Y[A -> B]
        | @n | n                               location, numeral (nat only)

All sugar is removed here; the result is a core :class:`~.terms.Term`.
"""

from __future__ import annotations

import re

from . import terms as T
from .types import BOOL, NAT, ONE, ZERO, Arrow, Prod, Sum, Type, Var


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<sym>->|→|=>|:=|\(|\)|\[|\]|,|;|\.|:|\+|\*|×|-|=|<|!|\||\\|λ)
  | (?P<loc>@\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "let", "in", "new", "if", "then", "else", "case", "of", "inl", "inr",
    "fst", "snd", "not", "mkvar", "true", "false", "bot", "Y", "var",
    "bool", "nat", "div", "mod", "fun",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind == "sym":
                value = {"→": "->", "×": "*", "λ": "\\"}.get(value, value)
            elif kind == "ident" and value in KEYWORDS:
                kind = "kw"
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, nat_enabled: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nat = nat_enabled

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, value: str, offset: int = 0) -> bool:
        kind, v, _ = self.toks[min(self.i + offset, len(self.toks) - 1)]
        return v == value and kind in ("sym", "kw")

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.tok[2] if pos is None else pos, self.text)

    def expect(self, value: str):
        if not self.peek(value):
            got = self.tok[1] or "end of input"
            self.error(f"expected {value!r}, got {got!r}")
        self.i += 1

    def accept(self, value: str) -> bool:
        if self.peek(value):
            self.i += 1
            return True
        return False

    def ident(self) -> str:
        kind, v, _ = self.tok
        if kind != "ident":
            self.error(f"expected identifier, got {v or 'end of input'!r}")
        self.i += 1
        return v

    def finish(self):
        if self.tok[0] != "eof":
            self.error(f"unexpected {self.tok[1]!r}")

    def need_nat(self):
        if not self.nat:
            self.error("nat extension is not enabled")

    # types
    def type_(self) -> Type:
        left = self.sum_type()
        if self.accept("->"):
            return Arrow(left, self.type_())
        return left

    def sum_type(self) -> Type:
        t = self.prod_type()
        while self.accept("+"):
            t = Sum(t, self.prod_type())
        return t

    def prod_type(self) -> Type:
        t = self.atom_type()
        while self.accept("*"):
            t = Prod(t, self.atom_type())
        return t

    def atom_type(self) -> Type:
        kind, v, pos = self.tok
        if kind == "num" and v in ("0", "1"):
            self.i += 1
            return ZERO if v == "0" else ONE
        if self.accept("bool"):
            return BOOL
        if self.peek("nat"):
            self.need_nat()
            self.i += 1
            return NAT
        if self.accept("var"):
            self.expect("[")
            t = self.type_()
            self.expect("]")
            return Var(t)
        if self.accept("("):
            t = self.type_()
            self.expect(")")
            return t
        self.error(f"expected a type, got {v or 'end of input'!r}")

    def bracket_type(self) -> Type:
        self.expect("[")
        t = self.type_()
        self.expect("]")
        return t

    # terms
    def seq(self) -> T.Term:
        first = self.expr()
        if self.accept(";"):
            return T.seq(first, self.seq())
        return first

    def expr(self) -> T.Term:
        if self.peek("\\") or self.peek("fun"):
            self.i += 1
            name = self.ident()
            ty = self.type_() if self.accept(":") else None
            if not self.accept("=>"):
                self.expect(".")
            return T.lam(name, ty, self.seq())
        if self.accept("let"):
            return self.let_rest()
        if self.peek("new") and not self.peek("[", 1):
            self.i += 1
            return self.new_rest()
        if self.accept("if"):
            c = self.seq()
            self.expect("then")
            a = self.seq()
            self.expect("else")
            b = self.seq()
            return T.if_(c, a, b)
        if self.accept("case"):
            scrut = self.seq()
            self.expect("of")
            self.expect("inl")
            x = self.ident()
            self.expect("=>")
            n1 = self.seq()
            self.expect("|")
            self.expect("inr")
            y = self.ident()
            self.expect("=>")
            n2 = self.seq()
            return T.case(scrut, (x, n1), (y, n2))
        return self.assign()

    def let_rest(self) -> T.Term:
        if self.accept("("):
            p = self.ident()
            self.expect(",")
            q = self.ident()
            self.expect(")")
            self.expect("=")
            value = self.seq()
            self.expect("in")
            body = self.seq()
            v = T.fresh("pair")
            inner = T.let(p, T.Proj(1, T.FVar(v)), T.let(q, T.Proj(2, T.FVar(v)), body))
            return T.let(v, value, inner)
        name = self.ident()
        ty = self.type_() if self.accept(":") else None
        self.expect("=")
        value = self.seq()
        self.expect("in")
        return T.let(name, value, self.seq(), ty)

    def new_rest(self) -> T.Term:
        decls = []
        while True:
            name = self.ident()
            init = None
            if self.accept(":"):
                ty = self.type_()
            else:
                ty = None
            if self.accept(":="):
                init = self.expr()
            if ty is None:
                self.error(f"new {name} needs a type annotation")
            decls.append((name, ty, init))
            if not self.accept(","):
                break
        self.expect("in")
        body = self.seq()
        for name, ty, init in reversed(decls):
            body = T.new_in(name, ty, body) if init is None else T.new_init(name, ty, init, body)
        return body

    def assign(self) -> T.Term:
        left = self.compare()
        if self.accept(":="):
            return T.Assign(left, self.expr())
        return left

    def compare(self) -> T.Term:
        left = self.additive()
        while self.peek("=") or self.peek("<"):
            op = self.tok[1]
            self.need_nat()
            self.i += 1
            left = T.Prim(op, left, self.additive())
        return left

    def additive(self) -> T.Term:
        left = self.multiplicative()
        while self.peek("+") or self.peek("-"):
            op = self.tok[1]
            self.need_nat()
            self.i += 1
            left = T.Prim(op, left, self.multiplicative())
        return left

    def multiplicative(self) -> T.Term:
        left = self.application()
        while self.peek("*") or self.peek("div") or self.peek("mod"):
            op = self.tok[1]
            self.need_nat()
            self.i += 1
            left = T.Prim(op, left, self.application())
        return left

    def starts_atom(self) -> bool:
        kind, v, _ = self.tok
        if kind in ("ident", "loc", "num"):
            return True
        if kind == "sym":
            return v in ("(", "!")
        if kind == "kw":
            return v in ("true", "false", "new", "bot", "Y", "fst", "snd", "not", "inl", "inr", "mkvar")
        return False

    def application(self) -> T.Term:
        if not self.starts_atom():
            got = self.tok[1] or "end of input"
            self.error(f"expected a term, got {got!r}")
        t = self.head()
        while self.starts_atom():
            t = T.App(t, self.head())
        return t

    def head(self) -> T.Term:
        """An atom, or a prefix form taking its arguments as atoms."""
        if self.accept("fst"):
            return T.Proj(1, self.head())
        if self.accept("snd"):
            return T.Proj(2, self.head())
        if self.accept("not"):
            return T.not_(self.head())
        if self.peek("inl") or self.peek("inr"):
            idx = 1 if self.tok[1] == "inl" else 2
            self.i += 1
            other = self.bracket_type()
            return T.Inj(idx, self.head(), other)
        if self.accept("mkvar"):
            w = self.head()
            return T.MkVar(w, self.head())
        return self.atom()

    def atom(self) -> T.Term:
        kind, v, pos = self.tok
        if kind == "ident":
            self.i += 1
            return T.FVar(v)
        if kind == "loc":
            self.i += 1
            return T.Loc(int(v[1:]))
        if kind == "num":
            self.need_nat()
            self.i += 1
            return T.Num(int(v))
        if self.accept("!"):
            return T.Deref(self.head())
        if self.accept("true"):
            return T.TRUE
        if self.accept("false"):
            return T.FALSE
        if self.accept("new"):
            return T.New(self.bracket_type())
        if self.accept("bot"):
            return T.bottom(self.bracket_type())
        if self.accept("Y"):
            t = self.bracket_type()
            if not isinstance(t, Arrow):
                self.error("Y needs an arrow type", pos)
            return T.fix(t.dom, t.cod)
        if self.accept("("):
            if self.accept(")"):
                return T.UNIT
            first = self.seq()
            if self.accept(","):
                second = self.seq()
                self.expect(")")
                return T.Pair(first, second)
            self.expect(")")
            return first
        self.error(f"expected a term, got {v or 'end of input'!r}")


def parse_type(text: str, nat_enabled: bool = False) -> Type:
    p = _Parser(text, nat_enabled)
    t = p.type_()
    p.finish()
    return t


def parse_term(text: str, nat_enabled: bool = False) -> T.Term:
    p = _Parser(text, nat_enabled)
    t = p.seq()
    p.finish()
    return t
