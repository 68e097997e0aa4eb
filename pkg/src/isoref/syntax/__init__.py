"""Types, terms, parsing, printing, typechecking and mkvar elimination."""

from .mkvar import TypeTranslation, eliminate_mkvar
from .parser import ParseError, parse_term, parse_type
from .printer import show_term
from .terms import Term
from .types import BOOL, NAT, ONE, ZERO, Arrow, Nat, One, Prod, Sum, Type, Var, Zero, show_type
from .typing import EMPTY, IllTyped, TypingContext, typecheck

__all__ = [
    "BOOL", "NAT", "ONE", "ZERO", "Arrow", "Nat", "One", "Prod", "Sum", "Type", "Var", "Zero",
    "EMPTY", "IllTyped", "ParseError", "Term", "TypeTranslation", "TypingContext",
    "eliminate_mkvar", "parse_term", "parse_type", "show_term", "show_type", "typecheck",
]
