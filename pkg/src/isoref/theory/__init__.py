"""Canonical forms of types and synthesis of the coercions between isomorphic types."""

from .canonical import (
    DISTRIBUTIVITY_RULES, STRICT_RULES, CArrow, COne, CProd, CSum, CZero, CanonicalType, GrammarCheck, Step,
    VarPresent, canonical_form, decide_iso_syntactic, embed, grammar_check, measure, normalize, show_trace,
)
from .coercion import Coercion, CoercionPair, NotIsomorphicTypes, synthesize_coercion
