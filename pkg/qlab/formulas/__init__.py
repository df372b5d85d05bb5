"""
The residuated first-order language of set theory: AST, parser and template enumerator.
"""
from .ast import (
    Atom,
    AtomKind,
    Bot,
    Const,
    Equiv,
    Exists,
    Forall,
    Formula,
    FormulaTemplate,
    Imp,
    Neg,
    Or,
    Strong,
    Term,
    Top,
    Var,
    Weak,
    constants,
    count_free_occurrences,
    depth,
    free_vars,
    is_sentence,
    substitute,
    to_text,
)
from .enumeration import POOL, SUBJECT, ConnectiveSet, enumerate_templates, param_names, scope_vars
from .parser import parse, parse_many

__all__ = [
    "POOL",
    "SUBJECT",
    "Atom",
    "AtomKind",
    "Bot",
    "ConnectiveSet",
    "Const",
    "Equiv",
    "Exists",
    "Forall",
    "Formula",
    "FormulaTemplate",
    "Imp",
    "Neg",
    "Or",
    "Strong",
    "Term",
    "Top",
    "Var",
    "Weak",
    "constants",
    "count_free_occurrences",
    "depth",
    "enumerate_templates",
    "free_vars",
    "is_sentence",
    "param_names",
    "parse",
    "parse_many",
    "scope_vars",
    "substitute",
    "to_text",
]
