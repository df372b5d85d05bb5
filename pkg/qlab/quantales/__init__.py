"""
Finite commutative integral quantales: construction, validation and derived operations.
"""
from .base import AuditResult, QElem, Quantale, Violation, audit_tables, build_from_tables, residuum_oracle
from .builtins import Poset, boolean_algebra, godel_chain, heyting_from_poset, lukasiewicz_chain
from .factory import QuantaleFactory
from .loader import dump_quantale, load_quantale, load_quantale_file
from .theorems import (
    audit_report,
    check_heyting_collapse,
    check_residuum_oracle,
    is_idempotent,
    validate_theorem_suite,
)

__all__ = [
    "AuditResult",
    "Poset",
    "QElem",
    "Quantale",
    "QuantaleFactory",
    "Violation",
    "audit_report",
    "audit_tables",
    "boolean_algebra",
    "build_from_tables",
    "check_heyting_collapse",
    "check_residuum_oracle",
    "dump_quantale",
    "godel_chain",
    "heyting_from_poset",
    "is_idempotent",
    "load_quantale",
    "load_quantale_file",
    "lukasiewicz_chain",
    "residuum_oracle",
    "validate_theorem_suite",
]
