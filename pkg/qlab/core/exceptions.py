"""
Custom exceptions for qlab.
Provides specific error types so the CLI can map failures to exit codes and diagnostics.
"""
from typing import Any, Optional, Sequence


class QlabError(Exception):
    """Base exception for all qlab errors."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        """
        Initialize qlab error.

        Args:
            message: Human-readable error message
            error_code: Machine-readable error code for reports
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__


class QuantaleValidationError(QlabError):
    """Tables do not describe a commutative integral quantale."""

    def __init__(self, violations: Sequence[Any], message: Optional[str] = None):
        self.violations = list(violations)
        default_message = f"Quantale validation failed with {len(self.violations)} violation(s)"
        if self.violations:
            default_message += f"; first: {self.violations[0]}"

        super().__init__(
            message=message or default_message,
            error_code="QUANTALE_INVALID",
        )


class ForeignElementError(QlabError):
    """An element index does not belong to the quantale it is used with."""

    def __init__(self, element: Any, size: int, message: Optional[str] = None):
        self.element = element
        self.size = size
        super().__init__(
            message=message or f"Element {element!r} is not in a quantale of size {size}",
            error_code="FOREIGN_ELEMENT",
        )


class InvalidPosetError(QlabError):
    """Relation handed to the Heyting constructor is not a partial order."""

    def __init__(self, details: Optional[str] = None):
        default_message = "Invalid poset relation"
        if details:
            default_message += f": {details}"

        super().__init__(message=default_message, error_code="INVALID_POSET")


class QuantaleSourceError(QlabError):
    """A quantale file or builtin name could not be read."""

    def __init__(self, source: str, details: Optional[str] = None, line: Optional[int] = None):
        self.source = source
        self.line = line
        default_message = f"Cannot read quantale source {source!r}"
        if line is not None:
            default_message += f" (line {line})"
        if details:
            default_message += f": {details}"

        super().__init__(message=default_message, error_code="QUANTALE_SOURCE_ERROR")


class UnknownQuantaleError(QuantaleSourceError):
    """Builtin name is not registered."""

    def __init__(self, name: str, supported: Sequence[str]):
        self.supported = list(supported)
        super().__init__(
            source=name,
            details=f"unsupported builtin. Supported: {', '.join(self.supported)}",
        )
        self.error_code = "UNKNOWN_QUANTALE"


class FormulaParseError(QlabError):
    """Formula text does not match the grammar."""

    def __init__(
        self,
        text: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        details: Optional[str] = None,
    ):
        self.text = text
        self.line = line
        self.column = column
        default_message = "Syntax error"
        if line is not None and column is not None:
            default_message += f" at line {line}, column {column}"
        if details:
            default_message += f": {details}"

        super().__init__(message=default_message, error_code="FORMULA_PARSE_ERROR")


class UnboundVariableError(QlabError):
    """A free variable has no binding at evaluation time."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(
            message=f"Unbound variable {name!r}",
            error_code="UNBOUND_VARIABLE",
        )


class ForeignConstantError(QlabError):
    """A #id constant does not name an element of the structure."""

    def __init__(self, elem_id: int, message: Optional[str] = None):
        self.elem_id = elem_id
        super().__init__(
            message=message or f"Constant #{elem_id} is not interned in this universe",
            error_code="FOREIGN_CONSTANT",
        )


class BudgetExceededError(QlabError):
    """A construction would create more elements than the configured budget."""

    def __init__(self, requested: int, budget: int, partial: Any = None):
        self.requested = requested
        self.budget = budget
        self.partial = partial
        super().__init__(
            message=f"Budget exceeded: about to create {requested} elements (budget {budget})",
            error_code="BUDGET_EXCEEDED",
        )


class WellDefinednessError(QlabError):
    """Two defining pairs of one classical set induce different functions."""

    def __init__(self, witnesses: Sequence[Any]):
        self.witnesses = list(witnesses)
        default_message = f"j is not well defined: {len(self.witnesses)} conflicting pair(s)"
        if self.witnesses:
            default_message += f"; first: {self.witnesses[0]}"

        super().__init__(message=default_message, error_code="J_NOT_WELL_DEFINED")


# Error code to user-friendly message mapping
ERROR_MESSAGES = {
    "QUANTALE_INVALID": {
        "user_message": "The tables do not define a commutative integral quantale",
        "troubleshooting": "Check the violation witnesses; each names the elements breaking an axiom.",
    },
    "FOREIGN_ELEMENT": {
        "user_message": "An element index is outside the quantale carrier",
        "troubleshooting": "Elements are dense indices 0..n-1 of one specific quantale.",
    },
    "INVALID_POSET": {
        "user_message": "The poset relation is not a partial order",
        "troubleshooting": "The relation must be reflexive, antisymmetric and transitive.",
    },
    "QUANTALE_SOURCE_ERROR": {
        "user_message": "The quantale source could not be read",
        "troubleshooting": "Pass a builtin name such as lukasiewicz:5 or a readable quantale file.",
    },
    "UNKNOWN_QUANTALE": {
        "user_message": "Unknown builtin quantale",
        "troubleshooting": "Use one of the supported builtin families listed in the message.",
    },
    "FORMULA_PARSE_ERROR": {
        "user_message": "The formula could not be parsed",
        "troubleshooting": "Check the reported position against the formula grammar.",
    },
    "UNBOUND_VARIABLE": {
        "user_message": "The formula has a free variable without a binding",
        "troubleshooting": "Bind it with --bind name=#id or quantify it.",
    },
    "FOREIGN_CONSTANT": {
        "user_message": "A #id constant does not name a built element",
        "troubleshooting": "Inspect the stage dump for valid ids.",
    },
    "BUDGET_EXCEEDED": {
        "user_message": "The construction exceeds the element budget",
        "troubleshooting": "Lower --alpha, restrict --values, or raise QLAB_BUDGET.",
    },
    "J_NOT_WELL_DEFINED": {
        "user_message": "The j map is not well defined at this configuration",
        "troubleshooting": "Both defining pairs are listed; this is a genuine finding, not an input error.",
    },
}


def get_user_friendly_message(error_code: str) -> dict:
    """
    Get user-friendly error message and troubleshooting for an error code.

    Args:
        error_code: The error code

    Returns:
        Dictionary with user_message and troubleshooting
    """
    return ERROR_MESSAGES.get(error_code, {
        "user_message": "An unexpected error occurred",
        "troubleshooting": "Re-run with --log-level DEBUG for details.",
    })
