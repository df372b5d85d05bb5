"""
Core utilities shared by every qlab package.
"""
from .exceptions import (
    ERROR_MESSAGES,
    BudgetExceededError,
    ForeignConstantError,
    ForeignElementError,
    FormulaParseError,
    InvalidPosetError,
    QlabError,
    QuantaleSourceError,
    QuantaleValidationError,
    UnboundVariableError,
    UnknownQuantaleError,
    WellDefinednessError,
    get_user_friendly_message,
)

__all__ = [
    "ERROR_MESSAGES",
    "BudgetExceededError",
    "ForeignConstantError",
    "ForeignElementError",
    "FormulaParseError",
    "InvalidPosetError",
    "QlabError",
    "QuantaleSourceError",
    "QuantaleValidationError",
    "UnboundVariableError",
    "UnknownQuantaleError",
    "WellDefinednessError",
    "get_user_friendly_message",
]
