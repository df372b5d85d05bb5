"""
Factory for creating builtin quantales from name strings such as "lukasiewicz:5".
"""
import logging
from typing import Callable, Dict, List

from qlab.core.exceptions import QuantaleSourceError, UnknownQuantaleError
from .base import Quantale
from .builtins import Poset, boolean_algebra, godel_chain, heyting_from_poset, lukasiewicz_chain

logger = logging.getLogger(__name__)

Builder = Callable[[List[str]], Quantale]


def _single_int(family: str, args: List[str]) -> int:
    if len(args) != 1:
        raise QuantaleSourceError(f"{family}:{':'.join(args)}", "expected exactly one integer argument")
    try:
        return int(args[0])
    except ValueError:
        raise QuantaleSourceError(f"{family}:{args[0]}", "argument must be an integer") from None


def _heyting(args: List[str]) -> Quantale:
    if len(args) != 2 or args[0] not in ("chain", "antichain"):
        raise QuantaleSourceError(
            "heyting:" + ":".join(args), "expected heyting:chain:<n> or heyting:antichain:<n>"
        )
    n = _single_int("heyting", args[1:])
    if n < 0:
        raise QuantaleSourceError(f"heyting:{args[0]}:{n}", "poset size must be >= 0")
    poset = Poset.chain(n) if args[0] == "chain" else Poset.antichain(n)
    return heyting_from_poset(poset, name=f"heyting:{args[0]}:{n}")


class QuantaleFactory:
    """
    Factory class for creating builtin quantales.
    Uses the Factory pattern to pick the constructor from the family name.
    """

    # Registry of available families
    _builders: Dict[str, Builder] = {
        "lukasiewicz": lambda args: lukasiewicz_chain(_single_int("lukasiewicz", args)),
        "luk": lambda args: lukasiewicz_chain(_single_int("lukasiewicz", args)),  # Alias
        "godel": lambda args: godel_chain(_single_int("godel", args)),
        "goedel": lambda args: godel_chain(_single_int("godel", args)),  # Alias
        "boolean": lambda args: boolean_algebra(_single_int("boolean", args)),
        "bool": lambda args: boolean_algebra(_single_int("boolean", args)),  # Alias
        "heyting": _heyting,
    }

    @classmethod
    def create(cls, name: str) -> Quantale:
        """
        Create a builtin quantale.

        Args:
            name: Family and arguments separated by colons, e.g. "godel:4" or "heyting:chain:3"

        Returns:
            Validated Quantale

        Raises:
            UnknownQuantaleError: If the family is not registered
            QuantaleSourceError: If the arguments are malformed or out of range
        """
        family, *args = name.strip().lower().split(":")
        if family not in cls._builders:
            raise UnknownQuantaleError(name, cls.list_supported_families())
        try:
            quantale = cls._builders[family](args)
        except ValueError as e:
            raise QuantaleSourceError(name, str(e)) from e
        logger.info(f"Built {quantale.name} with {quantale.size} elements")
        return quantale

    @classmethod
    def list_supported_families(cls) -> List[str]:
        return list(cls._builders.keys())
