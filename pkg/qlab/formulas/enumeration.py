"""
Bounded enumeration of definability templates phi(x, y1..yp).

Atoms use only membership and equality. Quantified variables come from a fixed
pool z1..z3, always the next unused one, and a quantifier is only placed over
a body in which its variable occurs free.
"""
from enum import Enum
from itertools import product as cartesian
import logging
from typing import Dict, Iterator, List, Tuple

from .ast import (
    Atom,
    AtomKind,
    Bot,
    Exists,
    Forall,
    Formula,
    FormulaTemplate,
    Imp,
    Neg,
    Or,
    Strong,
    Top,
    Var,
    Weak,
    free_vars,
)

logger = logging.getLogger(__name__)

SUBJECT = "x"
POOL = ("z1", "z2", "z3")


class ConnectiveSet(str, Enum):
    """Which binary connectives definability templates may use."""
    RESIDUATED = "residuated"
    CLASSICAL = "classical"

    @property
    def binary(self) -> Tuple[type, ...]:
        if self is ConnectiveSet.CLASSICAL:
            return (Weak, Or, Imp)
        return (Strong, Weak, Or, Imp)


def param_names(max_params: int) -> Tuple[str, ...]:
    return tuple(f"y{i + 1}" for i in range(max_params))


def scope_vars(max_params: int, bound: int) -> Tuple[str, ...]:
    """Variables visible under `bound` nested quantifiers."""
    return (SUBJECT,) + param_names(max_params) + POOL[:bound]


def basis(variables: Tuple[str, ...]) -> List[Formula]:
    """Depth-0 formulas: bot, top, then u in v and u = v for each ordered pair."""
    atoms: List[Formula] = [Bot(), Top()]
    for u, v in cartesian(variables, repeat=2):
        atoms.append(Atom(AtomKind.MEM, Var(u), Var(v)))
        atoms.append(Atom(AtomKind.EQ, Var(u), Var(v)))
    return atoms


class _Levels:
    """levels[j][d]: formulas of depth exactly d under j bound pool variables."""

    def __init__(self, max_params: int, connectives: ConnectiveSet):
        self.max_params = max_params
        self.connectives = connectives
        self._levels: Dict[Tuple[int, int], List[Formula]] = {}

    def level(self, j: int, d: int) -> List[Formula]:
        key = (j, d)
        if key not in self._levels:
            self._levels[key] = list(self._generate(j, d))
        return self._levels[key]

    def upto(self, j: int, d: int) -> List[Formula]:
        out: List[Formula] = []
        for k in range(d + 1):
            out.extend(self.level(j, k))
        return out

    def generate(self, j: int, d: int) -> Iterator[Formula]:
        return self._generate(j, d)

    def _generate(self, j: int, d: int) -> Iterator[Formula]:
        if d == 0:
            yield from basis(scope_vars(self.max_params, j))
            return
        previous = self.level(j, d - 1)
        for f in previous:
            yield Neg(f)
        older = self.upto(j, d - 2) if d >= 2 else []
        below = older + previous
        n_older = len(older)
        for op in self.connectives.binary:
            for i, left in enumerate(below):
                for k, right in enumerate(below):
                    if i >= n_older or k >= n_older:
                        yield op(left, right)
        if j < len(POOL):
            var = POOL[j]
            for body in self.level(j + 1, d - 1):
                if var in free_vars(body):
                    yield Forall(var, body)
            for body in self.level(j + 1, d - 1):
                if var in free_vars(body):
                    yield Exists(var, body)


def enumerate_templates(
    max_depth: int,
    max_params: int,
    connectives: ConnectiveSet = ConnectiveSet.RESIDUATED,
) -> Iterator[FormulaTemplate]:
    """
    Stream every template up to the given bounds, shallowest first.

    Args:
        max_depth: Connective-nesting bound
        max_params: Number of parameter variables y1..yp
        connectives: Residuated or classical connective set

    Yields:
        FormulaTemplate with subject x and params y1..yp, in a run-independent order
    """
    if max_depth < 0 or max_params < 0:
        raise ValueError("bounds must be >= 0")
    levels = _Levels(max_params, connectives)
    params = param_names(max_params)
    for d in range(max_depth + 1):
        # the deepest level is streamed, not stored
        source = levels.generate(0, d) if d == max_depth else levels.level(0, d)
        count = 0
        for body in source:
            count += 1
            yield FormulaTemplate(body, SUBJECT, params)
        logger.debug(f"enumerated {count} template(s) at depth {d}")
