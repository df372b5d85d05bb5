"""
Scalar evaluation of formulas in a structure over an explicit quantifier carrier.
"""
from functools import lru_cache
import logging
from typing import Any, Mapping, Protocol, Sequence

from qlab.core.exceptions import ForeignConstantError, UnboundVariableError
from qlab.formulas.ast import (
    Atom,
    AtomKind,
    Bot,
    Const,
    Equiv,
    Exists,
    Forall,
    Formula,
    Imp,
    Neg,
    Or,
    Strong,
    Term,
    Top,
    Weak,
)
from qlab.quantales.base import QElem, Quantale
from qlab.quantales.builtins import boolean_algebra
from .hfsets import HFSet

logger = logging.getLogger(__name__)


class Structure(Protocol):
    """Anything that interprets the three atomic relations in a quantale."""

    quantale: Quantale

    def val_mem(self, a: Any, b: Any) -> QElem: ...

    def val_eq(self, a: Any, b: Any) -> QElem: ...

    def val_sub(self, a: Any, b: Any) -> QElem: ...

    def resolve(self, elem_id: int) -> Any: ...


@lru_cache(maxsize=1)
def two_element_boolean() -> Quantale:
    return boolean_algebra(1)


class ClassicalStructure:
    """(HF, ∈) read in the two-element Boolean quantale; #n names the set with Ackermann code n."""

    def __init__(self):
        self.quantale = two_element_boolean()

    def _truth(self, value: bool) -> QElem:
        return self.quantale.top if value else self.quantale.bottom

    def val_mem(self, a: HFSet, b: HFSet) -> QElem:
        return self._truth(a in b)

    def val_eq(self, a: HFSet, b: HFSet) -> QElem:
        return self._truth(a == b)

    def val_sub(self, a: HFSet, b: HFSet) -> QElem:
        return self._truth(a.issubset(b))

    def resolve(self, elem_id: int) -> HFSet:
        if elem_id < 0:
            raise ForeignConstantError(elem_id)
        return HFSet.from_int(elem_id)


def _term(structure: Structure, t: Term, env: Mapping[str, Any]) -> Any:
    if isinstance(t, Const):
        return structure.resolve(t.elem_id)
    if t.name not in env:
        raise UnboundVariableError(t.name)
    return env[t.name]


def eval_sentence(
    structure: Structure,
    carrier: Sequence[Any],
    sentence: Formula,
    env: Mapping[str, Any] = None,
) -> QElem:
    """
    Value of `sentence` with quantifiers ranging over `carrier`.

    Args:
        structure: Universe or classical structure interpreting the atoms
        carrier: Elements the quantifiers range over
        sentence: Formula whose free variables are all bound by env
        env: Variable bindings

    Returns:
        Quantale element

    Raises:
        UnboundVariableError: A free variable has no binding
        ForeignConstantError: A constant is not an element of the structure
    """
    q = structure.quantale
    env = dict(env or {})

    def ev(f: Formula, scope: Mapping[str, Any]) -> QElem:
        match f:
            case Bot():
                return q.bottom
            case Top():
                return q.neg(q.bottom)
            case Atom(kind, lhs, rhs):
                a, b = _term(structure, lhs, scope), _term(structure, rhs, scope)
                if kind == AtomKind.MEM:
                    return structure.val_mem(a, b)
                if kind == AtomKind.EQ:
                    return structure.val_eq(a, b)
                return structure.val_sub(a, b)
            case Strong(left, right):
                return q.product(ev(left, scope), ev(right, scope))
            case Weak(left, right):
                return q.meet(ev(left, scope), ev(right, scope))
            case Or(left, right):
                return q.join(ev(left, scope), ev(right, scope))
            case Imp(left, right):
                return q.residuum(ev(left, scope), ev(right, scope))
            case Neg(body):
                return q.residuum(ev(body, scope), q.bottom)
            case Equiv(left, right):
                a, b = ev(left, scope), ev(right, scope)
                return q.product(q.residuum(a, b), q.residuum(b, a))
            case Forall(var, body):
                return q.meet_all(ev(body, {**scope, var: c}) for c in carrier)
            case Exists(var, body):
                return q.join_all(ev(body, {**scope, var: c}) for c in carrier)
        raise TypeError(f"not a formula: {f!r}")

    return ev(sentence, env)
