"""
Hereditarily finite sets in canonical form, plus a direct classical truth checker.
"""
from functools import total_ordering
from itertools import combinations
import logging
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from qlab.core.exceptions import UnboundVariableError
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
    Var,
    Weak,
)

logger = logging.getLogger(__name__)


@total_ordering
class HFSet:
    """
    A hereditarily finite set.

    Children are kept sorted by Ackermann code, which makes the representation
    unique per extensional set. Rank counts the least stage containing the set,
    so the empty set has rank 1.
    """

    __slots__ = ("children", "code", "rank")

    def __init__(self, children: Iterable["HFSet"] = ()):
        unique = {c.code: c for c in children}
        self.children: Tuple[HFSet, ...] = tuple(unique[k] for k in sorted(unique))
        self.code: int = sum(1 << c.code for c in self.children)
        self.rank: int = 1 + max((c.rank for c in self.children), default=0)

    @classmethod
    def from_int(cls, code: int) -> "HFSet":
        """Inverse of the Ackermann coding: bit i set means the set coded by i is a member."""
        if code < 0:
            raise ValueError(f"Ackermann codes are >= 0, got {code}")
        return cls(cls.from_int(i) for i in range(code.bit_length()) if code >> i & 1)

    def to_int(self) -> int:
        return self.code

    def __contains__(self, other: "HFSet") -> bool:
        return bool(self.code >> other.code & 1)

    def __iter__(self):
        return iter(self.children)

    def __len__(self) -> int:
        return len(self.children)

    def __eq__(self, other) -> bool:
        return isinstance(other, HFSet) and self.code == other.code

    def __lt__(self, other: "HFSet") -> bool:
        return self.code < other.code

    def __hash__(self) -> int:
        return hash(("HFSet", self.code))

    def issubset(self, other: "HFSet") -> bool:
        return self.code & ~other.code == 0

    def is_transitive(self) -> bool:
        return all(c.issubset(self) for c in self.children)

    def __repr__(self) -> str:
        return f"HFSet({self})"

    def __str__(self) -> str:
        if not self.children:
            return "∅"
        return "{" + ",".join(str(c) for c in self.children) + "}"


EMPTY = HFSet()


def hf_sets_up_to_rank(rank: int) -> List[HFSet]:
    """All HF sets of rank <= `rank` (the stage V_rank), sorted by code."""
    stage: List[HFSet] = []
    for _ in range(rank):
        stage = [HFSet(sub) for size in range(len(stage) + 1) for sub in combinations(stage, size)]
    return sorted(stage)


def powerset(members: Sequence[HFSet]) -> List[HFSet]:
    return sorted(HFSet(sub) for size in range(len(members) + 1) for sub in combinations(members, size))


def _term(t: Term, env: Mapping[str, HFSet]) -> HFSet:
    if isinstance(t, Const):
        return HFSet.from_int(t.elem_id)
    if t.name not in env:
        raise UnboundVariableError(t.name)
    return env[t.name]


def _bound(var: str, guard: Formula, env: Mapping[str, HFSet]):
    """Bounding set of `var` when guard is `var in t` with t not `var`."""
    if (
        isinstance(guard, Atom)
        and guard.kind == AtomKind.MEM
        and guard.lhs == Var(var)
        and guard.rhs != Var(var)
    ):
        return _term(guard.rhs, env)
    return None


def classical_truth(f: Formula, env: Mapping[str, HFSet], carrier: Sequence[HFSet] = ()) -> bool:
    """
    Truth of `f` in (HF, ∈) by direct recursion.

    Bounded quantifiers, A v. (v in t -> phi) and E v. (v in t & phi), range over
    the members of t; any other quantifier ranges over `carrier`.
    """
    match f:
        case Bot():
            return False
        case Top():
            return True
        case Atom(kind, lhs, rhs):
            a, b = _term(lhs, env), _term(rhs, env)
            if kind == AtomKind.MEM:
                return a in b
            if kind == AtomKind.EQ:
                return a == b
            return a.issubset(b)
        case Strong(left, right) | Weak(left, right):
            return classical_truth(left, env, carrier) and classical_truth(right, env, carrier)
        case Or(left, right):
            return classical_truth(left, env, carrier) or classical_truth(right, env, carrier)
        case Imp(left, right):
            return not classical_truth(left, env, carrier) or classical_truth(right, env, carrier)
        case Equiv(left, right):
            return classical_truth(left, env, carrier) == classical_truth(right, env, carrier)
        case Neg(body):
            return not classical_truth(body, env, carrier)
        case Forall(var, Imp(guard, body)) if _bound(var, guard, env) is not None:
            scope: Dict[str, HFSet] = dict(env)
            for c in _bound(var, guard, env):
                scope[var] = c
                if not classical_truth(body, scope, carrier):
                    return False
            return True
        case Exists(var, Strong(guard, body) | Weak(guard, body)) if _bound(var, guard, env) is not None:
            scope = dict(env)
            for c in _bound(var, guard, env):
                scope[var] = c
                if classical_truth(body, scope, carrier):
                    return True
            return False
        case Forall(var, body):
            return all(classical_truth(body, {**env, var: c}, carrier) for c in carrier)
        case Exists(var, body):
            return any(classical_truth(body, {**env, var: c}, carrier) for c in carrier)
    raise TypeError(f"not a formula: {f!r}")
