"""
AST of residuated first-order set-theory formulas.

Nodes are frozen dataclasses, so structural equality and hashing come for free.
Neg, Top and Equiv are primary constructors; evaluators must give them the values
of their definitions (phi -> bot, ~bot, (phi -> psi) & (psi -> phi)).
"""
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterator, Tuple, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    """A constant naming an interned model element."""
    elem_id: int

    def __str__(self) -> str:
        return f"#{self.elem_id}"


Term = Union[Var, Const]


class AtomKind(str, Enum):
    MEM = "in"
    EQ = "="
    SUB = "sub"


class Formula:
    """Base class of all formula nodes."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Bot(Formula):
    """Falsum, read as bottom."""


@dataclass(frozen=True)
class Top(Formula):
    """Verum; evaluates as ~bot."""


@dataclass(frozen=True)
class Atom(Formula):
    kind: AtomKind
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Strong(Formula):
    """Strong conjunction &, read by the monoid product."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Weak(Formula):
    """Weak conjunction, read by meet."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Equiv(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


Binary = (Strong, Weak, Or, Imp, Equiv)
Quantifier = (Forall, Exists)

_SYMBOL = {Strong: "&", Weak: "/\\", Or: "\\/", Imp: "->", Equiv: "=="}
_PRECEDENCE = {Equiv: 1, Imp: 2, Or: 3, Weak: 4, Strong: 5}
_RIGHT_ASSOC = {Imp}
_PREFIX_PRECEDENCE = 6


def _precedence(f: Formula) -> int:
    if isinstance(f, Quantifier):
        return 0
    if isinstance(f, Binary):
        return _PRECEDENCE[type(f)]
    if isinstance(f, Neg):
        return _PREFIX_PRECEDENCE
    return 7


def _wrap(f: Formula, needs_parens: bool) -> str:
    text = to_text(f)
    return f"({text})" if needs_parens else text


def to_text(f: Formula) -> str:
    """Print with minimal parentheses; parse(to_text(f)) == f."""
    match f:
        case Bot():
            return "bot"
        case Top():
            return "top"
        case Atom(kind, lhs, rhs):
            return f"{lhs} {kind.value} {rhs}"
        case Neg(body):
            return "~" + _wrap(body, _precedence(body) < _PREFIX_PRECEDENCE)
        case Forall(var, body):
            return f"A {var}. {to_text(body)}"
        case Exists(var, body):
            return f"E {var}. {to_text(body)}"
        case _ if isinstance(f, Binary):
            p = _precedence(f)
            right_assoc = type(f) in _RIGHT_ASSOC
            lp, rp = _precedence(f.left), _precedence(f.right)
            left = _wrap(f.left, lp == 0 or lp < p or (lp == p and right_assoc))
            right = _wrap(f.right, rp == 0 or rp < p or (rp == p and not right_assoc))
            return f"{left} {_SYMBOL[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, Binary):
        return (f.left, f.right)
    if isinstance(f, (Neg, Forall, Exists)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for child in children(f):
        yield from subformulas(child)


def _term_vars(t: Term) -> FrozenSet[str]:
    return frozenset((t.name,)) if isinstance(t, Var) else frozenset()


def free_vars(f: Formula) -> FrozenSet[str]:
    match f:
        case Atom(_, lhs, rhs):
            return _term_vars(lhs) | _term_vars(rhs)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
        case _:
            out: FrozenSet[str] = frozenset()
            for child in children(f):
                out |= free_vars(child)
            return out


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def constants(f: Formula) -> FrozenSet[int]:
    found = set()
    for sub in subformulas(f):
        if isinstance(sub, Atom):
            for t in (sub.lhs, sub.rhs):
                if isinstance(t, Const):
                    found.add(t.elem_id)
    return frozenset(found)


def depth(f: Formula) -> int:
    """Connective-nesting depth; atoms, bot and top have depth 0."""
    kids = children(f)
    return 1 + max(depth(k) for k in kids) if kids else 0


def count_free_occurrences(f: Formula, var: str) -> int:
    match f:
        case Atom(_, lhs, rhs):
            return sum(1 for t in (lhs, rhs) if isinstance(t, Var) and t.name == var)
        case Forall(v, body) | Exists(v, body):
            return 0 if v == var else count_free_occurrences(body, var)
        case _:
            return sum(count_free_occurrences(c, var) for c in children(f))


def _fresh(avoid: FrozenSet[str], base: str) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _rebuild(f: Formula, kids: Tuple[Formula, ...]) -> Formula:
    if isinstance(f, Binary):
        return type(f)(kids[0], kids[1])
    if isinstance(f, Neg):
        return Neg(kids[0])
    return f


def substitute(f: Formula, var: str, term: Term) -> Formula:
    """Replace the free occurrences of `var` by `term`, renaming binders that would capture it."""
    match f:
        case Atom(kind, lhs, rhs):
            swap = lambda t: term if isinstance(t, Var) and t.name == var else t  # noqa: E731
            return Atom(kind, swap(lhs), swap(rhs))
        case Forall(v, body) | Exists(v, body):
            if v == var or var not in free_vars(body):
                return f
            if isinstance(term, Var) and term.name == v:
                fresh = _fresh(free_vars(body) | {term.name, var}, v)
                body = substitute(body, v, Var(fresh))
                v = fresh
            return type(f)(v, substitute(body, var, term))
        case _:
            return _rebuild(f, tuple(substitute(c, var, term) for c in children(f)))


@dataclass(frozen=True)
class FormulaTemplate:
    """A formula phi(x, y1..yk) read as a definition of the subject x from parameters."""
    body: Formula
    subject: str
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        extra = free_vars(self.body) - {self.subject} - set(self.params)
        if extra:
            raise ValueError(f"template {self.body} has unexpected free variables {sorted(extra)}")

    def __str__(self) -> str:
        head = ", ".join((self.subject,) + self.params)
        return f"[{head}] {self.body}"
