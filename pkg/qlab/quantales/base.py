"""
Finite commutative integral quantales.

Elements are dense indices 0..n-1. A Quantale is only ever produced by
build_from_tables, which audits the axioms and precomputes the derived
meet/join/residuum/negation tables.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qlab.core.exceptions import ForeignElementError, QuantaleValidationError

logger = logging.getLogger(__name__)

QElem = int


@dataclass(frozen=True)
class Violation:
    """A failed axiom together with the elements that break it."""
    axiom: str
    witness: Tuple[int, ...]
    detail: str = ""

    def as_dict(self, labels: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        data: Dict[str, Any] = {"axiom": self.axiom, "witness": list(self.witness)}
        if labels is not None:
            data["labels"] = [labels[i] for i in self.witness]
        if self.detail:
            data["detail"] = self.detail
        return data

    def __str__(self) -> str:
        text = f"{self.axiom} at {self.witness}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class AuditResult:
    """Outcome of auditing raw tables; derived tables are None when the order is broken."""
    violations: List[Violation]
    meet: Optional[np.ndarray] = None
    join: Optional[np.ndarray] = None
    residuum: Optional[np.ndarray] = None

    @property
    def ok(self) -> bool:
        return not self.violations


def _first(mask: np.ndarray) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(mask)[0])


def _order_violations(leq: np.ndarray) -> List[Violation]:
    n = leq.shape[0]
    found: List[Violation] = []
    diag = np.diag(leq)
    if not diag.all():
        found.append(Violation("order.reflexive", _first(~diag)))
    anti = leq & leq.T & ~np.eye(n, dtype=bool)
    if anti.any():
        found.append(Violation("order.antisymmetric", _first(anti)))
    as_int = leq.astype(np.int64)
    composed = (as_int @ as_int) > 0
    broken = composed & ~leq
    if broken.any():
        x, z = _first(broken)
        y = int(np.argmax(leq[x] & leq[:, z]))
        found.append(Violation("order.transitive", (x, y, z)))
    return found


def _lattice_tables(leq: np.ndarray) -> Tuple[List[Violation], np.ndarray, np.ndarray]:
    n = leq.shape[0]
    not_leq = (~leq).astype(np.int64)
    join = np.zeros((n, n), dtype=np.intp)
    meet = np.zeros((n, n), dtype=np.intp)
    found: List[Violation] = []
    for x in range(n):
        upper = leq[x][None, :] & leq
        # u is least in upper[y] iff no z in upper[y] has u not<= z
        too_big = (upper.astype(np.int64) @ not_leq.T) > 0
        least = upper & ~too_big
        lower = leq[:, x][None, :] & leq.T
        too_small = (lower.astype(np.int64) @ not_leq) > 0
        greatest = lower & ~too_small
        for y in range(n):
            if not least[y].any():
                found.append(Violation("lattice.join_exists", (x, y)))
            else:
                join[x, y] = int(np.argmax(least[y]))
            if not greatest[y].any():
                found.append(Violation("lattice.meet_exists", (x, y)))
            else:
                meet[x, y] = int(np.argmax(greatest[y]))
    return found, meet, join


def _subset_sups(join: np.ndarray, bottom: int, n: int) -> np.ndarray:
    """sup of every subset, indexed by bitmask."""
    sups = np.full(1 << n, bottom, dtype=np.intp)
    for b in range(n):
        lo, hi = 1 << b, 1 << (b + 1)
        sups[lo:hi] = join[sups[0:lo], b]
    return sups


def _distributivity_violations(
    product: np.ndarray,
    join: np.ndarray,
    bottom: int,
    full_limit: int,
    samples: int,
    seed: int,
) -> List[Violation]:
    n = product.shape[0]
    if n <= full_limit:
        sups = _subset_sups(join, bottom, n)
        for x in range(n):
            images = np.zeros(1 << n, dtype=np.int64)
            for b in range(n):
                lo, hi = 1 << b, 1 << (b + 1)
                images[lo:hi] = images[0:lo] | (1 << int(product[x, b]))
            lhs = product[x, sups]
            rhs = sups[images]
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                mask = int(bad[0])
                subset = tuple(i for i in range(n) if mask >> i & 1)
                return [Violation("product.distributes_over_joins", (x,) + subset)]
        return []

    # pairs, the empty join, then seeded random subsets
    for x in range(n):
        if product[x, bottom] != bottom:
            return [Violation("product.distributes_over_joins", (x,), "empty join")]
    lhs = product[np.arange(n)[:, None, None], join[None, :, :]]
    rhs = join[product[:, :, None], product[:, None, :]]
    if (lhs != rhs).any():
        return [Violation("product.distributes_over_joins", _first(lhs != rhs))]
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        subset = np.nonzero(rng.random(n) < 0.5)[0].tolist()
        x = int(rng.integers(n))
        sup = reduce(lambda a, b: join[a, b], subset, bottom)
        image = reduce(lambda a, s: join[a, product[x, s]], subset, bottom)
        if product[x, sup] != image:
            return [Violation("product.distributes_over_joins", (x, *subset))]
    return []


def residuum_oracle(leq: np.ndarray, product: np.ndarray, join: np.ndarray, bottom: int) -> np.ndarray:
    """x -> y as the supremum of {z : x.z <= y}."""
    n = leq.shape[0]
    idx = np.arange(n)
    candidates = leq[product[:, None, :], idx[None, :, None]]
    res = np.full((n, n), bottom, dtype=np.intp)
    for z in range(n):
        res = np.where(candidates[:, :, z], join[res, z], res)
    return res


def audit_tables(
    labels: Sequence[str],
    leq: Any,
    product: Any,
    bottom: int,
    top: int,
    full_limit: int = 12,
    samples: int = 10_000,
    seed: int = 0,
) -> AuditResult:
    """
    Check every quantale axiom on raw tables.

    Args:
        labels: Display strings, one per element
        leq: n x n 0/1 order matrix, leq[x][y] meaning x <= y
        product: n x n table of element indices
        bottom: Index of the least element
        top: Index of the greatest element (and monoid unit)
        full_limit: Largest carrier for which distributivity is checked over all subsets
        samples: Random subsets checked above full_limit
        seed: Seed for those subsets

    Returns:
        AuditResult with every violation found and the derived tables when the
        order is a lattice
    """
    n = len(labels)
    leq_arr = np.asarray(leq, dtype=bool)
    prod = np.asarray(product, dtype=np.intp)
    if leq_arr.shape != (n, n) or prod.shape != (n, n):
        return AuditResult([Violation("tables.square", (n,), f"leq {leq_arr.shape}, product {prod.shape}")])
    if n and ((prod < 0) | (prod >= n)).any():
        return AuditResult([Violation("tables.index_range", _first((prod < 0) | (prod >= n)))])
    if not (0 <= bottom < n and 0 <= top < n):
        return AuditResult([Violation("tables.bounds_in_range", (bottom, top))])

    violations = _order_violations(leq_arr)
    if violations:
        return AuditResult(violations)

    lattice_violations, meet, join = _lattice_tables(leq_arr)
    if lattice_violations:
        return AuditResult(lattice_violations)

    if not leq_arr[bottom].all():
        violations.append(Violation("bounds.bottom_least", (int(np.argmin(leq_arr[bottom])),)))
    if not leq_arr[:, top].all():
        violations.append(Violation("bounds.top_greatest", (int(np.argmin(leq_arr[:, top])),)))

    if (prod != prod.T).any():
        violations.append(Violation("product.commutative", _first(prod != prod.T)))
    idx = np.arange(n)
    left = prod[prod[:, :, None], idx[None, None, :]]
    right = prod[idx[:, None, None], prod[None, :, :]]
    if (left != right).any():
        violations.append(Violation("product.associative", _first(left != right)))
    if (prod[top] != idx).any() or (prod[:, top] != idx).any():
        bad = np.nonzero((prod[top] != idx) | (prod[:, top] != idx))[0]
        violations.append(Violation("product.unit_is_top", (int(bad[0]),)))
    violations.extend(_distributivity_violations(prod, join, bottom, full_limit, samples, seed))

    residuum = residuum_oracle(leq_arr, prod, join, bottom)
    adjoint_left = leq_arr[prod[:, None, :], idx[None, :, None]]
    adjoint_right = leq_arr[idx[None, None, :], residuum[:, :, None]]
    if (adjoint_left != adjoint_right).any():
        x, y, z = _first(adjoint_left != adjoint_right)
        violations.append(Violation("residuum.adjunction", (x, y, z)))

    return AuditResult(violations, meet, join, residuum)


class Quantale:
    """
    A validated finite commutative integral quantale.

    Instances are immutable; every operation is a table lookup.
    """

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        leq: np.ndarray,
        product: np.ndarray,
        meet: np.ndarray,
        join: np.ndarray,
        residuum: np.ndarray,
        bottom: int,
        top: int,
        values: Optional[Sequence[Fraction]] = None,
    ):
        self.name = name
        self.labels: Tuple[str, ...] = tuple(labels)
        self.values: Optional[Tuple[Fraction, ...]] = tuple(values) if values is not None else None
        self.bottom = int(bottom)
        self.top = int(top)
        self.leq_table = np.asarray(leq, dtype=bool)
        self.product_table = np.asarray(product, dtype=np.intp)
        self.meet_table = np.asarray(meet, dtype=np.intp)
        self.join_table = np.asarray(join, dtype=np.intp)
        self.residuum_table = np.asarray(residuum, dtype=np.intp)
        self.neg_table = self.residuum_table[:, self.bottom].copy()
        for table in (
            self.leq_table,
            self.product_table,
            self.meet_table,
            self.join_table,
            self.residuum_table,
            self.neg_table,
        ):
            table.setflags(write=False)
        self._label_index = {label: i for i, label in enumerate(self.labels)}
        self._powers: Dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"Quantale({self.name!r}, size={self.size})"

    @property
    def size(self) -> int:
        return len(self.labels)

    def elements(self) -> range:
        return range(self.size)

    def _check(self, *xs: Any) -> None:
        for x in xs:
            if not isinstance(x, (int, np.integer)) or isinstance(x, bool) or not 0 <= x < self.size:
                raise ForeignElementError(x, self.size)

    def label(self, x: QElem) -> str:
        self._check(x)
        return self.labels[x]

    def element(self, label: str) -> QElem:
        """Index of the element displayed as `label`."""
        key = label.strip()
        if key in self._label_index:
            return self._label_index[key]
        if self.values is not None:
            try:
                wanted = Fraction(key)
            except (ValueError, ZeroDivisionError):
                wanted = None
            if wanted is not None and wanted in self.values:
                return self.values.index(wanted)
        raise ForeignElementError(label, self.size, f"No element labelled {label!r} in {self.name}")

    def leq(self, x: QElem, y: QElem) -> bool:
        self._check(x, y)
        return bool(self.leq_table[x, y])

    def meet(self, x: QElem, y: QElem) -> QElem:
        self._check(x, y)
        return int(self.meet_table[x, y])

    def join(self, x: QElem, y: QElem) -> QElem:
        self._check(x, y)
        return int(self.join_table[x, y])

    def product(self, x: QElem, y: QElem) -> QElem:
        self._check(x, y)
        return int(self.product_table[x, y])

    def residuum(self, x: QElem, y: QElem) -> QElem:
        self._check(x, y)
        return int(self.residuum_table[x, y])

    def neg(self, x: QElem) -> QElem:
        self._check(x)
        return int(self.neg_table[x])

    def equiv(self, x: QElem, y: QElem) -> QElem:
        self._check(x, y)
        return int(self.product_table[self.residuum_table[x, y], self.residuum_table[y, x]])

    def power(self, x: QElem, n: int) -> QElem:
        self._check(x)
        if n < 0:
            raise ValueError(f"power exponent must be >= 0, got {n}")
        return int(self.power_table(n)[x])

    def power_table(self, n: int) -> np.ndarray:
        """x^n for every x, with x^0 = top."""
        if n not in self._powers:
            if n == 0:
                table = np.full(self.size, self.top, dtype=np.intp)
            else:
                prev = self.power_table(n - 1)
                table = self.product_table[np.arange(self.size), prev]
            table.setflags(write=False)
            self._powers[n] = table
        return self._powers[n]

    def join_all(self, xs: Iterable[QElem]) -> QElem:
        """Supremum of any finite family; bottom for the empty one."""
        return reduce(self.join, xs, self.bottom)

    def meet_all(self, xs: Iterable[QElem]) -> QElem:
        """Infimum of any finite family; top for the empty one."""
        return reduce(self.meet, xs, self.top)

    def is_two_valued(self, x: QElem) -> bool:
        return x == self.bottom or x == self.top

    def to_tables(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "labels": list(self.labels),
            "leq": self.leq_table.astype(int).tolist(),
            "product": self.product_table.tolist(),
            "bottom": self.bottom,
            "top": self.top,
        }
        if self.values is not None:
            data["values"] = [str(v) for v in self.values]
        return data


def build_from_tables(
    labels: Sequence[str],
    leq: Any,
    product: Any,
    bottom: int,
    top: int,
    name: Optional[str] = None,
    values: Optional[Sequence[Fraction]] = None,
    full_limit: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Quantale:
    """
    Validate tables and build a Quantale with derived tables precomputed.

    Raises:
        QuantaleValidationError: With one witness per failed axiom
    """
    from qlab.config import get_settings

    settings = get_settings()
    audit = audit_tables(
        labels,
        leq,
        product,
        bottom,
        top,
        full_limit=settings.distributivity_full_limit if full_limit is None else full_limit,
        samples=settings.distributivity_samples if samples is None else samples,
        seed=settings.random_seed if seed is None else seed,
    )
    name = name or f"custom:{len(labels)}"
    if not audit.ok:
        logger.warning(f"❌ {name}: {len(audit.violations)} axiom violation(s), first {audit.violations[0]}")
        raise QuantaleValidationError(audit.violations)
    logger.debug(f"✅ {name}: quantale axioms hold on {len(labels)} elements")
    return Quantale(
        name=name,
        labels=labels,
        leq=np.asarray(leq, dtype=bool),
        product=np.asarray(product, dtype=np.intp),
        meet=audit.meet,
        join=audit.join,
        residuum=audit.residuum,
        bottom=bottom,
        top=top,
        values=values,
    )
