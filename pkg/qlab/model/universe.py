"""
The quantale-valued universe: interned elements and memoized atomic valuations.

An element is a finite map from earlier elements to quantale values. The three
atomic valuations are mutually recursive:

    [f sub g] = meet over x in dom f of  f(x) -> [x in g]
    [f = g]   = [f sub g] . [g sub f]
    [f in g]  = join over y in dom g of  g(y) . [y = f]

Recursion descends in rank, so it terminates; results are cached write-once.
"""
from dataclasses import dataclass
from enum import Enum
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from qlab.core.exceptions import ForeignConstantError, ForeignElementError
from qlab.quantales.base import QElem, Quantale

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VElem:
    """An interned element; entries are (key id, value) pairs sorted by key id."""
    id: int
    entries: Tuple[Tuple[int, QElem], ...]
    rank: int

    @property
    def domain(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    def value_of(self, key: int, default: Optional[QElem] = None) -> Optional[QElem]:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def values(self) -> Tuple[QElem, ...]:
        return tuple(v for _, v in self.entries)


class EqualityMode(str, Enum):
    """How [f = g] combines the two inclusions."""
    PRODUCT = "product"
    MEET = "meet"


ElemRef = Union[int, VElem]


class Universe:
    """
    Intern table plus atomic-valuation cache over one quantale.

    Element ids are dense and assigned in creation order, so every key of an
    element has a smaller id than the element.
    """

    def __init__(self, quantale: Quantale, equality: EqualityMode = EqualityMode.PRODUCT):
        self.quantale = quantale
        self.equality = EqualityMode(equality)
        self._elements: List[VElem] = []
        self._intern: Dict[Tuple[Tuple[int, QElem], ...], int] = {}
        self._cache: Dict[Tuple[str, int, int], QElem] = {}
        self._prod = quantale.product_table.tolist()
        self._meet = quantale.meet_table.tolist()
        self._join = quantale.join_table.tolist()
        self._res = quantale.residuum_table.tolist()
        self._combine_eq = self._meet if self.equality == EqualityMode.MEET else self._prod

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, elem_id: int) -> bool:
        return isinstance(elem_id, (int, np.integer)) and 0 <= elem_id < len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def intern(self, entries: Union[Mapping[int, QElem], Iterable[Tuple[int, QElem]]]) -> VElem:
        """Return the unique element with these entries, creating it if needed."""
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        normalized: Dict[int, QElem] = {}
        for key, value in pairs:
            key = self._id(key)
            value = int(value)
            if not 0 <= value < self.quantale.size:
                raise ForeignElementError(value, self.quantale.size)
            if key in normalized and normalized[key] != value:
                raise ValueError(f"key #{key} mapped to two values")
            normalized[key] = value
        canonical = tuple(sorted(normalized.items()))
        existing = self._intern.get(canonical)
        if existing is not None:
            return self._elements[existing]
        rank = 1 + max((self._elements[k].rank for k, _ in canonical), default=0)
        elem = VElem(len(self._elements), canonical, rank)
        self._elements.append(elem)
        self._intern[canonical] = elem.id
        return elem

    @property
    def empty(self) -> VElem:
        return self.intern(())

    def element(self, ref: ElemRef) -> VElem:
        return self._elements[self._id(ref)]

    def resolve(self, elem_id: int) -> int:
        """Id of a #id constant; raises if not interned."""
        if elem_id not in self:
            raise ForeignConstantError(elem_id)
        return int(elem_id)

    def lookup(self, entries: Mapping[int, QElem]) -> Union[VElem, None]:
        """Find an element without interning it."""
        found = self._intern.get(tuple(sorted((int(k), int(v)) for k, v in entries.items())))
        return None if found is None else self._elements[found]

    def _id(self, ref: ElemRef) -> int:
        elem_id = ref.id if isinstance(ref, VElem) else ref
        if elem_id not in self:
            raise ForeignConstantError(int(elem_id))
        return int(elem_id)

    def val_sub(self, f: ElemRef, g: ElemRef) -> QElem:
        return self._sub(self._id(f), self._id(g))

    def val_eq(self, f: ElemRef, g: ElemRef) -> QElem:
        return self._eq(self._id(f), self._id(g))

    def val_mem(self, f: ElemRef, g: ElemRef) -> QElem:
        return self._mem(self._id(f), self._id(g))

    def _store(self, key: Tuple[str, int, int], value: QElem) -> QElem:
        prior = self._cache.setdefault(key, value)
        if prior != value:
            raise RuntimeError(f"valuation cache diverged at {key}: {prior} != {value}")
        return value

    def _sub(self, f: int, g: int) -> QElem:
        key = ("sub", f, g)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = self.quantale.top
        for x, weight in self._elements[f].entries:
            value = self._meet[value][self._res[weight][self._mem(x, g)]]
        return self._store(key, value)

    def _eq(self, f: int, g: int) -> QElem:
        if f > g:
            f, g = g, f
        key = ("eq", f, g)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = self._combine_eq[self._sub(f, g)][self._sub(g, f)]
        return self._store(key, value)

    def _mem(self, f: int, g: int) -> QElem:
        key = ("mem", f, g)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = self.quantale.bottom
        for y, weight in self._elements[g].entries:
            value = self._join[value][self._prod[weight][self._eq(y, f)]]
        return self._store(key, value)

    def clear_cache(self) -> None:
        self._cache.clear()

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def atomic_tables(self, ids: Sequence[ElemRef]) -> Tuple[np.ndarray, np.ndarray]:
        """Membership and equality matrices over `ids`, indexed by position."""
        refs = [self._id(i) for i in ids]
        m = len(refs)
        mem = np.zeros((m, m), dtype=np.uint8)
        eq = np.zeros((m, m), dtype=np.uint8)
        for a, f in enumerate(refs):
            for b, g in enumerate(refs):
                mem[a, b] = self._mem(f, g)
                if b >= a:
                    eq[a, b] = eq[b, a] = self._eq(f, g)
        return mem, eq

    def sub_table(self, ids: Sequence[ElemRef]) -> np.ndarray:
        refs = [self._id(i) for i in ids]
        return np.array([[self._sub(f, g) for g in refs] for f in refs], dtype=np.uint8).reshape(len(refs), len(refs))

    def shadow(self, equality: EqualityMode) -> "Universe":
        """Same elements and ids, empty cache, possibly another equality mode."""
        other = Universe(self.quantale, equality)
        other._elements = list(self._elements)
        other._intern = dict(self._intern)
        return other

    def describe(self, ref: ElemRef) -> str:
        """Element in dump syntax: {child_id:label,...}."""
        elem = self.element(ref)
        body = ",".join(f"{k}:{self.quantale.labels[v]}" for k, v in elem.entries)
        return "{" + body + "}"


def compare_equality_modes(u: Universe, ids: Sequence[ElemRef]) -> List[Dict[str, str]]:
    """Pairs whose [=] (or [in]) changes when equality uses meet instead of product."""
    other = u.shadow(EqualityMode.MEET if u.equality == EqualityMode.PRODUCT else EqualityMode.PRODUCT)
    mem_a, eq_a = u.atomic_tables(ids)
    mem_b, eq_b = other.atomic_tables(ids)
    labels = u.quantale.labels
    found = []
    refs = [u.element(i).id for i in ids]
    for name, left, right in (("eq", eq_a, eq_b), ("mem", mem_a, mem_b)):
        for a, b in np.argwhere(left != right):
            found.append({
                "relation": name,
                "f": f"#{refs[a]}",
                "g": f"#{refs[b]}",
                u.equality.value: labels[left[a, b]],
                other.equality.value: labels[right[a, b]],
            })
    return found
