"""
Builtin quantale families: finite Lukasiewicz and Godel chains, finite Boolean
algebras, and Heyting algebras of down-sets of a finite poset.
"""
from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import List, Sequence, Tuple

import numpy as np

from qlab.core.exceptions import InvalidPosetError
from .base import Quantale, build_from_tables

logger = logging.getLogger(__name__)


def _chain_labels(n: int) -> Tuple[List[str], List[Fraction]]:
    values = [Fraction(i, n - 1) for i in range(n)]
    return [str(v) for v in values], values


def _chain_order(n: int) -> np.ndarray:
    idx = np.arange(n)
    return idx[:, None] <= idx[None, :]


def lukasiewicz_chain(n: int) -> Quantale:
    """{0, 1/(n-1), ..., 1} with x.y = max(x + y - 1, 0)."""
    if n < 2:
        raise ValueError(f"lukasiewicz chain needs n >= 2, got {n}")
    labels, values = _chain_labels(n)
    idx = np.arange(n)
    product = np.maximum(idx[:, None] + idx[None, :] - (n - 1), 0)
    return build_from_tables(labels, _chain_order(n), product, 0, n - 1, name=f"lukasiewicz:{n}", values=values)


def godel_chain(n: int) -> Quantale:
    """{0, 1/(n-1), ..., 1} with x.y = min(x, y)."""
    if n < 2:
        raise ValueError(f"godel chain needs n >= 2, got {n}")
    labels, values = _chain_labels(n)
    idx = np.arange(n)
    product = np.minimum(idx[:, None], idx[None, :])
    return build_from_tables(labels, _chain_order(n), product, 0, n - 1, name=f"godel:{n}", values=values)


def _subset_label(members: Sequence[str]) -> str:
    return "{" + ",".join(members) + "}"


def boolean_algebra(k_atoms: int) -> Quantale:
    """Powerset of k atoms; product is intersection."""
    if k_atoms < 1:
        raise ValueError(f"boolean algebra needs k_atoms >= 1, got {k_atoms}")
    n = 1 << k_atoms
    masks = np.arange(n)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    product = masks[:, None] & masks[None, :]
    labels = []
    for m in range(n):
        if m == 0:
            labels.append("0")
        elif m == n - 1:
            labels.append("1")
        else:
            labels.append(_subset_label([str(i + 1) for i in range(k_atoms) if m >> i & 1]))
    return build_from_tables(labels, leq, product, 0, n - 1, name=f"boolean:{k_atoms}")


@dataclass(frozen=True)
class Poset:
    """A finite partial order; leq[i][j] means labels[i] <= labels[j]."""
    labels: Tuple[str, ...]
    leq: Tuple[Tuple[bool, ...], ...]

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(
            tuple(f"c{i + 1}" for i in range(n)),
            tuple(tuple(i <= j for j in range(n)) for i in range(n)),
        )

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(
            tuple(f"a{i + 1}" for i in range(n)),
            tuple(tuple(i == j for j in range(n)) for i in range(n)),
        )

    def validate(self) -> None:
        n = len(self.labels)
        rel = np.asarray(self.leq, dtype=bool).reshape(n, n) if n else np.zeros((0, 0), dtype=bool)
        if rel.shape != (n, n):
            raise InvalidPosetError(f"relation must be {n}x{n}")
        if not np.diag(rel).all():
            raise InvalidPosetError(f"not reflexive at {self.labels[int(np.argmin(np.diag(rel)))]}")
        anti = rel & rel.T & ~np.eye(n, dtype=bool)
        if anti.any():
            i, j = (int(v) for v in np.argwhere(anti)[0])
            raise InvalidPosetError(f"not antisymmetric at ({self.labels[i]}, {self.labels[j]})")
        composed = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
        if (composed & ~rel).any():
            i, j = (int(v) for v in np.argwhere(composed & ~rel)[0])
            raise InvalidPosetError(f"not transitive at ({self.labels[i]}, {self.labels[j]})")


def heyting_from_poset(poset: Poset, name: str = None) -> Quantale:
    """
    Down-sets of `poset` ordered by inclusion, with intersection as product.

    The carrier is listed by size, then by bitmask, so bottom is 0 and top is n-1.
    """
    poset.validate()
    m = len(poset.labels)
    if m > 16:
        raise InvalidPosetError(f"poset too large for down-set enumeration ({m} > 16 elements)")
    below = [sum(1 << j for j in range(m) if poset.leq[j][i]) for i in range(m)]
    downsets = [
        mask
        for mask in range(1 << m)
        if all(below[i] & ~mask == 0 for i in range(m) if mask >> i & 1)
    ]
    downsets.sort(key=lambda mask: (bin(mask).count("1"), mask))
    index = {mask: i for i, mask in enumerate(downsets)}
    arr = np.asarray(downsets)
    leq = (arr[:, None] & ~arr[None, :]) == 0
    product = np.vectorize(index.__getitem__)(arr[:, None] & arr[None, :]) if len(arr) > 1 else np.zeros((1, 1), dtype=int)
    full = (1 << m) - 1
    labels = []
    for mask in downsets:
        if mask == 0:
            labels.append("0")
        elif mask == full:
            labels.append("1")
        else:
            labels.append(_subset_label([poset.labels[i] for i in range(m) if mask >> i & 1]))
    logger.debug(f"poset with {m} elements has {len(downsets)} down-sets")
    return build_from_tables(
        labels, leq, product, 0, len(downsets) - 1, name=name or f"heyting:poset:{m}"
    )
