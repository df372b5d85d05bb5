"""
Vectorized evaluation of every definability template over a finite structure.

For each quantifier scope (j bound pool variables on top of x, y1..yp) the sweep
keeps one array per distinct valuation: entry i is the template's value under
the i-th assignment of stage members to the scope's variables (C order, the
newest variable fastest). Templates are built level by level exactly as the
enumerator builds them; templates whose arrays coincide are kept once, with the
first-found representative, and, for the subject x, the smallest number of free
occurrences among the templates that produced the array.

Several interpretations can be swept jointly; a row is then a tuple of arrays
and two templates merge only when they agree in every interpretation.
"""
from dataclasses import dataclass
import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from qlab.core.exceptions import BudgetExceededError
from qlab.formulas.ast import AtomKind, Bot, Exists, Forall, Formula, Imp, Neg, Or, Strong, Top, Weak, count_free_occurrences
from qlab.formulas.enumeration import POOL, SUBJECT, ConnectiveSet, basis, scope_vars
from qlab.quantales.base import Quantale
from .hfsets import HFSet

logger = logging.getLogger(__name__)

BATCH_CELLS = 1 << 24
ROW_CELLS = 1 << 28


@dataclass(frozen=True)
class Interpretation:
    """A finite structure: membership and equality values between carrier positions."""
    quantale: Quantale
    mem: np.ndarray
    eq: np.ndarray

    def __post_init__(self):
        if self.mem.shape != self.eq.shape or self.mem.ndim != 2 or self.mem.shape[0] != self.mem.shape[1]:
            raise ValueError("mem and eq must be square tables of one size")
        if self.quantale.size > 256:
            raise ValueError("sweeps need quantales with at most 256 elements")

    @property
    def size(self) -> int:
        return self.mem.shape[0]

    @classmethod
    def of_universe(cls, universe, members: Sequence[int]) -> "Interpretation":
        mem, eq = universe.atomic_tables(members)
        return cls(universe.quantale, mem, eq)

    @classmethod
    def classical(cls, quantale: Quantale, members: Sequence[HFSet]) -> "Interpretation":
        top, bottom = quantale.top, quantale.bottom
        mem = np.array([[top if a in b else bottom for b in members] for a in members], dtype=np.uint8)
        eq = np.array([[top if a == b else bottom for b in members] for a in members], dtype=np.uint8)
        m = len(members)
        return cls(quantale, mem.reshape(m, m), eq.reshape(m, m))


class _Ops:
    def __init__(self, q: Quantale):
        self.bottom = np.uint8(q.bottom)
        self.top = np.uint8(q.top)
        self.binary = {
            Strong: q.product_table.astype(np.uint8),
            Weak: q.meet_table.astype(np.uint8),
            Or: q.join_table.astype(np.uint8),
            Imp: q.residuum_table.astype(np.uint8),
        }
        self.neg = q.neg_table.astype(np.uint8)


class _Scope:
    def __init__(self, bound: int, variables: Tuple[str, ...], sizes: Sequence[int]):
        self.bound = bound
        self.variables = variables
        self.cells = [m ** len(variables) for m in sizes]
        self.rows: List[Formula] = []
        self.counts = np.zeros(0, dtype=np.int64)
        self.data = [np.zeros((0, c), dtype=np.uint8) for c in self.cells]
        self.index: Dict[bytes, int] = {}
        self.frontier = np.zeros(0, dtype=np.intp)
        self.depth = 0

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DefinableColumn:
    """A function on the carrier defined by template `row` at parameter positions `params`."""
    values: Tuple[int, ...]
    row: int
    params: Tuple[int, ...]


def _chunks(indices: np.ndarray, size: int) -> Iterator[np.ndarray]:
    for start in range(0, len(indices), max(1, size)):
        yield indices[start:start + max(1, size)]


class TemplateSweep:
    """
    Semantic closure of the template grammar over one or more interpretations.

    Args:
        interpretations: Structures to evaluate in (jointly)
        max_params: Number of parameter variables y1..yp
        connectives: Connective set of the templates
        batch_cells: Largest candidate block evaluated at once
    """

    def __init__(
        self,
        interpretations: Sequence[Interpretation],
        max_params: int,
        connectives: ConnectiveSet = ConnectiveSet.RESIDUATED,
        batch_cells: int = BATCH_CELLS,
    ):
        if not interpretations:
            raise ValueError("at least one interpretation is required")
        self.interpretations = list(interpretations)
        self.max_params = max_params
        self.connectives = ConnectiveSet(connectives)
        self.batch_cells = batch_cells
        self._ops = [_Ops(i.quantale) for i in self.interpretations]
        self._sizes = [i.size for i in self.interpretations]
        self.scopes: List[_Scope] = []
        self.depth = -1

    # Results at the outer scope

    @property
    def rows(self) -> List[Formula]:
        return self.scopes[0].rows if self.scopes else []

    @property
    def counts(self) -> np.ndarray:
        return self.scopes[0].counts

    def arrays(self, interp: int = 0) -> np.ndarray:
        """(rows, m^(1+p)) valuations of the outer-scope templates in one interpretation."""
        return self.scopes[0].data[interp]

    def shaped(self, interp: int = 0) -> np.ndarray:
        m = self._sizes[interp]
        return self.arrays(interp).reshape((len(self.rows),) + (m,) * (1 + self.max_params))

    def run(self, max_depth: int) -> "TemplateSweep":
        while self.depth < max_depth:
            self.deepen()
        return self

    def deepen(self) -> int:
        """Raise the depth bound by one; returns the number of new outer-scope rows."""
        target = self.depth + 1
        before = len(self.rows)
        for j in range(min(target, len(POOL)), -1, -1):
            if j == len(self.scopes):
                self.scopes.append(self._atoms(j))
            else:
                self._advance(j)
        self.depth = target
        added = len(self.rows) - before
        logger.debug(
            f"sweep depth {target}: {len(self.rows)} distinct template valuation(s) (+{added})"
        )
        return added

    # Construction

    def _coords(self, nvars: int, m: int) -> np.ndarray:
        if m == 0:
            return np.zeros((nvars, 0), dtype=np.intp)
        return np.indices((m,) * nvars).reshape(nvars, -1)

    def _atoms(self, bound: int) -> _Scope:
        variables = scope_vars(self.max_params, bound)
        scope = _Scope(bound, variables, self._sizes)
        total = sum(scope.cells)
        if total > self.batch_cells:
            raise BudgetExceededError(total, self.batch_cells)
        formulas = basis(variables)
        position = {v: i for i, v in enumerate(variables)}
        arrays = []
        for interp, ops, m, cells in zip(self.interpretations, self._ops, self._sizes, scope.cells):
            coords = self._coords(len(variables), m)
            block = np.empty((len(formulas), cells), dtype=np.uint8)
            for r, f in enumerate(formulas):
                if isinstance(f, Bot):
                    block[r] = ops.bottom
                elif isinstance(f, Top):
                    block[r] = ops.top
                else:
                    table = interp.mem if f.kind == AtomKind.MEM else interp.eq
                    block[r] = table[coords[position[f.lhs.name]], coords[position[f.rhs.name]]]
            arrays.append(block)
        counts = np.array([count_free_occurrences(f, SUBJECT) for f in formulas], dtype=np.int64)
        touched = self._merge(scope, arrays, counts, lambda i: formulas[i])
        scope.frontier = np.array(sorted(touched), dtype=np.intp)
        return scope

    def _advance(self, j: int) -> None:
        scope = self.scopes[j]
        n0 = len(scope)
        reps = list(scope.rows)
        counts = scope.counts.copy()
        data = [d[:n0] for d in scope.data]
        frontier = scope.frontier
        touched: set = set()
        cells = sum(scope.cells)

        # negation
        for chunk in _chunks(frontier, self.batch_cells // max(1, cells)):
            arrays = [ops.neg[d[chunk]] for ops, d in zip(self._ops, data)]
            touched |= self._merge(scope, arrays, counts[chunk], lambda i, c=chunk: Neg(reps[c[i]]))

        # binary connectives; commutative ones only need frontier-on-the-left
        everything = np.arange(n0, dtype=np.intp)
        rest = np.setdiff1d(everything, frontier)
        for op in self.connectives.binary:
            blocks = [(frontier, everything)]
            if op is Imp:
                blocks.append((rest, frontier))
            for lefts, rights in blocks:
                if not len(lefts) or not len(rights):
                    continue
                right_size = max(1, min(len(rights), self.batch_cells // max(1, cells)))
                for right_chunk in _chunks(rights, right_size):
                    left_size = max(1, self.batch_cells // max(1, cells * len(right_chunk)))
                    for left_chunk in _chunks(lefts, left_size):
                        arrays = []
                        for ops, d in zip(self._ops, data):
                            table = ops.binary[op]
                            block = table[d[left_chunk][:, None, :], d[right_chunk][None, :, :]]
                            arrays.append(block.reshape(len(left_chunk) * len(right_chunk), -1))
                        li = np.repeat(left_chunk, len(right_chunk))
                        ri = np.tile(right_chunk, len(left_chunk))
                        pair_counts = counts[li] + counts[ri]
                        touched |= self._merge(
                            scope,
                            arrays,
                            pair_counts,
                            lambda i, li=li, ri=ri, op=op: op(reps[li[i]], reps[ri[i]]),
                        )

        # quantifiers over the next pool variable
        if j + 1 < len(self.scopes):
            inner = self.scopes[j + 1]
            var = POOL[j]
            inner_reps = list(inner.rows)
            inner_counts = inner.counts.copy()
            inner_cells = sum(inner.cells)
            for quantifier in (Forall, Exists):
                for chunk in _chunks(inner.frontier, self.batch_cells // max(1, inner_cells)):
                    arrays = []
                    for ops, m, cells_j, d in zip(self._ops, self._sizes, scope.cells, inner.data):
                        folded = d[chunk].reshape(len(chunk), cells_j, m)
                        fill = ops.top if quantifier is Forall else ops.bottom
                        table = ops.binary[Weak] if quantifier is Forall else ops.binary[Or]
                        result = np.full((len(chunk), cells_j), fill, dtype=np.uint8)
                        for t in range(m):
                            result = table[result, folded[:, :, t]]
                        arrays.append(result)
                    touched |= self._merge(
                        scope,
                        arrays,
                        inner_counts[chunk],
                        lambda i, c=chunk, qf=quantifier: qf(var, inner_reps[c[i]]),
                    )

        scope.frontier = np.array(sorted(touched), dtype=np.intp)
        scope.depth += 1

    def _merge(
        self,
        scope: _Scope,
        arrays: List[np.ndarray],
        counts: np.ndarray,
        build: Callable[[int], Formula],
    ) -> set:
        """Fold a candidate block into the scope; returns rows that are new or got a smaller count."""
        size = len(counts)
        if size == 0:
            return set()
        keys = np.concatenate(arrays, axis=1) if len(arrays) > 1 else arrays[0]
        if keys.shape[1] == 0:
            first = np.zeros(1, dtype=np.intp)
            inverse = np.zeros(size, dtype=np.intp)
        else:
            _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
            inverse = inverse.reshape(-1)
        order = np.lexsort((np.arange(size), counts, inverse))
        starts = np.r_[True, inverse[order][1:] != inverse[order][:-1]]
        best = order[starts]

        touched = set()
        fresh: List[int] = []
        for g in np.argsort(first, kind="stable"):
            key = keys[first[g]].tobytes()
            candidate = int(best[g])
            count = int(counts[candidate])
            existing = scope.index.get(key)
            if existing is None:
                row = len(scope.rows)
                scope.index[key] = row
                scope.rows.append(build(candidate))
                fresh.append(candidate)
                touched.add(row)
            elif count < scope.counts[existing]:
                scope.counts[existing] = count
                scope.rows[existing] = build(candidate)
                touched.add(existing)
        if fresh:
            picked = np.array(fresh, dtype=np.intp)
            new_total = (len(scope.rows)) * max(1, sum(scope.cells))
            if new_total > ROW_CELLS:
                raise BudgetExceededError(new_total, ROW_CELLS)
            scope.counts = np.concatenate([scope.counts, counts[picked]])
            scope.data = [np.concatenate([d, a[picked]]) for d, a in zip(scope.data, arrays)]
        return touched

    # Readouts

    def definable_columns(self, interp: int = 0) -> List[DefinableColumn]:
        """Distinct functions a -> [phi(a, b)] over all outer templates and parameter tuples b."""
        m = self._sizes[interp]
        n = len(self.rows)
        if m == 0 or n == 0:
            return []
        p = self.max_params
        width = m ** p
        cols = self.arrays(interp).reshape(n, m, width).transpose(0, 2, 1).reshape(n * width, m)
        _, first = np.unique(cols, axis=0, return_index=True)
        out = []
        for idx in np.sort(first):
            row, flat = divmod(int(idx), width)
            params = tuple(int(v) for v in np.unravel_index(flat, (m,) * p)) if p else ()
            out.append(DefinableColumn(tuple(int(v) for v in cols[idx]), row, params))
        return out


def saturate(
    sweep: TemplateSweep,
    start_depth: int,
    measure: Callable[[TemplateSweep], int],
    max_depth: int,
) -> Tuple[int, bool]:
    """
    Deepen from start_depth until `measure` stops growing or max_depth is reached.

    Returns:
        (depth reached, whether a fixed point was found)
    """
    sweep.run(start_depth)
    current = measure(sweep)
    while sweep.depth < max_depth:
        sweep.deepen()
        grown = measure(sweep)
        if grown == current:
            return sweep.depth, True
        current = grown
    return sweep.depth, False


def find_row(sweep: TemplateSweep, formula: Formula) -> Optional[int]:
    """Row whose representative is `formula`, if it was kept."""
    for i, f in enumerate(sweep.rows):
        if f == formula:
            return i
    return None
