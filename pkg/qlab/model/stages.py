"""
Stages of the hierarchies, the V^Q stage builder, the hat embedding and stage dumps.
"""
from dataclasses import dataclass, field
from itertools import combinations, product as cartesian
import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple, Union

from qlab.config import get_settings
from qlab.core.exceptions import BudgetExceededError, QlabError, QuantaleSourceError
from qlab.quantales.base import QElem, Quantale
from qlab.schemas.def_config import DefConfig
from qlab.schemas.run_spec import HierarchyTag
from .hfsets import HFSet
from .universe import Universe, VElem

logger = logging.getLogger(__name__)

Member = Union[int, HFSet]


@dataclass
class Stage:
    """One level of a hierarchy: the ordinal label and its members in construction order."""
    label: int
    members: Tuple[Member, ...]
    hierarchy: HierarchyTag
    config: Optional[DefConfig] = None
    value_set: Optional[Tuple[QElem, ...]] = None
    depth_reached: Optional[int] = None
    saturated: Optional[bool] = None
    truncated: bool = False
    _index: Dict[Member, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.members = tuple(self.members)
        self._index = {m: i for i, m in enumerate(self.members)}
        if len(self._index) != len(self.members):
            raise ValueError(f"stage {self.label} has duplicate members")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, member: Member) -> bool:
        return member in self._index

    def position(self, member: Member) -> int:
        return self._index[member]

    def member_set(self) -> frozenset:
        return frozenset(self.members)


def _check_budget(requested: int, budget: int, partial) -> None:
    if requested > budget:
        logger.error(f"❌ budget exceeded: {requested} > {budget}")
        raise BudgetExceededError(requested, budget, partial)


def build_v_stage(
    q: Quantale,
    alpha: int,
    value_set: Optional[Sequence[QElem]] = None,
    universe: Optional[Universe] = None,
    budget: Optional[int] = None,
) -> List[Stage]:
    """
    Build V_0 .. V_alpha over q with ran(f) restricted to value_set.

    Args:
        q: Quantale of truth values
        alpha: Last stage to build
        value_set: Allowed entry values; the full carrier when omitted
        universe: Universe to intern into; a fresh one when omitted
        budget: Element cap; QLAB_BUDGET when omitted

    Returns:
        List of stages, index = ordinal label

    Raises:
        BudgetExceededError: The next stage would exceed the budget; `partial`
            holds the stages built so far
    """
    if universe is None:
        universe = Universe(q)
    budget = get_settings().budget if budget is None else budget
    values = tuple(sorted(set(q.elements() if value_set is None else (int(v) for v in value_set))))
    if not values:
        raise ValueError("value_set must be nonempty")
    for v in values:
        q.label(v)

    stages = [Stage(0, (), HierarchyTag.V, value_set=values)]
    for k in range(alpha):
        previous = stages[-1].members
        requested = (1 + len(values)) ** len(previous)
        _check_budget(requested, budget, stages)
        members: List[int] = []
        for size in range(len(previous) + 1):
            for domain in combinations(previous, size):
                for image in cartesian(values, repeat=size):
                    members.append(universe.intern(zip(domain, image)).id)
        stages.append(Stage(k + 1, tuple(members), HierarchyTag.V, value_set=values))
        logger.info(f"V_{k + 1} over {q.name}: {len(members)} element(s)")
    return stages


def hat(x: HFSet, u: Universe, _memo: Optional[Dict[int, VElem]] = None) -> VElem:
    """Image of a classical set: every member's hat mapped to top."""
    memo = _memo if _memo is not None else {}
    if x.code not in memo:
        memo[x.code] = u.intern({hat(c, u, memo).id: u.quantale.top for c in x.children})
    return memo[x.code]


def two_valued_violations(stages: Sequence[Stage], u: Universe) -> List[Dict[str, object]]:
    """(stage, element, key, value) for every entry off {bottom, top}."""
    q = u.quantale
    found = []
    for stage in stages:
        for member in stage.members:
            for key, value in u.element(member).entries:
                if not q.is_two_valued(value):
                    found.append({
                        "stage": stage.label,
                        "element": f"#{member}",
                        "key": f"#{key}",
                        "value": q.labels[value],
                    })
    return found


# Dumps

_ELEMENT_LINE = re.compile(r"^(\d+)\s+(\d+)\s+\{(.*)\}$")
_STAGE_LINE = re.compile(r"^stage\s+(\d+):\s*(.*)$")


def dump_stages(
    stages: Sequence[Stage],
    universe: Optional[Universe],
    hierarchy: HierarchyTag,
    quantale_name: str,
    alpha: int,
    config: Optional[DefConfig] = None,
) -> str:
    """Text dump: header, element lines in id order, then one member line per stage."""
    lines = [
        "# qlab stage dump v1",
        f"# hierarchy: {hierarchy.value}",
        f"# quantale: {quantale_name}",
        f"# alpha: {alpha}",
        f"# cfg: {config if config is not None else 'none'}",
    ]
    if hierarchy == HierarchyTag.CLASSICAL_L:
        seen = sorted({m for stage in stages for m in stage.members})
        for s in seen:
            lines.append(f"{s.code} {s.rank} {{{','.join(f'{c.code}:1' for c in s.children)}}}")
        for stage in stages:
            lines.append(f"stage {stage.label}: {' '.join(str(m.code) for m in stage.members)}".rstrip())
        return "\n".join(lines) + "\n"

    used = set()
    for stage in stages:
        for member in stage.members:
            used.add(member)
    closure = set()
    pending = list(used)
    while pending:
        elem = universe.element(pending.pop())
        if elem.id in closure:
            continue
        closure.add(elem.id)
        pending.extend(elem.domain)
    # every id up to the largest one used, so the dump reloads with the same ids
    for elem_id in range(max(closure) + 1 if closure else 0):
        elem = universe.element(elem_id)
        lines.append(f"{elem.id} {elem.rank} {universe.describe(elem)}")
    for stage in stages:
        lines.append(f"stage {stage.label}: {' '.join(str(m) for m in stage.members)}".rstrip())
    return "\n".join(lines) + "\n"


def _split_entries(body: str) -> List[str]:
    """Split `k:label,...` at top-level commas; labels may contain braces and commas."""
    items, depth, current = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            items.append("".join(current).strip())
            current = []
            continue
        depth += {"{": 1, "}": -1}.get(ch, 0)
        current.append(ch)
    if "".join(current).strip():
        items.append("".join(current).strip())
    return [item for item in items if item]


def load_dump(text: str, quantale: Quantale) -> Tuple[Universe, List[Stage], Dict[str, str]]:
    """
    Rebuild a universe and its stages from a dump.

    Elements are re-interned in id order; ids in the file must be dense from 0 so
    they coincide with the rebuilt ids.
    """
    universe = Universe(quantale)
    header: Dict[str, str] = {}
    stages: List[Stage] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if ":" in line:
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
                if header.get("hierarchy") == HierarchyTag.CLASSICAL_L.value:
                    raise QuantaleSourceError("dump", "classical L dumps hold HF sets, not universe elements")
            continue
        match = _ELEMENT_LINE.match(line)
        if match:
            elem_id = int(match.group(1))
            entries = []
            body = match.group(3).strip()
            for item in _split_entries(body):
                key, _, label = item.partition(":")
                try:
                    entries.append((int(key), quantale.element(label)))
                except (ValueError, QlabError) as e:
                    raise QuantaleSourceError("dump", f"bad entry {item!r}: {e}", line=number) from e
            elem = universe.intern(entries)
            if elem.id != elem_id:
                raise QuantaleSourceError("dump", f"element ids must be dense, got {elem_id}", line=number)
            continue
        match = _STAGE_LINE.match(line)
        if match:
            ids = tuple(int(t) for t in match.group(2).split())
            for elem_id in ids:
                universe.resolve(elem_id)
            tag = HierarchyTag(header.get("hierarchy", HierarchyTag.V.value))
            stages.append(Stage(int(match.group(1)), ids, tag))
            continue
        raise QuantaleSourceError("dump", f"unrecognized line {line!r}", line=number)
    return universe, stages, header
