"""
The weak and strong definability operators over a built stage.

A definable function assigns each a in a domain D the value of one template
phi(a, b) with parameters b from the stage, quantifiers ranging over the stage.
The strong operator fixes D to the whole stage; the weak one also allows proper
subdomains.
"""
from dataclasses import dataclass, field
from itertools import combinations
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from qlab.config import get_settings
from qlab.core.exceptions import BudgetExceededError
from qlab.formulas.ast import Formula
from qlab.model.stages import Stage
from qlab.model.sweep import DefinableColumn, Interpretation, TemplateSweep, saturate
from qlab.model.universe import Universe
from qlab.schemas.def_config import DefConfig

logger = logging.getLogger(__name__)


@dataclass
class Definer:
    """The first template and parameter tuple found to define a function."""
    formula: Formula
    params: Tuple[int, ...]

    def as_dict(self) -> Dict[str, object]:
        return {"formula": str(self.formula), "params": [f"#{p}" for p in self.params]}


@dataclass
class DefResult:
    """Output of one definability step: interned ids in discovery order plus how far the sweep went."""
    ids: Tuple[int, ...]
    depth_reached: int
    saturated: bool
    definers: Dict[int, Definer] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, elem_id: int) -> bool:
        return elem_id in self.ids


def sweep_stage(u: Universe, members: Sequence[int], cfg: DefConfig) -> Tuple[TemplateSweep, bool]:
    """
    Sweep the templates of `cfg` over one stage.

    With cfg.saturate the depth grows past cfg.max_depth until a step adds no new
    definable function, up to the configured saturation cap.

    Returns:
        (sweep, whether a fixed point was reached)
    """
    sweep = TemplateSweep([Interpretation.of_universe(u, members)], cfg.max_params, cfg.connectives)
    if not cfg.saturate:
        sweep.run(cfg.max_depth)
        return sweep, False
    cap = max(cfg.max_depth, get_settings().max_saturation_depth)
    _, fixed = saturate(sweep, cfg.max_depth, lambda s: len(s.definable_columns()), cap)
    if not fixed:
        logger.warning(f"⚠️ saturation stopped at depth {sweep.depth} without a fixed point")
    return sweep, fixed


def weak_domains(members: Sequence[int], subset_limit: int) -> List[Tuple[int, ...]]:
    """Positions of the subdomains D: all subsets for small stages, else M and M minus one member."""
    m = len(members)
    if m <= subset_limit:
        return [d for size in range(m, -1, -1) for d in combinations(range(m), size)]
    full = tuple(range(m))
    return [full] + [tuple(i for i in full if i != drop) for drop in range(m)]


def _define(
    u: Universe,
    stage: Stage,
    cfg: DefConfig,
    domains: Optional[List[Tuple[int, ...]]],
    budget: Optional[int],
) -> DefResult:
    members = stage.members
    if not members:
        empty = u.empty.id
        return DefResult((empty,), cfg.max_depth, True, {})

    budget = get_settings().budget if budget is None else budget
    sweep, fixed = sweep_stage(u, members, cfg)
    columns: List[DefinableColumn] = sweep.definable_columns()
    full = tuple(range(len(members)))
    domains = domains or [full]
    requested = len(columns) * len(domains)
    if requested > budget:
        logger.error(f"❌ stage {stage.label}: {requested} candidate function(s) exceed budget {budget}")
        raise BudgetExceededError(requested, budget)

    ids: List[int] = []
    definers: Dict[int, Definer] = {}
    for domain in domains:
        for column in columns:
            elem = u.intern({members[a]: column.values[a] for a in domain})
            if elem.id not in definers:
                definers[elem.id] = Definer(sweep.rows[column.row], tuple(members[p] for p in column.params))
                ids.append(elem.id)
    logger.debug(
        f"stage {stage.label}: {len(columns)} definable column(s) over {len(domains)} domain(s), "
        f"{len(ids)} function(s)"
    )
    return DefResult(tuple(ids), sweep.depth, fixed, definers)


def def_weak(u: Universe, M: Stage, cfg: DefConfig, budget: Optional[int] = None) -> DefResult:
    """
    Weakly definable functions over M: domain any configured subset of M.

    Args:
        u: Universe holding M's members
        M: Stage the quantifiers and parameters range over
        cfg: Template bounds
        budget: Cap on candidate functions; QLAB_BUDGET when omitted

    Returns:
        DefResult; over the empty stage this is just the empty function

    Raises:
        BudgetExceededError: Too many candidate functions
    """
    domains = weak_domains(M.members, get_settings().weak_subset_limit)
    return _define(u, M, cfg, domains, budget)


def def_strong(u: Universe, M: Stage, cfg: DefConfig, budget: Optional[int] = None) -> DefResult:
    """Strongly definable functions over M: domain exactly M."""
    return _define(u, M, cfg, None, budget)
