"""
The constructible hierarchies over a quantale and classical L at finite stages.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from qlab.config import get_settings
from qlab.core.exceptions import BudgetExceededError
from qlab.model.evaluation import two_element_boolean
from qlab.model.hfsets import HFSet, powerset
from qlab.model.stages import Stage, two_valued_violations
from qlab.model.sweep import Interpretation, TemplateSweep, saturate
from qlab.model.universe import Universe
from qlab.quantales.base import Quantale
from qlab.schemas.def_config import DefConfig
from qlab.schemas.report import CheckStatus, Report, new_report
from qlab.schemas.run_spec import HierarchyTag
from .definability import DefResult, Definer, def_strong, def_weak

logger = logging.getLogger(__name__)


@dataclass
class Hierarchy:
    """Stages 0..alpha of one hierarchy plus the universe their ids live in."""
    tag: HierarchyTag
    stages: List[Stage]
    universe: Optional[Universe] = None
    config: Optional[DefConfig] = None
    definers: Dict[object, Definer] = field(default_factory=dict)

    def __getitem__(self, label: int) -> Stage:
        return self.stages[label]

    def __len__(self) -> int:
        return len(self.stages)

    def __iter__(self) -> Iterator[Stage]:
        return iter(self.stages)

    @property
    def alpha(self) -> int:
        return len(self.stages) - 1

    @property
    def saturated(self) -> bool:
        return all(s.saturated for s in self.stages[1:])

    def stage_of(self, member) -> Optional[int]:
        """Least label whose stage contains `member`."""
        for stage in self.stages:
            if member in stage:
                return stage.label
        return None


def _build(
    q: Quantale,
    alpha: int,
    cfg: DefConfig,
    tag: HierarchyTag,
    universe: Optional[Universe],
    budget: Optional[int],
) -> Hierarchy:
    u = Universe(q) if universe is None else universe
    origin = Stage(0, (), tag, config=cfg, depth_reached=cfg.max_depth, saturated=True)
    hierarchy = Hierarchy(tag, [origin], u, cfg)
    operator = def_weak if tag == HierarchyTag.FRAK_L else def_strong
    for k in range(alpha):
        previous = hierarchy.stages[-1]
        try:
            result: DefResult = operator(u, previous, cfg, budget)
        except BudgetExceededError as e:
            e.partial = hierarchy
            raise
        members = list(result.ids)
        if tag == HierarchyTag.BB_L:
            fresh = [m for m in members if m not in previous]
            members = list(previous.members) + fresh
        hierarchy.definers.update({i: d for i, d in result.definers.items() if i not in hierarchy.definers})
        stage = Stage(
            k + 1,
            tuple(members),
            tag,
            config=cfg,
            depth_reached=result.depth_reached,
            saturated=result.saturated if cfg.saturate else None,
        )
        hierarchy.stages.append(stage)
        logger.info(
            f"{tag.value}_{k + 1} over {q.name}: {len(stage)} member(s), "
            f"depth {stage.depth_reached}{' (saturated)' if stage.saturated else ''}"
        )
    return hierarchy


def build_frak_L(
    q: Quantale,
    alpha: int,
    cfg: DefConfig,
    universe: Optional[Universe] = None,
    budget: Optional[int] = None,
) -> Hierarchy:
    """
    Weak constructible hierarchy: each successor stage is def_weak of the previous one, no union.

    Raises:
        BudgetExceededError: `partial` holds the hierarchy built so far
    """
    return _build(q, alpha, cfg, HierarchyTag.FRAK_L, universe, budget)


def build_bb_L(
    q: Quantale,
    alpha: int,
    cfg: DefConfig,
    universe: Optional[Universe] = None,
    budget: Optional[int] = None,
) -> Hierarchy:
    """Strong constructible hierarchy: def_strong of the previous stage united with it."""
    return _build(q, alpha, cfg, HierarchyTag.BB_L, universe, budget)


def classical_sweep(members: Sequence[HFSet], cfg: DefConfig) -> Tuple[TemplateSweep, bool]:
    """Template sweep over (members, ∈) read in the two-element Boolean quantale."""
    interpretation = Interpretation.classical(two_element_boolean(), members)
    sweep = TemplateSweep([interpretation], cfg.max_params, cfg.connectives)
    if not cfg.saturate:
        return sweep.run(cfg.max_depth), False
    cap = max(cfg.max_depth, get_settings().max_saturation_depth)
    _, fixed = saturate(sweep, cfg.max_depth, lambda s: len(s.definable_columns()), cap)
    return sweep, fixed


def build_classical_L(alpha: int, cfg: DefConfig, budget: Optional[int] = None) -> Hierarchy:
    """
    Classical L_0..L_alpha over hereditarily finite sets.

    L_{k+1} is L_k followed by the subsets of L_k definable over (L_k, ∈) within cfg.
    Definers are kept per set (formula and parameter sets) for the j map.
    """
    budget = get_settings().budget if budget is None else budget
    top = two_element_boolean().top
    tag = HierarchyTag.CLASSICAL_L
    origin = Stage(0, (), tag, config=cfg, depth_reached=cfg.max_depth, saturated=True)
    hierarchy = Hierarchy(tag, [origin], None, cfg)
    for k in range(alpha):
        previous = hierarchy.stages[-1]
        members = list(previous.members)
        if not members:
            subsets = [HFSet()]
            depth, fixed = cfg.max_depth, True
        else:
            sweep, fixed = classical_sweep(members, cfg)
            depth = sweep.depth
            columns = sweep.definable_columns()
            if len(columns) > budget:
                raise BudgetExceededError(len(columns), budget, hierarchy)
            subsets = []
            for column in columns:
                subset = HFSet(members[a] for a, v in enumerate(column.values) if v == top)
                subsets.append(subset)
                hierarchy.definers.setdefault(
                    subset, Definer(sweep.rows[column.row], tuple(members[p].code for p in column.params))
                )
        seen = set(members)
        for subset in subsets:
            if subset not in seen:
                seen.add(subset)
                members.append(subset)
        stage = Stage(
            k + 1, tuple(members), tag, config=cfg, depth_reached=depth, saturated=fixed if cfg.saturate else None
        )
        hierarchy.stages.append(stage)
        logger.info(f"L_{k + 1}: {len(stage)} member(s)")
    return hierarchy


def check_two_valued(
    stages: Sequence[Stage],
    u: Universe,
    report: Optional[Report] = None,
    soft: bool = False,
) -> Report:
    """
    Every value of every member is bottom or top.

    soft turns a violation into an info record (negative controls on V stages).
    """
    if report is None:
        report = new_report("two_valued", u.quantale.name)
    found = two_valued_violations(stages, u)
    tag = stages[0].hierarchy.value if stages else "?"
    if found and soft:
        report.add(f"two_valued.{tag}", CheckStatus.INFO, None, "values off {bottom, top} present", found)
        return report
    report.expect(f"two_valued.{tag}", found, detail=f"{len(stages)} stage(s)")
    return report


def check_powerset_oracle(hierarchy: Hierarchy, report: Optional[Report] = None) -> Report:
    """Informational: does L_{k+1} equal the powerset of L_k at each built stage."""
    if report is None:
        report = new_report("classical_L")
    for k in range(hierarchy.alpha):
        previous = hierarchy[k].members
        full = set(powerset(previous)) if len(previous) <= 12 else None
        if full is None:
            report.add("classical_L.powerset", CheckStatus.INFO, k + 1, "stage too large for the powerset oracle")
            continue
        built = hierarchy[k + 1].member_set()
        missing = sorted(full - built)
        if missing:
            detail = f"{len(missing)} subset(s) not definable within cfg"
        else:
            detail = "equals the powerset of the previous stage"
        report.add(
            "classical_L.powerset",
            CheckStatus.INFO,
            k + 1,
            detail,
            [{"subset": str(s)} for s in missing],
        )
    return report


def check_classical_ranks(hierarchy: Hierarchy, report: Optional[Report] = None) -> Report:
    """Every member of L_k has rank <= k."""
    if report is None:
        report = new_report("classical_L")
    found = [
        {"stage": stage.label, "set": str(s), "rank": s.rank}
        for stage in hierarchy
        for s in stage.members
        if s.rank > stage.label
    ]
    report.expect("classical_L.rank_bound", found)
    return report

