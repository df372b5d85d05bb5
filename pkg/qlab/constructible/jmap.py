"""
The stage-wise map j from classical L into the strong constructible hierarchy.

For X first appearing in L_{k+1}, defined over (L_k, ∈) by phi with parameters b,
j(X) is the function c -> [phi(c, j(b))] on the members of the k-th strong stage.
Both sides are swept jointly, so every defining pair found within the bounds is
compared, not only the first one.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from qlab.core.exceptions import WellDefinednessError
from qlab.model.evaluation import two_element_boolean
from qlab.model.hfsets import HFSet
from qlab.model.stages import Stage
from qlab.model.sweep import Interpretation, TemplateSweep
from qlab.schemas.def_config import DefConfig
from qlab.schemas.report import Report, new_report
from .definability import Definer
from .hierarchy import Hierarchy

logger = logging.getLogger(__name__)


@dataclass
class JMap:
    """j as built: image ids, the defining pair used, and the classical stage of first appearance."""
    pairs: Dict[HFSet, int] = field(default_factory=dict)
    defining: Dict[HFSet, Definer] = field(default_factory=dict)
    stage_of: Dict[HFSet, int] = field(default_factory=dict)

    def __getitem__(self, x: HFSet) -> int:
        return self.pairs[x]

    def __contains__(self, x: HFSet) -> bool:
        return x in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[HFSet]:
        return iter(self.pairs)

    def get(self, x: HFSet) -> Optional[int]:
        return self.pairs.get(x)

    def as_rows(self) -> List[Dict[str, object]]:
        return [
            {"set": str(x), "image": f"#{self.pairs[x]}", "stage": self.stage_of[x]}
            for x in sorted(self.pairs)
        ]


def joint_sweep(
    classical: Sequence[HFSet],
    strong: Stage,
    universe,
    cfg: DefConfig,
    depth: Optional[int] = None,
) -> TemplateSweep:
    """Templates evaluated at once in (L_k, ∈) and in the strong stage; rows agree in both."""
    interpretations = [
        Interpretation.classical(two_element_boolean(), classical),
        Interpretation.of_universe(universe, strong.members),
    ]
    sweep = TemplateSweep(interpretations, cfg.max_params, cfg.connectives)
    return sweep.run(cfg.max_depth if depth is None else depth)


def _image_positions(
    jmap: JMap, classical: Sequence[HFSet], strong: Stage
) -> Tuple[Optional[np.ndarray], List[str]]:
    missing = [str(x) for x in classical if jmap.get(x) not in strong]
    if missing:
        return None, missing
    return np.array([strong.position(jmap[x]) for x in classical], dtype=np.intp), []


def _param_index(jpos: np.ndarray, mc: int, mq: int, p: int) -> np.ndarray:
    """Flat strong-side parameter index for every classical parameter tuple."""
    if p == 0:
        return np.zeros(1, dtype=np.intp)
    tuples = np.indices((mc,) * p).reshape(p, -1)
    return np.ravel_multi_index(tuple(jpos[tuples]), (mq,) * p)


def build_j(classical: Hierarchy, strong: Hierarchy, cfg: Optional[DefConfig] = None) -> JMap:
    """
    Build j stage by stage.

    Args:
        classical: Classical L hierarchy
        strong: Strong constructible hierarchy over a quantale (its universe holds the images)
        cfg: Template bounds; the strong hierarchy's when omitted

    Returns:
        JMap over every classical set that j reaches

    Raises:
        WellDefinednessError: Two defining pairs of one set induce different functions
    """
    cfg = cfg or strong.config
    u = strong.universe
    top_c = two_element_boolean().top
    jmap = JMap()
    for k in range(min(classical.alpha, strong.alpha)):
        previous = classical[k].members
        fresh = [x for x in classical[k + 1].members if x not in classical[k]]
        if not previous:
            for x in fresh:
                jmap.pairs[x] = u.empty.id
                jmap.stage_of[x] = k + 1
            continue
        jpos, missing = _image_positions(jmap, previous, strong[k])
        if jpos is None:
            logger.warning(f"⚠️ j leaves the strong stage {k}: {missing}; stopping")
            break

        reached = (classical[k + 1].depth_reached, strong[k + 1].depth_reached, cfg.max_depth)
        depth = max(d for d in reached if d is not None)
        sweep = joint_sweep(previous, strong[k], u, cfg, depth)
        n, p = len(sweep.rows), cfg.max_params
        mc, mq = len(previous), len(strong[k])
        width = mc ** p
        c_cols = sweep.arrays(0).reshape(n, mc, width).transpose(0, 2, 1).reshape(-1, mc)
        q_sel = sweep.arrays(1).reshape(n, mq, mq ** p)[:, :, _param_index(jpos, mc, mq, p)]
        q_cols = q_sel.transpose(0, 2, 1).reshape(-1, mq)
        _, first = np.unique(np.concatenate([c_cols, q_cols], axis=1), axis=0, return_index=True)

        chosen: Dict[HFSet, Tuple[int, bytes]] = {}
        conflicts: List[Dict[str, object]] = []
        wanted = set(fresh)

        def definer(index: int) -> Definer:
            row, flat = divmod(int(index), width)
            params = np.unravel_index(flat, (mc,) * p) if p else ()
            return Definer(sweep.rows[row], tuple(previous[int(i)].code for i in params))

        for index in np.sort(first):
            x = HFSet(previous[a] for a in np.flatnonzero(c_cols[index] == top_c))
            if x not in wanted:
                continue
            key = q_cols[index].tobytes()
            if x not in chosen:
                chosen[x] = (int(index), key)
            elif chosen[x][1] != key:
                conflicts.append({
                    "set": str(x),
                    "first": definer(chosen[x][0]).as_dict(),
                    "second": definer(index).as_dict(),
                })
        if conflicts:
            logger.error(f"❌ j is not well defined at stage {k + 1}")
            raise WellDefinednessError(conflicts)

        for x in fresh:
            if x not in chosen:
                logger.warning(f"⚠️ no defining pair for {x} in the joint sweep at stage {k + 1}")
                continue
            index, _ = chosen[x]
            values = q_cols[index]
            jmap.pairs[x] = u.intern({strong[k].members[c]: int(values[c]) for c in range(mq)}).id
            jmap.defining[x] = definer(index)
            jmap.stage_of[x] = k + 1
        logger.debug(f"j at stage {k + 1}: {len(jmap)} pair(s)")
    return jmap


def verify_j(
    jmap: JMap,
    classical: Hierarchy,
    strong: Hierarchy,
    cfg: Optional[DefConfig] = None,
    report: Optional[Report] = None,
) -> Report:
    """
    Range, injectivity, surjectivity up to [=] and elementarity at every stage, plus rank preservation.

    Surjectivity and elementarity failures are info records ("depth-bounded")
    unless both hierarchies were saturated at that stage.
    """
    cfg = cfg or strong.config
    u = strong.universe
    q = u.quantale
    if report is None:
        report = new_report("verify_j", q.name)
    top_c = two_element_boolean().top
    for k in range(1, min(classical.alpha, strong.alpha) + 1):
        members = classical[k].members
        stage = strong[k]
        saturated = bool(classical[k].saturated) and bool(stage.saturated)
        soft = not saturated
        bounded = "" if saturated else "depth-bounded"

        outside = [{"set": str(x), "image": jmap.get(x)} for x in members if jmap.get(x) not in stage]
        report.expect("j.range", outside, stage=k)

        seen: Dict[int, HFSet] = {}
        collisions = []
        for x in members:
            image = jmap.get(x)
            if image is None:
                continue
            if image in seen:
                collisions.append({"first": str(seen[image]), "second": str(x), "image": f"#{image}"})
            seen.setdefault(image, x)
        report.expect("j.injective", collisions, stage=k)

        images = [jmap[x] for x in members if x in jmap]
        unreached = [
            {"element": f"#{y}", "value": u.describe(y)}
            for y in stage.members
            if not any(u.val_eq(image, y) == q.top for image in images)
        ]
        report.expect("j.surjective_mod_eq", unreached, stage=k, detail=bounded, soft=soft)

        jpos, missing = _image_positions(jmap, members, stage)
        if jpos is None:
            report.expect("j.elementary", [{"missing": missing}], stage=k, detail="images outside the stage")
        else:
            sweep = joint_sweep(members, stage, u, cfg)
            n, p = len(sweep.rows), cfg.max_params
            shape_c = (n,) + (len(members),) * (1 + p)
            shape_q = (n,) + (len(stage),) * (1 + p)
            c_vals = sweep.arrays(0).reshape(shape_c)
            q_vals = sweep.arrays(1).reshape(shape_q)[np.ix_(np.arange(n), *([jpos] * (1 + p)))]
            differ = np.argwhere((c_vals == top_c) != (q_vals == q.top))
            witnesses = [
                {
                    "template": str(sweep.rows[hit[0]]),
                    "assignment": [str(members[int(i)]) for i in hit[1:]],
                    "classical": bool(c_vals[tuple(hit)] == top_c),
                    "value": q.labels[int(q_vals[tuple(hit)])],
                }
                for hit in differ[:20]
            ]
            detail = f"{n} template valuation(s)" + (f", {bounded}" if bounded else "")
            report.expect("j.elementary", witnesses, stage=k, detail=detail, soft=soft)

    ranks = []
    for x, image in jmap.pairs.items():
        left, right = classical.stage_of(x), strong.stage_of(image)
        if left != right:
            ranks.append({"set": str(x), "L_stage": left, "image_stage": right})
    report.expect("j.rank_preserving", ranks)
    return report
