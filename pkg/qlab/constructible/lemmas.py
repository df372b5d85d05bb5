"""
The equality and extension lemmas plus the structural checks on built hierarchies:
monotonicity, reflexivity of [=], memo soundness and hat images inside the weak hierarchy.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qlab.config import get_settings
from qlab.model.hfsets import hf_sets_up_to_rank
from qlab.model.stages import Stage, hat
from qlab.model.sweep import Interpretation, TemplateSweep
from qlab.model.universe import Universe
from qlab.schemas.def_config import DefConfig
from qlab.schemas.report import CheckStatus, Report, new_report

logger = logging.getLogger(__name__)

SweepCache = Dict[Tuple[int, ...], TemplateSweep]


def stage_sweep(
    u: Universe, stage: Stage, cfg: DefConfig, cache: Optional[SweepCache] = None
) -> TemplateSweep:
    """Sweep of cfg's templates over one stage, shared through `cache` by member tuple."""
    key = tuple(stage.members)
    if cache is not None and key in cache:
        return cache[key]
    sweep = TemplateSweep([Interpretation.of_universe(u, stage.members)], cfg.max_params, cfg.connectives)
    sweep.run(cfg.max_depth)
    if cache is not None:
        cache[key] = sweep
    return sweep


def sweepable(stage: Stage, report: Report, check: str) -> bool:
    """False (with an info record) for stages above the sweep member limit."""
    limit = get_settings().sweep_member_limit
    if len(stage) > limit:
        report.add(check, CheckStatus.INFO, stage.label, f"skipped: {len(stage)} members > limit {limit}")
        return False
    return True


def check_lemma_equality(
    u: Universe,
    stages: Sequence[Stage],
    cfg: DefConfig,
    report: Optional[Report] = None,
    cache: Optional[SweepCache] = None,
) -> Report:
    """
    [f=g] = top implies [phi(f, a)] = [phi(g, a)] for every swept template and parameter tuple.

    Quantifiers range over the stage holding f and g.
    """
    if report is None:
        report = new_report("lemma_equality", u.quantale.name)
    q = u.quantale
    for stage in stages:
        if not stage.members or not sweepable(stage, report, "lemma.equality"):
            continue
        _, eq = u.atomic_tables(stage.members)
        f_pos, g_pos = np.nonzero((eq == q.top) & ~np.eye(len(stage), dtype=bool))
        sweep = stage_sweep(u, stage, cfg, cache)
        m, n = len(stage), len(sweep.rows)
        values = sweep.arrays(0).reshape(n, m, -1)
        found: List[Dict[str, object]] = []
        if len(f_pos):
            differ = values[:, f_pos, :] != values[:, g_pos, :]
            for r, pair, b in np.argwhere(differ)[:20]:
                found.append({
                    "template": str(sweep.rows[r]),
                    "f": f"#{stage.members[f_pos[pair]]}",
                    "g": f"#{stage.members[g_pos[pair]]}",
                    "param_index": int(b),
                    "values": [q.labels[values[r, f_pos[pair], b]], q.labels[values[r, g_pos[pair], b]]],
                })
        report.expect(
            "lemma.equality",
            found,
            stage=stage.label,
            detail=f"{len(f_pos)} equal pair(s), {n} template valuation(s)",
        )
    return report


def extension_pairs(u: Universe, ids: Sequence[int]) -> List[Tuple[int, int]]:
    """(f, g) with f a proper extension of g whose extra entries are all bottom."""
    bottom = u.quantale.bottom
    pairs = []
    entries = {i: dict(u.element(i).entries) for i in ids}
    for f in ids:
        for g in ids:
            if f == g:
                continue
            ef, eg = entries[f], entries[g]
            if all(ef.get(k) == v for k, v in eg.items()) and all(
                v == bottom for k, v in ef.items() if k not in eg
            ):
                pairs.append((f, g))
    return pairs


def check_extension_lemma(u: Universe, stages: Sequence[Stage], report: Optional[Report] = None) -> Report:
    """Every extension by bottom-valued entries is [=]-equal to the original."""
    if report is None:
        report = new_report("extension_lemma", u.quantale.name)
    q = u.quantale
    ids = sorted({m for stage in stages for m in stage.members})
    pairs = extension_pairs(u, ids)
    found = [
        {"f": u.describe(f), "g": u.describe(g), "value": q.labels[u.val_eq(f, g)]}
        for f, g in pairs
        if u.val_eq(f, g) != q.top
    ]
    report.expect("lemma.extension", found, detail=f"{len(pairs)} extension pair(s)")
    return report


def check_monotonicity(
    u: Universe,
    frak: Sequence[Stage],
    v_stages: Sequence[Stage],
    report: Optional[Report] = None,
    soft: bool = False,
) -> Report:
    """Weak stages sit inside the matching V stages and grow with the label."""
    if report is None:
        report = new_report("monotonicity", u.quantale.name)
    for stage, v_stage in zip(frak, v_stages):
        outside = [{"element": u.describe(m)} for m in stage.members if m not in v_stage]
        report.expect("monotone.inside_V", outside, stage=stage.label)
    for lower, upper in zip(frak, frak[1:]):
        lost = [{"element": u.describe(m)} for m in lower.members if m not in upper]
        report.expect("monotone.increasing", lost, stage=upper.label, soft=soft)
    return report


def check_reflexivity(u: Universe, stages: Sequence[Stage], report: Optional[Report] = None) -> Report:
    """[f=f] = top for every member, and a cache-cold recomputation gives the same tables."""
    if report is None:
        report = new_report("reflexivity", u.quantale.name)
    q = u.quantale
    ids = sorted({m for stage in stages for m in stage.members})
    found = [{"element": f"#{i}", "value": q.labels[u.val_eq(i, i)]} for i in ids if u.val_eq(i, i) != q.top]
    report.expect("model.reflexivity", found, detail=f"{len(ids)} element(s)")

    cold = u.shadow(u.equality)
    diverged = []
    for stage in stages:
        if len(stage) > get_settings().sweep_member_limit:
            continue
        for name, warm_table, cold_table in zip(
            ("mem", "eq"), u.atomic_tables(stage.members), cold.atomic_tables(stage.members)
        ):
            for a, b in np.argwhere(warm_table != cold_table)[:5]:
                diverged.append({
                    "stage": stage.label,
                    "relation": name,
                    "f": f"#{stage.members[a]}",
                    "g": f"#{stage.members[b]}",
                })
    report.expect("model.memo_sound", diverged)
    return report


def check_hat_into_frak(u: Universe, stage: Stage, rank: int, report: Optional[Report] = None) -> Report:
    """
    Every HF set up to `rank` has a [=]-equal member in the given weak stage.

    A set of rank r first appears at stage r, so sets ranked above the stage
    label are listed in an info record instead of being checked.
    """
    if report is None:
        report = new_report("hat_into_frakL", u.quantale.name)
    q = u.quantale
    memo: Dict[int, object] = {}
    missing = []
    reachable = min(rank, stage.label)
    sets = hf_sets_up_to_rank(reachable)
    for x in sets:
        image = hat(x, u, memo).id
        if not any(u.val_eq(image, g) == q.top for g in stage.members):
            missing.append({"set": str(x), "image": u.describe(image)})
    detail = f"{len(sets)} HF set(s) of rank <= {reachable}"
    if stage.saturated is False:
        detail += ", stage not saturated"
    report.expect("hat.into_frakL", missing, stage=stage.label, detail=detail)
    if reachable < rank:
        beyond = [{"set": str(x)} for x in hf_sets_up_to_rank(rank) if x.rank > reachable]
        report.add(
            "hat.into_frakL.rank_beyond_stage",
            CheckStatus.INFO,
            stage.label,
            f"{len(beyond)} HF set(s) of rank > {reachable} first appear after stage {stage.label}",
            beyond[:10],
        )
    return report
