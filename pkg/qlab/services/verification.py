"""
Verification orchestrator: runs the algebra and model suites for one quantale
and aggregates every check into a single report.
"""
import logging
from typing import Dict, List, Optional

from qlab.config import Settings, get_settings
from qlab.constructible import (
    Hierarchy,
    build_bb_L,
    build_classical_L,
    build_frak_L,
    build_j,
    check_classical_ranks,
    check_extension_lemma,
    check_hat_into_frak,
    check_lemma_equality,
    check_monotonicity,
    check_powerset_oracle,
    check_reflexivity,
    check_two_valued,
    stage_sweep,
    verify_j,
)
from qlab.constructible.lemmas import SweepCache, sweepable
from qlab.core.exceptions import BudgetExceededError, WellDefinednessError
from qlab.model import (
    Stage,
    Universe,
    build_v_stage,
    check_hat_surjectivity,
    check_hat_transfer,
    check_soundness_spot,
    check_substitution,
    compare_equality_modes,
    two_valued_violations,
)
from qlab.quantales import (
    Quantale,
    audit_report,
    check_heyting_collapse,
    check_residuum_oracle,
    validate_theorem_suite,
)
from qlab.schemas.def_config import DefConfig
from qlab.schemas.report import CheckStatus, Report

logger = logging.getLogger(__name__)


class VerificationService:
    """
    Runs the verification suites against one quantale.

    Every check appends records to the report it is given; nothing here raises
    on a failed check, only on bad input.
    """

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the service.

        Args:
            settings: Bounds and limits; the process settings when omitted
        """
        self.settings = settings or get_settings()

    def algebra_suite(self, q: Quantale, report: Report) -> Report:
        """Axiom audit, residuation and negation identities, Heyting collapse, residuum oracle."""
        audit_report(q, report)
        validate_theorem_suite(q, report)
        check_heyting_collapse(q, report)
        check_residuum_oracle(q, report)
        logger.info(f"algebra suite on {q.name}: {report.summary_counts()}")
        return report

    def model_suite(
        self,
        q: Quantale,
        alpha: int,
        cfg: DefConfig,
        report: Report,
        equality_diagnostics: bool = False,
    ) -> Report:
        """
        Model-theoretic suite: two-valuedness, monotonicity, lemmas, substitution,
        hat transfer and the j map, all at the given bounds.

        Args:
            q: Quantale of truth values
            alpha: Last stage to build
            cfg: Template bounds for the definability sweeps
            report: Report to append to
            equality_diagnostics: Also compare [=] computed with meet against product

        Returns:
            The report
        """
        u = Universe(q)
        cache: SweepCache = {}

        self._negative_control(q, u, report)
        try:
            frak = build_frak_L(q, alpha, cfg, universe=u)
            strong = build_bb_L(q, alpha, cfg, universe=u)
        except BudgetExceededError as e:
            report.add("build.constructible", CheckStatus.FAIL, detail=e.message)
            return report
        check_two_valued(frak.stages, u, report)
        check_two_valued(strong.stages, u, report)

        frak_sat = self._saturated_frak(q, alpha, cfg, u, report)
        v_two = self._two_valued_v(q, alpha, u, report)
        check_monotonicity(u, frak.stages, v_two, report, soft=True)
        if frak_sat is not None:
            check_two_valued(frak_sat.stages, u, report)
            saturated = frak_sat.saturated
            for lower, upper in zip(frak_sat.stages, frak_sat.stages[1:]):
                lost = [{"element": u.describe(m)} for m in lower.members if m not in upper]
                detail = "saturated" if saturated else "saturation cap reached"
                report.expect(
                    "monotone.increasing", lost, stage=upper.label, detail=detail, soft=not saturated
                )

        built: List[Stage] = frak.stages + strong.stages + v_two
        check_reflexivity(u, built, report)
        check_extension_lemma(u, built, report)
        check_lemma_equality(u, strong.stages + frak.stages[1:], cfg, report, cache)

        mixed = self._mixed_stages(q, u)
        for stage in strong.stages[1:] + mixed:
            if sweepable(stage, report, "model.substitution"):
                check_substitution(u, stage, stage_sweep(u, stage, cfg, cache), report)
        check_lemma_equality(u, mixed, cfg, report, cache)
        for stage in mixed[-1:] + strong.stages[-1:]:
            if stage.members and sweepable(stage, report, "soundness.modus_ponens"):
                check_soundness_spot(u, stage, report)

        check_hat_transfer(u, hf_rank_bound=self.settings.hat_rank_bound, report=report)
        for stage in v_two[1:]:
            check_hat_surjectivity(u, stage, report)
        if frak_sat is not None:
            check_hat_into_frak(u, frak_sat.stages[-1], self.settings.hat_into_frak_rank, report)

        self._j_suite(q, alpha, cfg, u, report)

        if equality_diagnostics and mixed:
            diverged = compare_equality_modes(u, mixed[-1].members)
            report.add(
                "diagnostics.equality_modes",
                CheckStatus.INFO,
                mixed[-1].label,
                f"{len(diverged)} value(s) change when [=] uses meet",
                diverged,
            )

        self._determinism(q, alpha, cfg, strong, report)
        logger.info(f"model suite on {q.name}: {report.summary_counts()}")
        return report

    def _negative_control(self, q: Quantale, u: Universe, report: Report) -> None:
        try:
            stages = build_v_stage(q, 2, universe=u, budget=self.settings.budget)
        except BudgetExceededError as e:
            report.add("negative_control.V_not_two_valued", CheckStatus.INFO, 2, f"skipped: {e.message}")
            return
        witnesses = two_valued_violations(stages, u)
        if q.size <= 2:
            report.add("negative_control.V_not_two_valued", CheckStatus.INFO, 2, "quantale is two-valued")
        elif witnesses:
            report.add(
                "negative_control.V_not_two_valued",
                CheckStatus.PASS,
                2,
                "V_2 over the full carrier has values off {bottom, top}",
                witnesses,
            )
        else:
            report.add(
                "negative_control.V_not_two_valued", CheckStatus.FAIL, 2, "expected values off {bottom, top}"
            )

    def _two_valued_v(self, q: Quantale, alpha: int, u: Universe, report: Report) -> List[Stage]:
        """V_0..V_alpha with values in {bottom, top}; the stages that fit the budget."""
        try:
            return build_v_stage(q, alpha, (q.bottom, q.top), universe=u, budget=self.settings.budget)
        except BudgetExceededError as e:
            report.add(
                "build.V_two_valued", CheckStatus.FAIL, detail=f"truncated, surjectivity incomplete: {e.message}"
            )
            return list(e.partial or [])

    def _mixed_stages(self, q: Quantale, u: Universe) -> List[Stage]:
        """V_1, V_2 over the full carrier: the stages where values off {bottom, top} occur."""
        try:
            return build_v_stage(q, 2, universe=u, budget=self.settings.budget)[1:]
        except BudgetExceededError:
            return build_v_stage(q, 1, universe=u, budget=self.settings.budget)[1:]

    def _saturated_frak(
        self, q: Quantale, alpha: int, cfg: DefConfig, u: Universe, report: Report
    ) -> Optional[Hierarchy]:
        try:
            return build_frak_L(q, alpha, cfg.saturated(), universe=u)
        except BudgetExceededError as e:
            report.add(
                "build.frakL_saturated", CheckStatus.FAIL, detail=f"hat.into_frakL not checked: {e.message}"
            )
            return None

    def _j_suite(self, q: Quantale, alpha: int, cfg: DefConfig, u: Universe, report: Report) -> None:
        saturated = cfg.saturated()
        try:
            classical = build_classical_L(alpha, saturated, budget=self.settings.budget)
            strong = build_bb_L(q, alpha, saturated, universe=u)
        except BudgetExceededError as e:
            report.add("j.build", CheckStatus.FAIL, detail=f"j checks not run: {e.message}")
            return
        check_classical_ranks(classical, report)
        check_powerset_oracle(classical, report)
        try:
            jmap = build_j(classical, strong, saturated)
        except WellDefinednessError as e:
            report.add("j.well_defined", CheckStatus.FAIL, detail=e.message, witnesses=e.witnesses)
            return
        report.add("j.well_defined", CheckStatus.PASS, detail=f"{len(jmap)} pair(s)", witnesses=jmap.as_rows())
        verify_j(jmap, classical, strong, saturated, report)

    def _determinism(self, q: Quantale, alpha: int, cfg: DefConfig, strong: Hierarchy, report: Report) -> None:
        first = build_bb_L(q, alpha, cfg, universe=Universe(q))
        second = build_bb_L(q, alpha, cfg, universe=Universe(q))
        found: List[Dict[str, object]] = []
        for a, b, original in zip(first.stages, second.stages, strong.stages):
            if a.members != b.members:
                found.append({"stage": a.label, "first": list(a.members), "second": list(b.members)})
            shapes = [_shape(first.universe, m) for m in a.members]
            if shapes != [_shape(strong.universe, m) for m in original.members]:
                found.append({"stage": a.label, "detail": "rebuild differs from the suite's own build"})
        report.expect("determinism.rebuild", found, detail=f"bbL rebuilt twice to alpha={alpha}")


def _shape(u: Universe, elem_id: int) -> str:
    """Id-free rendering of an element, for comparing builds across universes."""
    elem = u.element(elem_id)
    parts = sorted(f"{_shape(u, k)}:{u.quantale.labels[v]}" for k, v in elem.entries)
    return "{" + ",".join(parts) + "}"
