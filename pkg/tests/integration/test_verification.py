"""
Integration tests for VerificationService: both suites end to end at small bounds.
"""
import pytest

from qlab.core.exceptions import BudgetExceededError
from qlab.quantales import QuantaleFactory
from qlab.schemas import CheckStatus, DefConfig, new_report
from qlab.services import VerificationService, verification

pytestmark = pytest.mark.integration


def run_model_suite(name, alpha=2, cfg=None, diagnostics=False):
    q = QuantaleFactory.create(name)
    report = new_report("verify", q.name)
    service = VerificationService()
    service.algebra_suite(q, report)
    service.model_suite(q, alpha, cfg or DefConfig(max_depth=1, max_params=1), report, diagnostics)
    return report


def failed(report):
    return [(r.check, r.stage, r.witnesses[:1]) for r in report.records if r.status == CheckStatus.FAIL]


def test_algebra_suite_records_every_axiom(luk3):
    report = VerificationService().algebra_suite(luk3, new_report("verify", luk3.name))
    checks = [r.check for r in report.records]
    assert "axiom.order.reflexive" in checks
    assert "residuum.matches_sup_oracle" in checks
    assert "idempotent.heyting_collapse" in checks
    assert not report.failed


@pytest.mark.parametrize("name", ["boolean:1", "lukasiewicz:3"])
def test_model_suite_passes(name):
    report = run_model_suite(name)
    assert failed(report) == []
    checks = {r.check for r in report.records}
    for expected in (
        "two_valued.frakL",
        "two_valued.bbL",
        "lemma.extension",
        "lemma.equality",
        "model.reflexivity",
        "model.substitution",
        "hat.bounded.transitive",
        "j.well_defined",
        "j.range",
        "determinism.rebuild",
    ):
        assert expected in checks, expected


def test_negative_control_depends_on_the_quantale():
    (two_valued,) = run_model_suite("boolean:1").find("negative_control.V_not_two_valued")
    assert two_valued.status == CheckStatus.INFO
    (three_valued,) = run_model_suite("lukasiewicz:3").find("negative_control.V_not_two_valued")
    assert three_valued.status == CheckStatus.PASS
    assert three_valued.witnesses


def test_equality_diagnostics_are_informational():
    report = run_model_suite("lukasiewicz:3", diagnostics=True)
    (record,) = report.find("diagnostics.equality_modes")
    assert record.status == CheckStatus.INFO


def test_j_images_of_the_first_sets():
    report = run_model_suite("lukasiewicz:3")
    (record,) = report.find("j.well_defined")
    assert record.status == CheckStatus.PASS
    assert {row["set"] for row in record.witnesses} >= {"∅", "{∅}"}


def test_reports_are_deterministic():
    first = run_model_suite("lukasiewicz:3").finish()
    second = run_model_suite("lukasiewicz:3").finish()
    assert first.canonical_json() == second.canonical_json()


@pytest.mark.parametrize(
    "target, check, skipped",
    [
        ("build_classical_L", "j.build", "j.range"),
        ("build_frak_L", "build.frakL_saturated", "hat.into_frakL"),
    ],
)
def test_skipped_side_builds_fail_the_run(monkeypatch, target, check, skipped):
    """
    Test Scenario: a side build feeding a mandatory check runs over budget
    Expected: a fail record names the build, and the run as a whole fails
    """
    original = getattr(verification, target)

    def flaky(*args, **kwargs):
        if target == "build_frak_L" and not args[2].saturate:
            return original(*args, **kwargs)
        raise BudgetExceededError(requested=10**6, budget=1)

    monkeypatch.setattr(verification, target, flaky)
    report = run_model_suite("boolean:1")
    (record,) = report.find(check)
    assert record.status == CheckStatus.FAIL
    assert report.find(skipped) == []
    assert report.failed


def test_truncated_two_valued_v_fails_the_run(monkeypatch):
    original = verification.build_v_stage

    def flaky(q, alpha, value_set=None, **kwargs):
        if value_set is not None:
            raise BudgetExceededError(requested=10**6, budget=1, partial=original(q, 1, value_set, **kwargs))
        return original(q, alpha, value_set, **kwargs)

    monkeypatch.setattr(verification, "build_v_stage", flaky)
    report = run_model_suite("lukasiewicz:3")
    (record,) = report.find("build.V_two_valued")
    assert record.status == CheckStatus.FAIL
    assert report.failed


def test_hat_into_frak_at_alpha_one():
    """
    Test Scenario: the model suite at alpha=1, below the rank of {∅}
    Expected: hat.into_frakL passes on the sets that fit, the rest is informational
    """
    report = run_model_suite("lukasiewicz:3", alpha=1)
    (record,) = report.find("hat.into_frakL")
    assert record.status == CheckStatus.PASS
    (beyond,) = report.find("hat.into_frakL.rank_beyond_stage")
    assert beyond.status == CheckStatus.INFO
    assert failed(report) == []
