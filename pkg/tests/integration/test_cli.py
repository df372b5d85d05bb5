"""
Integration tests for the qlab command line: exit codes, reports, dumps and printed values.
"""
import json

from click.testing import CliRunner
import pytest

from qlab.cli import build_hierarchy, main
from qlab.model import Universe
from qlab.schemas import Command, HierarchyTag, RunSpec

pytestmark = pytest.mark.integration

SMALL = ["--alpha", "2", "--depth", "1", "--params", "1"]


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, ["--log-level", "ERROR", *args])


def last_line(result):
    return result.output.strip().splitlines()[-1]


class TestValidate:
    def test_builtin_passes(self, runner):
        result = invoke(runner, "validate", "lukasiewicz:5")
        assert result.exit_code == 0, result.output
        assert "PASS residuum.matches_sup_oracle" in result.output
        assert last_line(result).endswith("-> exit 0")

    def test_heyting_and_godel_pass(self, runner):
        for name in ("godel:4", "heyting:chain:4", "heyting:antichain:2"):
            result = invoke(runner, "validate", "--quantale", name)
            assert result.exit_code == 0, (name, result.output)

    def test_broken_tables_fail_with_witnesses(self, runner, broken_quantale_file, tmp_path):
        report_path = tmp_path / "report.json"
        result = invoke(runner, "validate", str(broken_quantale_file), "--report", str(report_path))
        assert result.exit_code == 1
        report = json.loads(report_path.read_text(encoding="utf-8"))
        (record,) = report["records"]
        assert record["check"] == "quantale.axioms"
        assert record["status"] == "fail"
        assert record["witnesses"]

    def test_unreadable_source_is_an_input_error(self, runner, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("labels: [\n", encoding="utf-8")
        result = invoke(runner, "validate", str(bad))
        assert result.exit_code == 2
        assert "QUANTALE_SOURCE_ERROR" in result.output

        result = invoke(runner, "validate", "product:3")
        assert result.exit_code == 2


class TestStages:
    def test_frak_alpha_zero(self, runner):
        result = invoke(runner, "stages", "--hierarchy", "frakL", "--alpha", "0")
        assert result.exit_code == 0, result.output
        assert "INFO stage.frakL [stage 0]: 0 member(s)" in result.output

    def test_strong_stages_are_two_valued(self, runner, tmp_path):
        report_path = tmp_path / "stages.json"
        result = invoke(runner, "stages", "--hierarchy", "bbL", *SMALL, "--report", str(report_path))
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text(encoding="utf-8"))
        checks = {r["check"]: r["status"] for r in report["records"]}
        assert checks["two_valued.bbL"] == "pass"
        assert report["metadata"]["config"]["max_depth"] == 1

    def test_v_stages_report_values_off_bottom_and_top(self, runner):
        result = invoke(runner, "stages", "--hierarchy", "V", "--alpha", "2")
        assert result.exit_code == 0, result.output
        assert "INFO stage.V [stage 2]: 4 member(s)" in result.output
        assert "two_valued.V: values off {bottom, top} present" in result.output

    def test_v_stages_restricted_values(self, runner):
        result = invoke(runner, "stages", "--hierarchy", "V", "--alpha", "2", "--values", "0,1")
        assert result.exit_code == 0, result.output
        assert "all values in {bottom, top}" in result.output

        result = invoke(runner, "stages", "--hierarchy", "V", "--alpha", "2", "--values", "0,2/3")
        assert result.exit_code == 2

    def test_budget_truncation_keeps_a_dump(self, runner, tmp_path):
        dump = tmp_path / "v.dump"
        result = invoke(runner, "stages", "--hierarchy", "V", "--alpha", "4", "--dump", str(dump))
        assert result.exit_code == 1
        assert "FAIL build.truncated" in result.output
        text = dump.read_text(encoding="utf-8")
        assert "# hierarchy: V" in text
        assert "2 2 {0:1/2}" in text

    def test_classical_L(self, runner):
        result = invoke(runner, "stages", "--hierarchy", "L", "--alpha", "3", "--depth", "1")
        assert result.exit_code == 0, result.output
        assert "INFO stage.L [stage 3]: 4 member(s)" in result.output
        assert "PASS classical_L.rank_bound" in result.output


class TestEval:
    def test_reflexivity_is_top(self, runner):
        result = invoke(runner, "eval", "A x. x = x", *SMALL)
        assert result.exit_code == 0, result.output
        assert last_line(result) == "1"

    def test_empty_set_has_no_members(self, runner):
        result = invoke(runner, "eval", "E x. x in #0", *SMALL)
        assert last_line(result) == "0"

    def test_v_values(self, runner):
        result = invoke(runner, "eval", "--hierarchy", "V", "--alpha", "2", "#2 in #2")
        assert last_line(result) == "0"
        result = invoke(runner, "eval", "--hierarchy", "V", "--alpha", "2", "E x. x in #2")
        assert last_line(result) == "1/2"

    def test_bindings(self, runner):
        result = invoke(runner, "eval", "--hierarchy", "V", "--alpha", "2", "--bind", "a=#2", "E x. x in a")
        assert last_line(result) == "1/2"
        result = invoke(runner, "eval", "--hierarchy", "V", "--alpha", "2", "E x. x in a")
        assert result.exit_code == 2
        result = invoke(runner, "eval", "--hierarchy", "V", "--alpha", "2", "--bind", "a", "x in a")
        assert result.exit_code == 2

    def test_classical_hierarchy(self, runner):
        result = invoke(runner, "eval", "--hierarchy", "L", "--alpha", "3", "--depth", "1", "#1 in #3")
        assert last_line(result) == "1"

    def test_from_dump(self, runner, tmp_path):
        dump = tmp_path / "v2.dump"
        result = invoke(runner, "stages", "--hierarchy", "V", "--alpha", "2", "--dump", str(dump))
        assert result.exit_code == 0, result.output
        result = invoke(runner, "eval", "--from-dump", str(dump), "E x. x in #2")
        assert result.exit_code == 0, result.output
        assert last_line(result) == "1/2"
        result = invoke(runner, "eval", "--from-dump", str(dump), "--stage", "1", "E x. x in #2")
        assert last_line(result) == "1/2"

    def test_input_errors(self, runner):
        result = invoke(runner, "eval", "x in", *SMALL)
        assert result.exit_code == 2
        assert "FORMULA_PARSE_ERROR" in result.output
        result = invoke(runner, "eval", "#99 in #0", *SMALL)
        assert result.exit_code == 2
        result = invoke(runner, "eval", "--stage", "9", "top", *SMALL)
        assert result.exit_code == 2


class TestVerify:
    def test_algebra_suite(self, runner):
        result = invoke(runner, "verify", "--suite", "algebra", "--quantale", "heyting:chain:4")
        assert result.exit_code == 0, result.output
        assert "witness.double_negation_not_deflationary" in result.output

    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "qlab" in result.output

    def test_paper_suite_at_alpha_one(self, runner, tmp_path):
        report_path = tmp_path / "verify.json"
        result = invoke(
            runner, "verify", "--suite", "paper", "--quantale", "lukasiewicz:3", "--alpha", "1",
            "--depth", "1", "--report", str(report_path),
        )
        assert result.exit_code == 0, result.output
        records = {r["check"]: r["status"] for r in json.loads(report_path.read_text(encoding="utf-8"))["records"]}
        assert records["hat.into_frakL"] == "pass"
        assert records["hat.into_frakL.rank_beyond_stage"] == "info"

    def test_unknown_suite_is_a_usage_error(self, runner):
        result = invoke(runner, "verify", "--suite", "everything", "--quantale", "boolean:1")
        assert result.exit_code == 2


def test_build_hierarchy_keeps_the_callers_universe(luk3):
    u = Universe(luk3)
    spec = RunSpec(quantale=luk3.name, command=Command.STAGES, alpha=2, max_depth=1, hierarchy=HierarchyTag.BB_L)
    stages, used, cfg = build_hierarchy(spec, luk3, universe=u)
    assert used is u
    assert cfg.max_depth == 1
    assert all(m in u for stage in stages for m in stage.members)
