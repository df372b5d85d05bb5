"""
End-to-end acceptance runs through the command line.

The documented command examples run first, verbatim. The runs at the default
bounds build stages to alpha=3 with depth-2 templates and take minutes, so they
are marked slow; run them with `pytest -m slow`.
"""
import json

from click.testing import CliRunner
import pytest

from qlab.cli import main

pytestmark = pytest.mark.e2e

BUILTINS = [
    "boolean:1",
    "boolean:2",
    "godel:3",
    "godel:5",
    "heyting:chain:4",
    "lukasiewicz:3",
    "lukasiewicz:5",
]
DEFAULT_BOUNDS = ["--alpha", "3", "--depth", "2", "--params", "1"]
DEPTH_BOUNDED = {"j.surjective_mod_eq", "j.elementary"}


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, ["--log-level", "WARNING", *args])


def load_report(path):
    data = json.loads(path.read_text(encoding="utf-8"))
    data["metadata"].pop("started_at", None)
    data["metadata"].pop("finished_at", None)
    return data


def last_line(result):
    return result.output.strip().splitlines()[-1]


@pytest.mark.parametrize(
    "command, exit_code",
    [
        ("validate lukasiewicz:5", 0),
        ("validate godel:4", 0),
        ("stages --hierarchy V --alpha 2 --quantale lukasiewicz:3", 0),
        ("stages --hierarchy frakL --alpha 0", 0),
        ("verify --suite algebra --quantale heyting:chain:4", 0),
    ],
)
def test_documented_commands(runner, command, exit_code):
    result = run(runner, *command.split())
    assert result.exit_code == exit_code, result.output


@pytest.mark.slow
def test_documented_eval_examples(runner):
    result = run(runner, "eval", "A x. x = x")
    assert result.exit_code == 0, result.output
    assert last_line(result) == "1"
    result = run(runner, "eval", "E x. x in #0")
    assert result.exit_code == 0, result.output
    assert last_line(result) == "0"


def test_documented_broken_table_is_rejected(runner, broken_quantale_file):
    result = run(runner, "validate", str(broken_quantale_file))
    assert result.exit_code == 1
    assert "FAIL quantale.axioms" in result.output


@pytest.mark.slow
@pytest.mark.parametrize(
    "command",
    [
        "stages --hierarchy bbL --alpha 3 --quantale lukasiewicz:3 --depth 2",
        "verify --suite paper --quantale lukasiewicz:3 --alpha 3 --depth 2",
        "verify --suite paper --quantale boolean:1 --alpha 3",
    ],
)
def test_documented_commands_at_default_bounds(runner, command):
    result = run(runner, *command.split())
    assert result.exit_code == 0, result.output


@pytest.mark.slow
@pytest.mark.parametrize("name", BUILTINS)
def test_algebra_suite_on_every_builtin(runner, name):
    """
    Test Scenario: verify --suite algebra on each builtin
    Expected: every axiom and identity passes, exit 0
    """
    result = run(runner, "verify", "--suite", "algebra", "--quantale", name)
    assert result.exit_code == 0, result.output


@pytest.mark.slow
@pytest.mark.parametrize("name", ["lukasiewicz:3", "lukasiewicz:5"])
@pytest.mark.parametrize("hierarchy", ["frakL", "bbL"])
def test_constructible_stages_are_two_valued(runner, tmp_path, name, hierarchy):
    """
    Test Scenario: build a constructible hierarchy to alpha=3 over a many-valued chain
    Expected: every value of every member is 0 or 1, exit 0
    """
    report_path = tmp_path / "stages.json"
    result = run(
        runner, "stages", "--hierarchy", hierarchy, "--quantale", name, *DEFAULT_BOUNDS,
        "--report", str(report_path),
    )
    assert result.exit_code == 0, result.output
    records = {r["check"]: r for r in load_report(report_path)["records"]}
    assert records[f"two_valued.{hierarchy}"]["status"] == "pass"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["boolean:1", "lukasiewicz:3"])
def test_paper_suite_is_green_and_deterministic(runner, tmp_path, name):
    """
    Test Scenario: verify --suite paper twice at the default bounds
    Expected:
    - exit 0 both times
    - every j and hat record passes; only surjectivity and elementarity may be
      depth-bounded info
    - identical reports apart from timestamps
    """
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        result = run(runner, "verify", "--suite", "paper", "--quantale", name, *DEFAULT_BOUNDS, "--report", str(path))
        assert result.exit_code == 0, result.output

    first, second = (load_report(p) for p in paths)
    assert first == second
    checks = {r["check"] for r in first["records"]}
    assert {"j.range", "j.injective", "j.surjective_mod_eq", "j.elementary"} <= checks
    assert {"lemma.equality", "lemma.extension", "model.substitution", "hat.into_frakL"} <= checks
    for record in first["records"]:
        if not record["check"].startswith(("j.", "hat.")):
            continue
        if record["check"] in DEPTH_BOUNDED and record["status"] == "info":
            assert "depth-bounded" in record["detail"], record
        else:
            assert record["status"] == "pass", record
