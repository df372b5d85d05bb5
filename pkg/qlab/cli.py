"""
Command line front-end: validate, stages, eval and verify.

Exit codes: 0 every check passed, 1 some check failed, 2 input or usage error.
"""
import functools
import logging
from pathlib import Path
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import click

from qlab import __version__
from qlab.config import get_settings
from qlab.constructible import (
    Hierarchy,
    build_bb_L,
    build_classical_L,
    build_frak_L,
    check_classical_ranks,
    check_powerset_oracle,
    check_two_valued,
)
from qlab.core.exceptions import (
    BudgetExceededError,
    QlabError,
    QuantaleValidationError,
    get_user_friendly_message,
)
from qlab.formulas import ConnectiveSet, free_vars, parse
from qlab.model import (
    ClassicalStructure,
    Stage,
    Universe,
    build_v_stage,
    dump_stages,
    eval_sentence,
    load_dump,
    two_element_boolean,
    two_valued_violations,
)
from qlab.quantales import Quantale, load_quantale
from qlab.schemas import (
    CheckStatus,
    Command,
    DefConfig,
    HierarchyTag,
    Report,
    RunSpec,
    Suite,
    new_report,
)
from qlab.services import ReportWriter, VerificationService, print_summary

logger = logging.getLogger(__name__)

INPUT_ERROR = 2


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _fail_input(e: QlabError) -> None:
    """One-line diagnostic on stderr, then exit 2."""
    hint = get_user_friendly_message(e.error_code)
    click.echo(f"error [{e.error_code}]: {e.message}", err=True)
    if hint.get("troubleshooting"):
        click.echo(f"hint: {hint['troubleshooting']}", err=True)
    sys.exit(INPUT_ERROR)


def _load(source: str) -> Quantale:
    try:
        return load_quantale(source)
    except QlabError as e:
        _fail_input(e)


def _finish(report: Report, report_path: Optional[str]) -> None:
    report.finish()
    if report_path:
        ReportWriter().write_report(report_path, report)
    print_summary(report)
    sys.exit(report.exit_code())


def _def_config(spec: RunSpec) -> DefConfig:
    return DefConfig(
        max_depth=spec.max_depth,
        max_params=spec.max_params,
        saturate=spec.saturate,
        connectives=ConnectiveSet.CLASSICAL if spec.classical_connectives else ConnectiveSet.RESIDUATED,
    )


def _report_for(spec: RunSpec, quantale_name: Optional[str]) -> Report:
    config = spec.model_dump(mode="json", exclude={"command", "quantale", "report_path", "dump_path"})
    return new_report(spec.command.value, quantale_name, config)


def _value_set(q: Quantale, labels: Optional[Sequence[str]]) -> Optional[Tuple[int, ...]]:
    if not labels:
        return None
    try:
        return tuple(q.element(label) for label in labels)
    except QlabError as e:
        _fail_input(e)


def _split_values(_ctx, _param, value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    labels = [v.strip() for v in value.split(",") if v.strip()]
    if not labels:
        raise click.BadParameter("expected a comma-separated list of element labels")
    return labels


def model_options(func):
    """Options shared by the commands that build stages."""
    settings = get_settings()

    @click.option("--quantale", "-q", default=settings.default_quantale, show_default=True,
                  help="Builtin name (e.g. lukasiewicz:3, heyting:chain:4) or quantale file path")
    @click.option("--alpha", type=click.IntRange(min=0), default=settings.default_alpha, show_default=True,
                  help="Last stage to build")
    @click.option("--depth", type=click.IntRange(min=0), default=settings.default_depth, show_default=True,
                  help="Maximum connective depth of definability templates")
    @click.option("--params", type=click.IntRange(min=0), default=settings.default_params, show_default=True,
                  help="Maximum number of parameters in a template")
    @click.option("--saturate", is_flag=True, help="Deepen templates until no new function appears")
    @click.option("--classical-connectives", is_flag=True,
                  help="Enumerate with weak conjunction, disjunction and negation only")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def _run_spec(command: Command, **fields) -> RunSpec:
    return RunSpec(
        command=command,
        quantale=fields["quantale"],
        alpha=fields["alpha"],
        max_depth=fields["depth"],
        max_params=fields["params"],
        saturate=fields["saturate"],
        classical_connectives=fields["classical_connectives"],
        values=fields.get("values"),
        hierarchy=HierarchyTag(fields.get("hierarchy") or HierarchyTag.BB_L.value),
        suite=Suite(fields.get("suite") or Suite.PAPER.value),
        report_path=fields.get("report"),
        dump_path=fields.get("dump"),
    )


def build_hierarchy(
    spec: RunSpec, q: Quantale, universe: Optional[Universe] = None
) -> Tuple[List[Stage], Optional[Universe], Optional[DefConfig]]:
    """
    Build the stages `spec` asks for.

    Raises:
        BudgetExceededError: With `partial` holding what was built
    """
    cfg = _def_config(spec)
    u = Universe(q) if universe is None else universe
    if spec.hierarchy == HierarchyTag.V:
        values = _value_set(q, spec.values)
        return build_v_stage(q, spec.alpha, values, universe=u), u, None
    if spec.hierarchy == HierarchyTag.CLASSICAL_L:
        return build_classical_L(spec.alpha, cfg).stages, None, cfg
    builder = build_frak_L if spec.hierarchy == HierarchyTag.FRAK_L else build_bb_L
    hierarchy = builder(q, spec.alpha, cfg, universe=u)
    return hierarchy.stages, u, cfg


def _partial_stages(partial) -> List[Stage]:
    if isinstance(partial, Hierarchy):
        return list(partial.stages)
    return list(partial or [])


@click.group()
@click.version_option(__version__, prog_name="qlab")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Overrides QLAB_LOG_LEVEL")
def main(log_level: Optional[str]):
    """Finite quantales, quantale-valued models of set theory and their constructible hierarchies."""
    _configure_logging(log_level or get_settings().log_level)


@main.command()
@click.argument("source", required=False)
@click.option("--quantale", "-q", default=get_settings().default_quantale, show_default=True,
              help="Builtin name or quantale file path (SOURCE takes precedence)")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the JSON report here")
def validate(source: Optional[str], quantale: str, report: Optional[str]):
    """Audit the quantale axioms of SOURCE and run the algebraic identity suite."""
    spec = RunSpec(command=Command.VALIDATE, quantale=source or quantale, report_path=report)
    try:
        q = load_quantale(spec.quantale)
    except QuantaleValidationError as e:
        result = new_report(Command.VALIDATE.value, spec.quantale)
        witnesses = [v.as_dict() if hasattr(v, "as_dict") else {"violation": str(v)} for v in e.violations]
        result.add("quantale.axioms", CheckStatus.FAIL, detail=e.message, witnesses=witnesses)
        _finish(result, spec.report_path)
    except QlabError as e:
        _fail_input(e)

    result = _report_for(spec, q.name)
    VerificationService().algebra_suite(q, result)
    _finish(result, spec.report_path)


@main.command()
@model_options
@click.option("--hierarchy", type=click.Choice([t.value for t in HierarchyTag]), default=HierarchyTag.BB_L.value,
              show_default=True, help="Which hierarchy to build")
@click.option("--values", callback=_split_values, help="Comma-separated value labels allowed in V stages")
@click.option("--dump", type=click.Path(dir_okay=False), help="Write the stage dump here")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the JSON report here")
def stages(**options):
    """Build a hierarchy to --alpha, check it and optionally dump it."""
    spec = _run_spec(Command.STAGES, **options)
    q = two_element_boolean() if spec.hierarchy == HierarchyTag.CLASSICAL_L else _load(spec.quantale)
    result = _report_for(spec, q.name)
    writer = ReportWriter()
    truncated = False
    u = None if spec.hierarchy == HierarchyTag.CLASSICAL_L else Universe(q)
    try:
        built, u, cfg = build_hierarchy(spec, q, u)
    except BudgetExceededError as e:
        built = _partial_stages(e.partial)
        cfg = None if spec.hierarchy == HierarchyTag.V else _def_config(spec)
        truncated = True
        result.add(
            "build.truncated",
            CheckStatus.FAIL,
            len(built),
            f"{e.message}; stages 0..{len(built) - 1} kept",
        )
    except QlabError as e:
        _fail_input(e)

    for stage in built:
        detail = f"{len(stage)} member(s)"
        if stage.depth_reached is not None and stage.label > 0:
            detail += f", depth {stage.depth_reached}"
        if stage.saturated is not None and stage.label > 0:
            detail += ", saturated" if stage.saturated else ", not saturated"
        result.add(f"stage.{spec.hierarchy.value}", CheckStatus.INFO, stage.label, detail)

    if spec.hierarchy in (HierarchyTag.FRAK_L, HierarchyTag.BB_L) and built:
        check_two_valued(built, u, result)
    elif spec.hierarchy == HierarchyTag.V and built:
        found = two_valued_violations(built, u)
        detail = "values off {bottom, top} present" if found else "all values in {bottom, top}"
        result.add("two_valued.V", CheckStatus.INFO, None, detail, found)
    elif spec.hierarchy == HierarchyTag.CLASSICAL_L and not truncated:
        hierarchy = Hierarchy(HierarchyTag.CLASSICAL_L, built, None, cfg)
        check_classical_ranks(hierarchy, result)
        check_powerset_oracle(hierarchy, result)

    if spec.dump_path:
        writer.write_dump(spec.dump_path, dump_stages(built, u, spec.hierarchy, q.name, spec.alpha, cfg))
    _finish(result, spec.report_path)


def _parse_bindings(bindings: Sequence[str]) -> Dict[str, int]:
    parsed: Dict[str, int] = {}
    for binding in bindings:
        name, sep, ref = binding.partition("=")
        ref = ref.strip().lstrip("#")
        if not sep or not name.strip() or not ref.isdigit():
            raise click.BadParameter(f"expected name=#id, got {binding!r}", param_hint="--bind")
        parsed[name.strip()] = int(ref)
    return parsed


def _dump_quantale_name(text: str) -> Optional[str]:
    for line in text.splitlines():
        if line.startswith("# quantale:"):
            return line.partition(":")[2].strip()
    return None


@main.command(name="eval")
@click.argument("formula")
@model_options
@click.option("--hierarchy", type=click.Choice([t.value for t in HierarchyTag]), default=HierarchyTag.BB_L.value,
              show_default=True, help="Which hierarchy the quantifiers range over")
@click.option("--values", callback=_split_values, help="Comma-separated value labels allowed in V stages")
@click.option("--stage", "stage_label", type=click.IntRange(min=0), default=None,
              help="Stage the quantifiers range over (default: the last one)")
@click.option("--bind", "bindings", multiple=True, help="Bind a free variable: name=#id")
@click.option("--from-dump", type=click.Path(exists=True, dir_okay=False), help="Read stages from a dump")
def eval_command(formula: str, stage_label: Optional[int], bindings: Tuple[str, ...],
                 from_dump: Optional[str], **options):
    """Evaluate FORMULA over one stage and print its value."""
    spec = _run_spec(Command.EVAL, **options)
    env_ids = _parse_bindings(bindings)
    try:
        sentence = parse(formula)
        if from_dump:
            text = Path(from_dump).read_text(encoding="utf-8")
            source = spec.quantale
            if source == get_settings().default_quantale:
                source = _dump_quantale_name(text) or source
            q = load_quantale(source)
            universe, built, _ = load_dump(text, q)
            structure = universe
        elif spec.hierarchy == HierarchyTag.CLASSICAL_L:
            structure = ClassicalStructure()
            built, _, _ = build_hierarchy(spec, structure.quantale)
        else:
            q = load_quantale(spec.quantale)
            built, structure, _ = build_hierarchy(spec, q)
        if not built:
            raise click.UsageError("no stages to evaluate over")
        label = built[-1].label if stage_label is None else stage_label
        matching = [s for s in built if s.label == label]
        if not matching:
            raise click.BadParameter(f"no stage {label}; built 0..{built[-1].label}", param_hint="--stage")
        carrier = matching[0].members
        env = {name: structure.resolve(ref) for name, ref in env_ids.items()}
        unbound = sorted(free_vars(sentence) - env.keys())
        if unbound:
            raise click.BadParameter(f"free variable(s) without --bind: {', '.join(unbound)}", param_hint="--bind")
        value = eval_sentence(structure, carrier, sentence, env)
    except QlabError as e:
        _fail_input(e)
    logger.info(f"[{sentence}] over stage {label}: {structure.quantale.labels[value]}")
    click.echo(structure.quantale.labels[value])


@main.command()
@model_options
@click.option("--suite", type=click.Choice([s.value for s in Suite]), default=Suite.PAPER.value,
              show_default=True, help="algebra: identities only; paper: algebra plus the model suite")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the JSON report here")
@click.option("--equality-diagnostics", is_flag=True, help="Also compare [=] computed with meet")
def verify(equality_diagnostics: bool, **options):
    """Run a verification suite and exit 0 iff every check passed."""
    spec = _run_spec(Command.VERIFY, **options)
    q = _load(spec.quantale)
    result = _report_for(spec, q.name)
    service = VerificationService()
    service.algebra_suite(q, result)
    if spec.suite == Suite.PAPER:
        try:
            service.model_suite(q, spec.alpha, _def_config(spec), result, equality_diagnostics)
        except BudgetExceededError as e:
            result.add("build.truncated", CheckStatus.FAIL, detail=e.message)
    _finish(result, spec.report_path)


if __name__ == "__main__":
    main()
