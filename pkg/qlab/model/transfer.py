"""
Checks that read V^Q against classical set theory and against residuated logic:
hat transfer, hat surjectivity onto two-valued stages, the soundness spot-suite
and the n-fold substitution property.
"""
from itertools import product as cartesian
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from qlab.formulas.ast import Atom, AtomKind, Const, Equiv, Formula, Imp, Neg, Or, Strong, Weak
from qlab.formulas.parser import parse
from qlab.schemas.report import CheckStatus, Report, new_report
from .evaluation import eval_sentence
from .hfsets import classical_truth, hf_sets_up_to_rank
from .stages import Stage, hat
from .sweep import TemplateSweep
from .universe import Universe

logger = logging.getLogger(__name__)

# Sentences in the free variables a, b with every quantifier bounded
BOUNDED_SENTENCES: Tuple[Tuple[str, str], ...] = (
    ("transitive", "A x. (x in a -> A y. (y in x -> y in a))"),
    ("bounded_subset", "A x. (x in a -> x in b)"),
    ("member_equal", "E x. (x in a & x = b)"),
    ("empty", "A x. (x in a -> bot)"),
    ("extensional", "(A x. (x in a -> x in b)) & (A y. (y in b -> y in a)) -> a = b"),
    ("two_members", "E x. (x in a & E y. (y in a & ~(x = y)))"),
    (
        "ordinal_like",
        "(A x. (x in a -> A y. (y in x -> y in a)))"
        " & (A x. (x in a -> A y. (y in a -> x in y \\/ x = y \\/ y in x)))",
    ),
)


def bounded_sentences() -> List[Tuple[str, Formula]]:
    return [(name, parse(text)) for name, text in BOUNDED_SENTENCES]


def check_hat_transfer(
    u: Universe,
    formula_list: Optional[Sequence[Tuple[str, Formula]]] = None,
    hf_rank_bound: int = 3,
    report: Optional[Report] = None,
) -> Report:
    """
    Compare hat images with their classical originals for every HF set up to a rank.

    Args:
        u: Universe the images are interned into
        formula_list: Named bounded-quantifier formulas in the free variables a, b
        hf_rank_bound: Largest rank (empty set = 1) of the HF sets compared
        report: Report to append to

    Returns:
        The report with one record per item
    """
    if report is None:
        report = new_report("hat_transfer", u.quantale.name)
    q = u.quantale
    formulas = list(formula_list) if formula_list is not None else bounded_sentences()
    sets = hf_sets_up_to_rank(hf_rank_bound)
    memo: Dict[int, object] = {}
    images = {s: hat(s, u, memo).id for s in sets}

    off_two, mismatched = [], []
    for x, y in cartesian(sets, repeat=2):
        mem, eq = u.val_mem(images[x], images[y]), u.val_eq(images[x], images[y])
        for relation, value, truth in (("in", mem, x in y), ("=", eq, x == y)):
            if not q.is_two_valued(value):
                off_two.append({"x": str(x), "y": str(y), "relation": relation, "value": q.labels[value]})
            elif (value == q.top) != truth:
                mismatched.append({
                    "x": str(x), "y": str(y), "relation": relation,
                    "value": q.labels[value], "classical": truth,
                })
    scope = f"{len(sets)} HF set(s) of rank <= {hf_rank_bound}"
    report.expect("hat.atoms_two_valued", off_two, detail=scope)
    report.expect("hat.atoms_match_classical", mismatched, detail=scope)

    carrier = [images[s] for s in sets]
    for name, formula in formulas:
        found = []
        for a, b in cartesian(sets, repeat=2):
            truth = classical_truth(formula, {"a": a, "b": b}, sets)
            value = eval_sentence(u, carrier, formula, {"a": images[a], "b": images[b]})
            if not q.is_two_valued(value) or (value == q.top) != truth:
                found.append({"a": str(a), "b": str(b), "value": q.labels[value], "classical": truth})
        report.expect(f"hat.bounded.{name}", found, detail=str(formula))
    logger.debug(f"hat transfer over {scope} with {len(formulas)} bounded formula(s)")
    return report


def check_hat_surjectivity(u: Universe, stage: Stage, report: Optional[Report] = None) -> Report:
    """Each member of a two-valued V stage is [=]-equal to exactly one hat image of rank <= its stage."""
    if report is None:
        report = new_report("hat_surjectivity", u.quantale.name)
    q = u.quantale
    sets = hf_sets_up_to_rank(stage.label)
    memo: Dict[int, object] = {}
    images = [hat(s, u, memo).id for s in sets]
    found = []
    for member in stage.members:
        if not all(q.is_two_valued(v) for v in u.element(member).values()):
            continue
        matches = [str(s) for s, image in zip(sets, images) if u.val_eq(member, image) == q.top]
        if len(matches) != 1:
            found.append({"element": f"#{member}", "matches": matches})
    report.expect("hat.surjective_two_valued", found, stage=stage.label)
    return report


# Soundness spot-suite

Schema = Callable[[Formula, Formula, Formula], Formula]

SOUNDNESS_SCHEMAS: Tuple[Tuple[str, Schema], ...] = (
    ("modus_ponens", lambda a, b, c: Imp(Strong(a, Imp(a, b)), b)),
    ("weakening", lambda a, b, c: Imp(a, Imp(b, a))),
    ("adjunction.uncurry", lambda a, b, c: Imp(Imp(Strong(a, b), c), Imp(a, Imp(b, c)))),
    ("adjunction.curry", lambda a, b, c: Imp(Imp(a, Imp(b, c)), Imp(Strong(a, b), c))),
    ("de_morgan_join", lambda a, b, c: Equiv(Neg(Or(a, b)), Weak(Neg(a), Neg(b)))),
    ("strong_below_weak", lambda a, b, c: Imp(Strong(a, b), Weak(a, b))),
)


def _facts(u: Universe, members: Sequence[int]) -> List[Formula]:
    """One closed atom per distinct value of the stage's membership and equality tables."""
    mem, eq = u.atomic_tables(members)
    chosen: Dict[int, Formula] = {}
    for kind, table in ((AtomKind.MEM, mem), (AtomKind.EQ, eq)):
        for a, b in np.ndindex(*table.shape):
            value = int(table[a, b])
            if value not in chosen:
                chosen[value] = Atom(kind, Const(members[a]), Const(members[b]))
    return [chosen[v] for v in sorted(chosen)]


def check_soundness_spot(u: Universe, stage: Stage, report: Optional[Report] = None) -> Report:
    """Residuated validities evaluate to top on every instantiation by stage facts."""
    if report is None:
        report = new_report("soundness", u.quantale.name)
    q = u.quantale
    facts = _facts(u, stage.members)
    carrier = list(stage.members)
    for name, schema in SOUNDNESS_SCHEMAS:
        found = []
        for p, r_, s in cartesian(facts, repeat=3):
            sentence = schema(p, r_, s)
            value = eval_sentence(u, carrier, sentence)
            if value != q.top:
                found.append({"sentence": str(sentence), "value": q.labels[value]})
        report.expect(f"soundness.{name}", found, stage=stage.label, detail=f"{len(facts)} fact(s)")

    contraction = []
    for p in facts:
        value = eval_sentence(u, carrier, Imp(p, Strong(p, p)))
        if value != q.top:
            contraction.append({"fact": str(p), "value": q.labels[value]})
    if contraction:
        detail = "p -> p & p is not valid here"
    else:
        detail = "no contraction witness on these facts"
    report.add("soundness.contraction_fails", CheckStatus.INFO, stage.label, detail, contraction)
    return report


def check_substitution(
    u: Universe,
    stage: Stage,
    sweep: TemplateSweep,
    report: Optional[Report] = None,
    chunk_cells: int = 1 << 24,
) -> Report:
    """
    n-fold substitution: [f=g]^n . [theta(f)] <= [theta(g)] for every swept template.

    n is the smallest number of free occurrences of x among templates with the
    same valuation, which gives the strongest inequality. The sweep must be over
    `stage` alone.
    """
    if report is None:
        report = new_report("substitution", u.quantale.name)
    q = u.quantale
    m = len(stage)
    n_rows = len(sweep.rows)
    if m == 0 or n_rows == 0:
        report.expect("model.substitution", [], stage=stage.label, detail="empty stage")
        return report
    _, eq = u.atomic_tables(stage.members)
    width = m ** sweep.max_params
    values = sweep.arrays(0).reshape(n_rows, m, width)
    product = q.product_table.astype(np.uint8)
    leq = q.leq_table
    found: List[Dict[str, object]] = []
    counts = sweep.counts
    step = max(1, chunk_cells // max(1, m * m * width))
    for n in np.unique(counts):
        rows = np.flatnonzero(counts == n)
        weight = q.power_table(int(n)).astype(np.uint8)[eq]
        for start in range(0, len(rows), step):
            block = rows[start:start + step]
            a = values[block]
            lhs = product[weight[None, :, :, None], a[:, :, None, :]]
            ok = leq[lhs, a[:, None, :, :]]
            for r, f, g, b in np.argwhere(~ok)[:5]:
                params = np.unravel_index(int(b), (m,) * sweep.max_params) if sweep.max_params else ()
                found.append({
                    "template": str(sweep.rows[block[r]]),
                    "n": int(n),
                    "f": f"#{stage.members[f]}",
                    "g": f"#{stage.members[g]}",
                    "params": [f"#{stage.members[int(i)]}" for i in params],
                })
    report.expect(
        "model.substitution",
        found,
        stage=stage.label,
        detail=f"{n_rows} template valuation(s) up to depth {sweep.depth}",
    )
    return report
