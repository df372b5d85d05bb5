"""
Exhaustive checks of the residuated-lattice identities on a validated quantale.

Every check is a vectorized scan over all pairs or triples; a failure carries the
first few offending tuples as witnesses.
"""
import logging
from typing import Dict, List, Optional

import numpy as np

from qlab.schemas.report import CheckStatus, Report, new_report
from .base import Quantale, audit_tables

logger = logging.getLogger(__name__)

AXIOMS = [
    "tables.square",
    "tables.index_range",
    "tables.bounds_in_range",
    "order.reflexive",
    "order.antisymmetric",
    "order.transitive",
    "lattice.join_exists",
    "lattice.meet_exists",
    "bounds.bottom_least",
    "bounds.top_greatest",
    "product.commutative",
    "product.associative",
    "product.unit_is_top",
    "product.distributes_over_joins",
    "residuum.adjunction",
]

WITNESS_LIMIT = 5


def _witnesses(q: Quantale, mask: np.ndarray, names: str) -> List[Dict[str, str]]:
    found = []
    for tup in np.argwhere(mask)[:WITNESS_LIMIT]:
        found.append({name: q.labels[int(i)] for name, i in zip(names, tup)})
    return found


def _pairs(q: Quantale):
    idx = np.arange(q.size)
    return idx[:, None], idx[None, :]


def _triples(q: Quantale):
    idx = np.arange(q.size)
    return idx[:, None, None], idx[None, :, None], idx[None, None, :]


def audit_report(q: Quantale, report: Optional[Report] = None) -> Report:
    """Re-audit the stored tables and record one entry per axiom."""
    if report is None:
        report = new_report("axioms", q.name)
    audit = audit_tables(q.labels, q.leq_table, q.product_table, q.bottom, q.top)
    by_axiom: Dict[str, list] = {}
    for v in audit.violations:
        by_axiom.setdefault(v.axiom, []).append(v.as_dict(q.labels))
    for axiom in AXIOMS:
        report.expect(f"axiom.{axiom}", by_axiom.pop(axiom, []))
    for axiom, found in by_axiom.items():
        report.expect(f"axiom.{axiom}", found)
    return report


def check_residuum_oracle(q: Quantale, report: Optional[Report] = None) -> Report:
    """Compare the residuum table with an element-wise recomputation of sup{z : x.z <= y}."""
    if report is None:
        report = new_report("residuum-oracle", q.name)
    mismatches = []
    for x in q.elements():
        for y in q.elements():
            expected = q.join_all(z for z in q.elements() if q.leq(q.product(x, z), y))
            if expected != q.residuum(x, y):
                mismatches.append({
                    "x": q.labels[x],
                    "y": q.labels[y],
                    "table": q.labels[q.residuum(x, y)],
                    "oracle": q.labels[expected],
                })
    report.expect("residuum.matches_sup_oracle", mismatches)
    return report


def is_idempotent(q: Quantale) -> bool:
    idx = np.arange(q.size)
    return bool((q.product_table[idx, idx] == idx).all())


def check_heyting_collapse(q: Quantale, report: Optional[Report] = None) -> Report:
    """An idempotent quantale has product = meet on every pair."""
    if report is None:
        report = new_report("heyting-collapse", q.name)
    if not is_idempotent(q):
        idx = np.arange(q.size)
        report.add(
            "idempotent.heyting_collapse",
            CheckStatus.INFO,
            detail="not idempotent; collapse does not apply",
            witnesses=_witnesses(q, q.product_table[idx, idx] != idx, "x"),
        )
        return report
    bad = q.product_table != q.meet_table
    if bad.any():
        report.add(
            "idempotent.heyting_collapse",
            CheckStatus.FAIL,
            detail="idempotent but product differs from meet",
            witnesses=_witnesses(q, bad, "xy"),
        )
    else:
        report.add(
            "idempotent.heyting_collapse",
            CheckStatus.PASS,
            detail="idempotent; product equals meet on all pairs (Heyting algebra)",
        )
    return report


def _residuation_items(q: Quantale, report: Report) -> None:
    L, P, M, R = q.leq_table, q.product_table, q.meet_table, q.residuum_table
    top, bottom = q.top, q.bottom
    idx = np.arange(q.size)
    X, Y = _pairs(q)
    X3, Y3, Z3 = _triples(q)

    report.expect("residuum.order_iff_top", _witnesses(q, L[X, Y] != (R[X, Y] == top), "xy"))
    report.expect("residuum.modus_ponens", _witnesses(q, ~L[P[X, R[X, Y]], Y], "xy"))
    report.expect("residuum.top_left_identity", _witnesses(q, R[top, idx] != idx, "y"))
    report.expect(
        "product.absorbs_bottom",
        _witnesses(q, (P[idx, bottom] != bottom) | (P[bottom, idx] != bottom), "x"),
    )
    report.expect("residuum.bottom_left_top", _witnesses(q, R[bottom, idx] != top, "y"))
    report.expect(
        "product.monotone", _witnesses(q, L[X3, Y3] & ~L[P[X3, Z3], P[Y3, Z3]], "xyz")
    )
    report.expect("product.below_meet", _witnesses(q, ~L[P[X, Y], M[X, Y]], "xy"))
    report.expect(
        "residuum.antitone_left", _witnesses(q, L[X3, Y3] & ~L[R[Y3, Z3], R[X3, Z3]], "xyz")
    )
    report.expect(
        "residuum.monotone_right", _witnesses(q, L[X3, Y3] & ~L[R[Z3, X3], R[Z3, Y3]], "xyz")
    )
    report.expect("residuum.currying", _witnesses(q, R[P[X3, Y3], Z3] != R[X3, R[Y3, Z3]], "xyz"))


def _negation_items(q: Quantale, report: Report) -> None:
    L, P, J, R, N = q.leq_table, q.product_table, q.join_table, q.residuum_table, q.neg_table
    M = q.meet_table
    top, bottom = q.top, q.bottom
    idx = np.arange(q.size)
    X, Y = _pairs(q)
    NN = N[N]
    E = P[R[X, Y], R[Y, X]]

    report.expect("negation.contradiction", _witnesses(q, P[idx, N] != bottom, "x"))
    report.expect("negation.double_negation_inflationary", _witnesses(q, ~L[idx, NN], "x"))
    report.expect("negation.de_morgan_join", _witnesses(q, N[J[X, Y]] != M[N[X], N[Y]], "xy"))
    report.expect("negation.de_morgan_join_product_below", _witnesses(q, ~L[P[N[X], N[Y]], N[J[X, Y]]], "xy"))
    report.expect(
        "negation.antitone",
        _witnesses(q, L[X, Y] & (~L[N[Y], N[X]] | ~L[NN[X], NN[Y]]), "xy"),
    )
    constants = []
    if N[bottom] != top:
        constants.append({"x": q.labels[bottom], "neg": q.labels[N[bottom]]})
    if N[top] != bottom:
        constants.append({"x": q.labels[top], "neg": q.labels[N[top]]})
    report.expect("negation.constants", constants)
    report.expect("equivalence.identity", _witnesses(q, (X == Y) != (E == top), "xy"))
    report.expect(
        "negation.double_negation_product", _witnesses(q, ~L[P[NN[X], NN[Y]], NN[P[X, Y]]], "xy")
    )
    report.expect("negation.triple_collapse", _witnesses(q, N[NN] != N, "x"))


def _general_failure_witnesses(q: Quantale, report: Report) -> None:
    """Identities that hold in Boolean algebras but not in every quantale."""
    L, P, J, N = q.leq_table, q.product_table, q.join_table, q.neg_table
    idx = np.arange(q.size)
    X, Y = _pairs(q)
    scans = [
        ("witness.excluded_middle_fails", J[idx, N] != q.top, "x"),
        ("witness.double_negation_not_deflationary", ~L[N[N], idx], "x"),
        ("witness.de_morgan_product_fails", N[P[X, Y]] != J[N[X], N[Y]], "xy"),
        ("witness.de_morgan_join_product_strict", N[J[X, Y]] != P[N[X], N[Y]], "xy"),
        ("witness.not_idempotent", P[idx, idx] != idx, "x"),
    ]
    for check, mask, names in scans:
        found = _witnesses(q, mask, names)
        detail = f"{int(mask.sum())} witness(es)" if found else "no witness"
        report.add(check, CheckStatus.INFO, detail=detail, witnesses=found)


def _boolean_core_items(q: Quantale, report: Report) -> None:
    core = np.array(sorted({q.bottom, q.top}))
    X, Y = core[:, None], core[None, :]
    closed = []
    for op, table in (
        ("residuum", q.residuum_table),
        ("meet", q.meet_table),
        ("join", q.join_table),
        ("product", q.product_table),
    ):
        out = table[X, Y]
        for i, j in np.argwhere(~np.isin(out, core)):
            closed.append({"op": op, "x": q.labels[core[i]], "y": q.labels[core[j]]})
    for x in core[~np.isin(q.neg_table[core], core)]:
        closed.append({"op": "neg", "x": q.labels[x]})
    report.expect("boolean_core.closed", closed)

    N = q.neg_table
    broken = []
    if (q.product_table[X, Y] != q.meet_table[X, Y]).any():
        broken.append({"law": "product equals meet"})
    if (q.join_table[core, N[core]] != q.top).any() or (q.meet_table[core, N[core]] != q.bottom).any():
        broken.append({"law": "complement"})
    if (N[N[core]] != core).any():
        broken.append({"law": "involution"})
    report.expect("boolean_core.boolean_algebra", broken)


def validate_theorem_suite(q: Quantale, report: Optional[Report] = None) -> Report:
    """
    Check every universally quantified residuation and negation identity.

    Args:
        q: A validated quantale
        report: Report to append to; a new one is created when omitted

    Returns:
        Report with one record per identity plus info records for the
        Boolean-only identities that q refutes
    """
    if report is None:
        report = new_report("theorem-suite", q.name)
    _residuation_items(q, report)
    _negation_items(q, report)
    _general_failure_witnesses(q, report)
    _boolean_core_items(q, report)
    if report.failed:
        logger.warning(f"❌ theorem suite failed on {q.name}")
    else:
        logger.info(f"✅ theorem suite passed on {q.name}")
    return report
