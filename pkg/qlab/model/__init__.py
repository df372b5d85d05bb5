"""
The quantale-valued universe V^Q, hereditarily finite sets and the evaluators over both.
"""
from .evaluation import ClassicalStructure, Structure, eval_sentence, two_element_boolean
from .hfsets import EMPTY, HFSet, classical_truth, hf_sets_up_to_rank, powerset
from .stages import Stage, build_v_stage, dump_stages, hat, load_dump, two_valued_violations
from .sweep import DefinableColumn, Interpretation, TemplateSweep, saturate
from .transfer import (
    bounded_sentences,
    check_hat_surjectivity,
    check_hat_transfer,
    check_soundness_spot,
    check_substitution,
)
from .universe import EqualityMode, Universe, VElem, compare_equality_modes

__all__ = [
    "EMPTY",
    "ClassicalStructure",
    "DefinableColumn",
    "EqualityMode",
    "HFSet",
    "Interpretation",
    "Stage",
    "Structure",
    "TemplateSweep",
    "Universe",
    "VElem",
    "bounded_sentences",
    "build_v_stage",
    "check_hat_surjectivity",
    "check_hat_transfer",
    "check_soundness_spot",
    "check_substitution",
    "classical_truth",
    "compare_equality_modes",
    "dump_stages",
    "eval_sentence",
    "hat",
    "hf_sets_up_to_rank",
    "load_dump",
    "powerset",
    "saturate",
    "two_element_boolean",
    "two_valued_violations",
]
