"""
Definability operators, the constructible hierarchies, classical L and the j map.
"""
from .definability import DefResult, Definer, def_strong, def_weak, sweep_stage, weak_domains
from .hierarchy import (
    Hierarchy,
    build_bb_L,
    build_classical_L,
    build_frak_L,
    check_classical_ranks,
    check_powerset_oracle,
    check_two_valued,
)
from .jmap import JMap, build_j, joint_sweep, verify_j
from .lemmas import (
    check_extension_lemma,
    check_hat_into_frak,
    check_lemma_equality,
    check_monotonicity,
    check_reflexivity,
    extension_pairs,
    stage_sweep,
)

__all__ = [
    "DefResult",
    "Definer",
    "Hierarchy",
    "JMap",
    "build_bb_L",
    "build_classical_L",
    "build_frak_L",
    "build_j",
    "check_classical_ranks",
    "check_extension_lemma",
    "check_hat_into_frak",
    "check_lemma_equality",
    "check_monotonicity",
    "check_powerset_oracle",
    "check_reflexivity",
    "check_two_valued",
    "def_strong",
    "def_weak",
    "extension_pairs",
    "joint_sweep",
    "stage_sweep",
    "sweep_stage",
    "verify_j",
    "weak_domains",
]
