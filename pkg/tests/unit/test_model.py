"""
Unit tests for hereditarily finite sets, the V^Q universe, sentence evaluation and V stages.
"""
import pytest

from qlab.core.exceptions import BudgetExceededError, ForeignConstantError, QuantaleSourceError, UnboundVariableError
from qlab.formulas import parse
from qlab.model import (
    EMPTY,
    ClassicalStructure,
    EqualityMode,
    HFSet,
    Universe,
    build_v_stage,
    classical_truth,
    compare_equality_modes,
    dump_stages,
    eval_sentence,
    hat,
    hf_sets_up_to_rank,
    load_dump,
    powerset,
    two_valued_violations,
)
from qlab.quantales import QuantaleFactory
from qlab.schemas import HierarchyTag

pytestmark = pytest.mark.unit

ONE = HFSet([EMPTY])
TWO = HFSet([EMPTY, ONE])


class TestHFSets:
    def test_canonical_form(self):
        assert HFSet([ONE, EMPTY, ONE]) == TWO
        assert EMPTY.code == 0 and ONE.code == 1 and TWO.code == 3
        assert HFSet.from_int(3) == TWO
        assert EMPTY.rank == 1 and TWO.rank == 3
        assert str(TWO) == "{∅,{∅}}"

    def test_membership_and_subsets(self):
        assert EMPTY in ONE and ONE in TWO and TWO not in TWO
        assert ONE.issubset(TWO) and not TWO.issubset(ONE)
        assert TWO.is_transitive()
        assert not HFSet([ONE]).is_transitive()

    def test_stages_by_rank(self):
        assert hf_sets_up_to_rank(0) == []
        assert hf_sets_up_to_rank(1) == [EMPTY]
        assert hf_sets_up_to_rank(2) == [EMPTY, ONE]
        assert len(hf_sets_up_to_rank(3)) == 4
        assert len(hf_sets_up_to_rank(4)) == 16
        assert powerset([EMPTY, ONE]) == hf_sets_up_to_rank(3)

    def test_classical_truth_bounded_quantifiers(self):
        transitive = parse("A x. (x in a -> A y. (y in x -> y in a))")
        assert classical_truth(transitive, {"a": TWO})
        assert not classical_truth(transitive, {"a": HFSet([ONE])})
        assert classical_truth(parse("E x. (x in a & x = b)"), {"a": TWO, "b": ONE})
        with pytest.raises(UnboundVariableError):
            classical_truth(parse("x in a"), {"a": TWO})


class TestUniverse:
    def test_interning_is_canonical(self, universe, luk3):
        half = luk3.element("1/2")
        empty = universe.empty
        assert empty.id == 0 and empty.rank == 1
        f = universe.intern({empty.id: half})
        assert universe.intern([(empty.id, half)]) is f
        assert f.rank == 2
        assert universe.lookup({empty.id: half}) is f
        assert universe.lookup({empty.id: luk3.top}) is None

    def test_hand_computed_values(self, universe, luk3):
        half = luk3.element("1/2")
        empty = universe.empty.id
        f = universe.intern({empty: half}).id
        assert universe.val_mem(empty, f) == half
        assert universe.val_eq(f, f) == luk3.top
        assert universe.val_sub(f, empty) == half
        assert universe.val_eq(f, empty) == half
        # 1/2 . [f = empty] = 1/2 . 1/2 = 0 in lukasiewicz:3
        assert universe.val_mem(f, f) == luk3.bottom
        assert eval_sentence(universe, [empty, f], parse(f"E x. x in #{f}")) == half

    def test_foreign_ids_rejected(self, universe):
        with pytest.raises(ForeignConstantError):
            universe.val_eq(0, 0)
        universe.empty
        with pytest.raises(ForeignConstantError):
            universe.resolve(7)

    def test_equality_modes_agree_on_two_values(self, bool1):
        u = Universe(bool1)
        stages = build_v_stage(bool1, 3, universe=u)
        assert compare_equality_modes(u, stages[3].members) == []

    def test_meet_shadow_keeps_ids(self, luk3, universe, v2):
        meet = universe.shadow(EqualityMode.MEET)
        assert meet.equality == EqualityMode.MEET
        assert len(meet) == len(universe)
        f = universe.lookup({universe.empty.id: luk3.element("1/2")}).id
        # one of the two inclusions is top on V_2, so product and meet agree there
        assert meet.val_eq(f, universe.empty.id) == universe.val_eq(f, universe.empty.id)
        assert compare_equality_modes(universe, v2[2].members) == []


class TestEvaluation:
    def test_reflexivity_sentence(self, universe, v2, luk3):
        carrier = v2[2].members
        assert eval_sentence(universe, carrier, parse("A x. x = x")) == luk3.top

    def test_empty_has_no_members(self, universe, v2, luk3):
        assert eval_sentence(universe, v2[2].members, parse("E x. x in #0")) == luk3.bottom

    def test_top_and_equivalence(self, universe, v2, luk3):
        carrier = v2[2].members
        assert eval_sentence(universe, carrier, parse("top")) == luk3.top
        assert eval_sentence(universe, carrier, parse("#2 in #2 == bot")) == luk3.top

    def test_free_variables_need_bindings(self, universe, v2):
        with pytest.raises(UnboundVariableError):
            eval_sentence(universe, v2[2].members, parse("x in x"))
        with pytest.raises(ForeignConstantError):
            eval_sentence(universe, v2[2].members, parse("#99 in #0"))

    def test_classical_structure(self):
        structure = ClassicalStructure()
        carrier = hf_sets_up_to_rank(3)
        value = eval_sentence(structure, carrier, parse("A x. (x in #3 -> x sub #3)"))
        assert value == structure.quantale.top
        assert eval_sentence(structure, carrier, parse("#1 in #0")) == structure.quantale.bottom


class TestVStages:
    def test_stage_sizes(self, luk3, bool1):
        assert [len(s) for s in build_v_stage(luk3, 2)] == [0, 1, 4]
        assert len(build_v_stage(bool1, 3)[3]) == 27
        assert len(build_v_stage(luk3, 3)[3]) == 256

    def test_builds_into_an_empty_caller_universe(self, luk3):
        u = Universe(luk3)
        assert len(u) == 0
        stages = build_v_stage(luk3, 2, universe=u)
        assert len(u) == 4
        assert set(stages[2].members) == {0, 1, 2, 3}
        assert eval_sentence(u, stages[2].members, parse("E x. x in #2")) == luk3.element("1/2")

    def test_value_restriction(self, luk3):
        u = Universe(luk3)
        stages = build_v_stage(luk3, 3, (luk3.bottom, luk3.top), universe=u)
        assert len(stages[3]) == 27
        assert two_valued_violations(stages, u) == []

    def test_full_carrier_is_not_two_valued(self, luk3, universe, v2):
        found = two_valued_violations(v2, universe)
        assert found == [{"stage": 2, "element": "#2", "key": "#0", "value": "1/2"}]

    def test_budget(self, luk3):
        with pytest.raises(BudgetExceededError) as info:
            build_v_stage(luk3, 3, budget=100)
        assert [s.label for s in info.value.partial] == [0, 1, 2]

    def test_hat_images_are_two_valued(self, universe, luk3):
        images = [hat(s, universe) for s in hf_sets_up_to_rank(3)]
        assert all(v == luk3.top for image in images for v in image.values())
        assert universe.val_mem(hat(ONE, universe).id, hat(TWO, universe).id) == luk3.top
        assert universe.val_eq(hat(ONE, universe).id, hat(TWO, universe).id) == luk3.bottom


class TestDumps:
    def test_dump_reloads_with_the_same_ids(self, universe, v2, luk3):
        text = dump_stages(v2, universe, HierarchyTag.V, luk3.name, 2)
        assert "# hierarchy: V" in text
        assert "2 2 {0:1/2}" in text
        reloaded, stages, header = load_dump(text, luk3)
        assert header["quantale"] == "lukasiewicz:3"
        assert [s.members for s in stages] == [s.members for s in v2]
        for member in v2[2].members:
            assert reloaded.describe(member) == universe.describe(member)

    def test_malformed_dump(self, luk3):
        with pytest.raises(QuantaleSourceError):
            load_dump("0 1 {}\n1 2 {0:2/3}\n", luk3)
        with pytest.raises(QuantaleSourceError):
            load_dump("what is this\n", luk3)
        with pytest.raises(QuantaleSourceError):
            load_dump("1 1 {}\n", QuantaleFactory.create("lukasiewicz:3"))
