"""
Unit tests for quantale construction, derived operations, the factory and the file loader.
"""
from fractions import Fraction

import numpy as np
import pytest

from qlab.core.exceptions import (
    ForeignElementError,
    InvalidPosetError,
    QuantaleSourceError,
    QuantaleValidationError,
    UnknownQuantaleError,
)
from qlab.quantales import (
    Poset,
    QuantaleFactory,
    build_from_tables,
    dump_quantale,
    heyting_from_poset,
    load_quantale,
    load_quantale_file,
)

pytestmark = pytest.mark.unit


def test_lukasiewicz_tables(luk3, luk5):
    half = luk3.element("1/2")
    assert luk3.residuum(half, luk3.bottom) == half
    assert luk3.product(half, half) == luk3.bottom

    q = luk5
    assert q.residuum(q.element("3/4"), q.element("1/2")) == q.element("3/4")
    assert q.product(q.element("3/4"), q.element("3/4")) == q.element("1/2")
    assert q.values == tuple(Fraction(i, 4) for i in range(5))


def test_element_lookup_by_value(luk5):
    assert luk5.element("0.5") == luk5.element("1/2")
    with pytest.raises(ForeignElementError):
        luk5.element("2/3")


def test_foreign_element_rejected(luk3):
    with pytest.raises(ForeignElementError):
        luk3.product(0, 3)
    with pytest.raises(ForeignElementError):
        luk3.meet(True, 0)


def test_derived_operations(luk5):
    q = luk5
    quarter, half = q.element("1/4"), q.element("1/2")
    assert q.neg(quarter) == q.element("3/4")
    assert q.equiv(half, half) == q.top
    assert q.equiv(quarter, half) == q.element("3/4")
    assert q.power(q.element("3/4"), 0) == q.top
    assert q.power(q.element("3/4"), 2) == half
    assert q.power(q.element("3/4"), 3) == quarter
    assert q.join_all([]) == q.bottom
    assert q.meet_all([]) == q.top
    assert q.join_all([quarter, half]) == half


def test_builtin_sizes():
    assert QuantaleFactory.create("boolean:2").size == 4
    assert QuantaleFactory.create("godel:5").size == 5
    assert QuantaleFactory.create("heyting:chain:4").size == 5
    assert QuantaleFactory.create("heyting:antichain:2").size == 4


def test_godel_product_is_meet():
    godel = QuantaleFactory.create("godel:4")
    idx = np.arange(godel.size)
    assert (godel.product_table[idx, idx] == idx).all()
    assert (godel.product_table == godel.meet_table).all()


def test_factory_aliases_and_errors():
    assert QuantaleFactory.create("luk:3").name == "lukasiewicz:3"
    with pytest.raises(UnknownQuantaleError):
        QuantaleFactory.create("product:3")
    with pytest.raises(QuantaleSourceError):
        QuantaleFactory.create("lukasiewicz:x")
    with pytest.raises(QuantaleSourceError):
        QuantaleFactory.create("lukasiewicz:1")
    with pytest.raises(QuantaleSourceError):
        QuantaleFactory.create("heyting:tree:3")


def test_invalid_poset():
    poset = Poset(("a", "b"), ((True, True), (True, True)))
    with pytest.raises(InvalidPosetError):
        heyting_from_poset(poset)


def test_non_commutative_tables_rejected():
    with pytest.raises(QuantaleValidationError) as info:
        build_from_tables(["0", "1"], [[1, 1], [0, 1]], [[0, 0], [1, 1]], 0, 1)
    axioms = {v.axiom for v in info.value.violations}
    assert "product.commutative" in axioms
    assert "product.unit_is_top" in axioms


def test_quantale_file_round_trip(tmp_path, luk5):
    path = tmp_path / "l5.json"
    path.write_text(dump_quantale(luk5), encoding="utf-8")
    loaded = load_quantale_file(path)
    assert loaded.labels == luk5.labels
    assert (loaded.residuum_table == luk5.residuum_table).all()
    assert loaded.values == luk5.values


def test_load_quantale_errors(tmp_path, broken_quantale_file):
    with pytest.raises(QuantaleValidationError):
        load_quantale(str(broken_quantale_file))

    bad_yaml = tmp_path / "bad.yaml"
    bad_yaml.write_text("labels: ['0', '1'\nleq: [[1]]\n", encoding="utf-8")
    with pytest.raises(QuantaleSourceError) as info:
        load_quantale(str(bad_yaml))
    assert info.value.error_code == "QUANTALE_SOURCE_ERROR"

    wrong_shape = tmp_path / "shape.yaml"
    wrong_shape.write_text(
        "labels: ['0', '1']\nleq: [[1, 1]]\nproduct: [[0, 0], [0, 1]]\nbottom: 0\ntop: 1\n",
        encoding="utf-8",
    )
    with pytest.raises(QuantaleSourceError):
        load_quantale(str(wrong_shape))

    with pytest.raises(QuantaleSourceError):
        load_quantale("no-such-file")
