"""
Unit tests for the formula AST, the parser and the template enumerator.
"""
from hypothesis import given, settings, strategies as st
import pytest

from qlab.core.exceptions import FormulaParseError
from qlab.formulas import (
    Atom,
    AtomKind,
    Bot,
    ConnectiveSet,
    Const,
    Equiv,
    Exists,
    Forall,
    FormulaTemplate,
    Imp,
    Neg,
    Or,
    Strong,
    Top,
    Var,
    Weak,
    constants,
    count_free_occurrences,
    depth,
    enumerate_templates,
    free_vars,
    is_sentence,
    parse,
    parse_many,
    substitute,
    to_text,
)
from qlab.model.transfer import BOUNDED_SENTENCES

pytestmark = pytest.mark.unit

x, y, z, a = Var("x"), Var("y"), Var("z"), Var("a")


def mem(lhs, rhs):
    return Atom(AtomKind.MEM, lhs, rhs)


def eq(lhs, rhs):
    return Atom(AtomKind.EQ, lhs, rhs)


class TestParser:
    def test_atoms_and_constants(self):
        assert parse("x in y") == mem(x, y)
        assert parse("#3 = x") == eq(Const(3), x)
        assert parse("x sub #0") == Atom(AtomKind.SUB, x, Const(0))
        assert parse("bot") == Bot()
        assert parse("top") == Top()

    def test_precedence(self):
        assert parse("x in y & y in z -> x in z") == Imp(Strong(mem(x, y), mem(y, z)), mem(x, z))
        assert parse("x in y /\\ y in z & x = z") == Weak(mem(x, y), Strong(mem(y, z), eq(x, z)))
        assert parse("~x in y \\/ x = y") == Or(Neg(mem(x, y)), eq(x, y))
        assert parse("x = y -> y = z -> x = z") == Imp(eq(x, y), Imp(eq(y, z), eq(x, z)))
        assert parse("x = y == y = x") == Equiv(eq(x, y), eq(y, x))

    def test_quantifier_scope_extends_right(self):
        assert parse("A x. x in y -> x = x") == Forall("x", Imp(mem(x, y), eq(x, x)))
        assert parse("(E x. x in y) & y = y") == Strong(Exists("x", mem(x, y)), eq(y, y))

    def test_quantifier_as_right_operand(self):
        assert parse("x in y -> A z. z in x") == Imp(mem(x, y), Forall("z", mem(z, x)))
        assert parse("x in y & E z. z in x") == Strong(mem(x, y), Exists("z", mem(z, x)))
        assert parse("x = y \\/ E z. z in x -> z = y") == Or(
            eq(x, y), Exists("z", Imp(mem(z, x), eq(z, y)))
        )
        assert parse("x = y /\\ A z. z in x") == Weak(eq(x, y), Forall("z", mem(z, x)))
        assert parse("x = y == E z. z in x") == Equiv(eq(x, y), Exists("z", mem(z, x)))
        assert parse("~A x. x in y") == Neg(Forall("x", mem(x, y)))

    def test_nested_quantifier_inside_a_group(self):
        text = "A x. (x in a -> A y. (y in x -> y in a))"
        assert parse(text) == Forall("x", Imp(mem(x, a), Forall("y", Imp(mem(y, x), mem(y, a)))))
        assert parse("(A x. x in a) & top -> a = a") == Imp(Strong(Forall("x", mem(x, a)), Top()), eq(a, a))

    def test_bounded_sentences_parse_and_reprint(self):
        for name, text in BOUNDED_SENTENCES:
            f = parse(text)
            assert parse(to_text(f)) == f, name
            assert free_vars(f) <= {"a", "b"}, name

    def test_errors_carry_position(self):
        with pytest.raises(FormulaParseError) as info:
            parse("x in")
        assert info.value.line == 1
        assert info.value.column is not None
        with pytest.raises(FormulaParseError):
            parse("A X. x in x")

    def test_parse_many_skips_blank_lines(self):
        formulas = parse_many("x in y\n\n  \nA x. x = x\n")
        assert formulas == [mem(x, y), Forall("x", eq(x, x))]


NAMES = st.sampled_from(["x", "y1", "z1", "z2", "a"])
TERMS = NAMES.map(Var) | st.integers(min_value=0, max_value=9).map(Const)
ATOMS = st.one_of(
    st.builds(lambda k, l, r: Atom(k, l, r), st.sampled_from(list(AtomKind)), TERMS, TERMS),
    st.just(Bot()),
    st.just(Top()),
)


def _extend(children):
    binary = st.sampled_from([Strong, Weak, Or, Imp, Equiv])
    return st.one_of(
        st.builds(lambda op, l, r: op(l, r), binary, children, children),
        st.builds(Neg, children),
        st.builds(lambda q, v, b: q(v, b), st.sampled_from([Forall, Exists]), NAMES, children),
    )


FORMULAS = st.recursive(ATOMS, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(FORMULAS)
def test_printing_then_parsing_is_identity(f):
    assert parse(to_text(f)) == f


class TestAst:
    def test_free_vars_and_sentences(self):
        f = Forall("x", Imp(mem(x, y), Exists("z", mem(z, x))))
        assert free_vars(f) == {"y"}
        assert not is_sentence(f)
        assert is_sentence(Forall("y", f))
        assert constants(parse("#1 in x & #4 = #1")) == {1, 4}

    def test_depth(self):
        assert depth(mem(x, y)) == 0
        assert depth(Neg(mem(x, y))) == 1
        assert depth(parse("A z. (z in x & ~z = y)")) == 3

    def test_substitute_avoids_capture(self):
        f = Exists("y", mem(y, x))
        g = substitute(f, "x", y)
        assert isinstance(g, Exists)
        assert g.var != "y"
        assert g.body == mem(Var(g.var), y)

    def test_substitute_leaves_bound_occurrences(self):
        f = Strong(mem(x, a), Forall("x", eq(x, x)))
        assert substitute(f, "x", Const(2)) == Strong(mem(Const(2), a), Forall("x", eq(x, x)))

    def test_count_free_occurrences(self):
        f = parse("x in x & (A x. x = y) & x = y")
        assert count_free_occurrences(f, "x") == 3
        assert count_free_occurrences(f, "y") == 2

    def test_template_rejects_stray_variables(self):
        with pytest.raises(ValueError):
            FormulaTemplate(mem(x, z), "x", ("y1",))


class TestEnumeration:
    def test_depth_zero_without_parameters(self):
        bodies = [t.body for t in enumerate_templates(0, 0)]
        assert bodies == [Bot(), Top(), mem(x, x), eq(x, x)]

    def test_depth_one_count_without_parameters(self):
        templates = list(enumerate_templates(1, 0))
        assert len(templates) == 4 + 80
        quantified = [t for t in templates if isinstance(t.body, (Forall, Exists))]
        assert len(quantified) == 12
        assert all(free_vars(t.body) <= {"x"} for t in templates)

    def test_order_is_stable(self):
        first = [str(t) for t in enumerate_templates(1, 1)]
        second = [str(t) for t in enumerate_templates(1, 1)]
        assert first == second

    def test_classical_connectives_drop_strong_conjunction(self):
        templates = list(enumerate_templates(1, 0, ConnectiveSet.CLASSICAL))
        assert not any(isinstance(t.body, Strong) for t in templates)
        assert len(templates) == 4 + 4 + 3 * 16 + 12

    def test_negative_bounds_rejected(self):
        with pytest.raises(ValueError):
            list(enumerate_templates(-1, 0))
