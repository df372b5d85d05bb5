"""
Concrete syntax for formulas, parsed with lark.

Precedence from loosest to tightest: quantifiers (scope to the end of the
enclosing group), ==, -> (right associative), \\/, /\\, &, ~.
"""
from functools import lru_cache
import logging
from typing import List

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from qlab.core.exceptions import FormulaParseError
from .ast import (
    Atom,
    AtomKind,
    Bot,
    Const,
    Equiv,
    Exists,
    Forall,
    Formula,
    Imp,
    Neg,
    Or,
    Strong,
    Top,
    Var,
    Weak,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    ?start: formula

    ?formula: equiv_q

    // The *_q rules may end in a quantifier; the bare rules never do,
    // so a quantifier always takes the rest of its group.
    ?equiv_q: imp_q
            | equiv "==" imp_q          -> equiv_op
    ?equiv: imp
          | equiv "==" imp              -> equiv_op

    ?imp_q: disj_q
          | disj "->" imp_q             -> imp_op
    ?imp: disj
        | disj "->" imp                 -> imp_op

    ?disj_q: wconj_q
           | disj "\\/" wconj_q         -> or_op
    ?disj: wconj
         | disj "\\/" wconj             -> or_op

    ?wconj_q: sconj_q
            | wconj "/\\" sconj_q       -> weak_op
    ?wconj: sconj
          | wconj "/\\" sconj           -> weak_op

    ?sconj_q: unary_q
            | sconj "&" unary_q         -> strong_op
    ?sconj: unary
          | sconj "&" unary             -> strong_op

    ?unary_q: "~" unary_q               -> neg_op
            | quant
            | primary
    ?unary: "~" unary                   -> neg_op
          | primary

    ?quant: "A" NAME "." formula        -> forall
          | "E" NAME "." formula        -> exists

    ?primary: atom
            | "bot"                     -> bot
            | "top"                     -> top
            | "(" formula ")"

    atom: term "in" term                -> mem
        | term "=" term                 -> eq
        | term "sub" term               -> sub

    ?term: NAME                         -> var
         | CONST                        -> const

    NAME: /[a-z_][a-z0-9_]*/
    CONST: /#[0-9]+/

    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class FormulaTransformer(Transformer):
    """Turn the lark parse tree into AST nodes."""

    def var(self, name):
        return Var(str(name))

    def const(self, token):
        return Const(int(str(token)[1:]))

    def mem(self, lhs, rhs):
        return Atom(AtomKind.MEM, lhs, rhs)

    def eq(self, lhs, rhs):
        return Atom(AtomKind.EQ, lhs, rhs)

    def sub(self, lhs, rhs):
        return Atom(AtomKind.SUB, lhs, rhs)

    def bot(self):
        return Bot()

    def top(self):
        return Top()

    def neg_op(self, body):
        return Neg(body)

    def strong_op(self, left, right):
        return Strong(left, right)

    def weak_op(self, left, right):
        return Weak(left, right)

    def or_op(self, left, right):
        return Or(left, right)

    def imp_op(self, left, right):
        return Imp(left, right)

    def equiv_op(self, left, right):
        return Equiv(left, right)

    def forall(self, name, body):
        return Forall(str(name), body)

    def exists(self, name, body):
        return Exists(str(name), body)


@lru_cache(maxsize=1)
def formula_parser() -> Lark:
    return Lark(GRAMMAR, start="start", parser="lalr")


def _describe(e: UnexpectedInput) -> str:
    if isinstance(e, UnexpectedCharacters):
        return f"unexpected character {e.char!r}"
    if isinstance(e, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(e, UnexpectedToken):
        if e.token.type == "$END":
            return "unexpected end of input"
        return f"unexpected token {str(e.token)!r}"
    return "syntax error"


def parse(text: str) -> Formula:
    """
    Parse one formula.

    Raises:
        FormulaParseError: With the line and column of the offending input
    """
    try:
        tree = formula_parser().parse(text)
    except UnexpectedInput as e:
        line = getattr(e, "line", None)
        column = getattr(e, "column", None)
        if not isinstance(line, int) or line < 0:
            line, column = text.count("\n") + 1, len(text.rsplit("\n", 1)[-1]) + 1
        raise FormulaParseError(text, line, column, _describe(e)) from None
    return FormulaTransformer().transform(tree)


def parse_many(text: str) -> List[Formula]:
    """Parse a batch file, one formula per nonblank line."""
    formulas = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            formulas.append(parse(line))
        except FormulaParseError as e:
            raise FormulaParseError(line, number, e.column, e.message) from None
    logger.debug(f"parsed {len(formulas)} formula(s)")
    return formulas
