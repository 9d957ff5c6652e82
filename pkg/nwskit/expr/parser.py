"""
Recursive-descent parser for coefficient and operator expressions.

Grammar (no implicit multiplication):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"
"""
import re
from typing import Iterable, List, Optional, Tuple

from nwskit.exceptions import ExprSyntaxError, UndeclaredVariableError
from .nodes import (
    Expr, Num, Const, Var, Func, Neg, Add, Sub, Mul, Div, Pow,
    CONSTANTS, FUNCTIONS,
)

DEFAULT_VARS = frozenset({"t", "x", "u"})

token_pat = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

Token = Tuple[str, str, int]  # kind, text, byte offset


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = token_pat.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"Unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Iterable[str]):
        self.tokens = tokenize(text)
        self.pos = 0
        self.variables = frozenset(variables)

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, text, _ = self.current
        if kind == "op" and text == op:
            self.pos += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            kind, text, offset = self.current
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"Expected {op!r}, found {found}", offset)

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, offset = self.current
        if kind != "end":
            raise ExprSyntaxError(f"Unexpected token {text!r}", offset)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while True:
            if self.accept("+"):
                left = Add(left, self.term())
            elif self.accept("-"):
                left = Sub(left, self.term())
            else:
                return left

    def term(self) -> Expr:
        left = self.factor()
        while True:
            if self.accept("*"):
                left = Mul(left, self.factor())
            elif self.accept("/"):
                left = Div(left, self.factor())
            else:
                return left

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.power())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            # right-associative: the exponent is a full factor
            return Pow(base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "number":
            return Num(float(text))
        if kind == "ident":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(text, arg)
            if text in CONSTANTS:
                return Const(text)
            if text in self.variables:
                return Var(text)
            raise UndeclaredVariableError(text, offset)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"Unexpected {found}", offset)


def parse(text: str, variables: Optional[Iterable[str]] = None) -> Expr:
    """
    Parse expression text over a set of declared variables.

    Args:
        text: Expression source.
        variables: Declared variable names (default {t, x, u}).

    Returns:
        The expression tree.

    Raises:
        ExprSyntaxError: On malformed input, with the byte offset.
        UndeclaredVariableError: On an identifier that is not declared.
    """
    return _Parser(text, DEFAULT_VARS if variables is None else variables).parse()
