"""Recursive-descent parser for complex expressions in one variable z.

Grammar (ASCII only):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' power)?          # right-associative, integer exponent
    atom   := NUMBER | 'i' | 'z' | NAME '(' expr ')' | '(' expr ')'

NAME is one of exp, sin, cos.  'i' is the imaginary unit.  Exponents must
fold to integer constants.  Evaluation is numpy-vectorized over z.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExprSyntaxError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^()]))"
)
_FUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos}


@dataclass(frozen=True)
class Lit:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Lit, Var, Neg, Bin, Pow, Call]


class _Parser:
    def __init__(self, src: str):
        if not src.isascii():
            bad = next(i for i, ch in enumerate(src) if not ch.isascii())
            raise ExprSyntaxError("non-ASCII input", bad)
        self.src = src
        self.pos = 0
        self.tokens = []
        self._tokenize()
        self.idx = 0

    def _tokenize(self):
        pos = 0
        while pos < len(self.src):
            if self.src[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(self.src, pos)
            if not m or m.start() != pos:
                raise ExprSyntaxError(f"unexpected character {self.src[pos]!r}", pos)
            if m.lastgroup is None and m.group("num") is None:
                raise ExprSyntaxError(f"unexpected character {self.src[pos]!r}", pos)
            if m.group("num") is not None:
                self.tokens.append(("num", m.group(0).strip(), pos))
            elif m.group("name") is not None:
                self.tokens.append(("name", m.group("name"), pos))
            else:
                self.tokens.append(("op", m.group("op"), pos))
            pos = m.end()
        self.tokens.append(("eof", "", len(self.src)))

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise ExprSyntaxError(f"trailing input {text!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Bin(text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Bin(text, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            exp_node = self.power()  # right-associative
            exponent = _fold_int(exp_node, pos)
            return Pow(base, exponent)
        return base

    def atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "num":
            return Lit(complex(float(text)))
        if kind == "name":
            if text == "z":
                return Var()
            if text == "i":
                return Lit(1j)
            if text in _FUNCS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ExprSyntaxError(f"unknown name {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected token {text or 'end of input'!r}", pos)


def _fold_int(node: Node, pos: int) -> int:
    """Exponents must be constant integers (no z, integral value)."""
    try:
        val = evaluate(node, None)
    except TypeError:
        raise ExprSyntaxError("exponent depends on z", pos) from None
    if val.imag != 0 or val.real != int(val.real):
        raise ExprSyntaxError(f"non-integer exponent {val}", pos)
    return int(val.real)


def parse_expr(src: str) -> Node:
    return _Parser(src).parse()


def evaluate(node: Node, z):
    """Evaluate at z (complex scalar or ndarray); z=None rejects Var via TypeError."""
    if isinstance(node, Lit):
        return node.value if np.isscalar(z) or z is None else np.broadcast_to(node.value, np.shape(z)).astype(complex)
    if isinstance(node, Var):
        if z is None:
            raise TypeError("expression depends on z")
        return z
    if isinstance(node, Neg):
        return -evaluate(node.arg, z)
    if isinstance(node, Bin):
        a = evaluate(node.left, z)
        b = evaluate(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        base = evaluate(node.base, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(base, node.exponent) if not np.isscalar(base) else base**node.exponent
    if isinstance(node, Call):
        return _FUNCS[node.name](evaluate(node.arg, z))
    raise TypeError(f"not an expression node: {node!r}")


def compile_expr(src: str):
    """Parse once, return a vectorized complex callable of z."""
    ast = parse_expr(src)

    def fn(z):
        return evaluate(ast, np.asarray(z, dtype=complex))

    return fn
