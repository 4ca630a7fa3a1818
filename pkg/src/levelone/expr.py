"""A small product language for naming forms on the command line.

Grammar::

    expr     := factor (("*" | "/") factor)*
    factor   := atom ("^" exponent)?
    exponent := ["-"] INT | "(" ["-"] INT ")"
    atom     := NAME | INT | "(" expr ")"

Names: ``E<k>`` (including ``E0``), ``delta``, ``j``, ``eigenform<k>``, ``g<m>``.
Example: ``delta*E6*E4^2`` or ``E4^2*E6^3*delta^-4``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .classical import delta, eisenstein, j_invariant
from .errors import FormSyntaxError
from .hecke import eigenform
from .nonordinary import g_form
from .qseries import QSeries, to_precision

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_]+\d*)|(?P<int>\d+)|(?P<op>[*/^()\-]))")

Node = tuple


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise FormSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise FormSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take("op")[1]
            node = (op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take("op", "^")
            node = ("^", node, self.exponent())
        return node

    def exponent(self) -> int:
        paren = self.peek()[:2] == ("op", "(")
        if paren:
            self.take("op", "(")
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take("op", "-")
            sign = -1
        e = sign * int(self.take("int")[1])
        if paren:
            self.take("op", ")")
        return e

    def atom(self) -> Node:
        kind, value, pos = self.peek()
        if kind == "name":
            self.i += 1
            return ("name", _check_name(value, pos), pos)
        if kind == "int":
            self.i += 1
            return ("int", int(value), pos)
        if (kind, value) == ("op", "("):
            self.take("op", "(")
            node = self.expr()
            self.take("op", ")")
            return node
        raise FormSyntaxError(f"expected a form, found {value or 'end of input'!r}", pos)


_NAME = re.compile(r"(E|eigenform|g)(\d+)$|(delta|Delta|j)$")


def _check_name(name: str, pos: int) -> str:
    if not _NAME.match(name):
        raise FormSyntaxError(f"unknown form {name!r}", pos)
    return name


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


def _leaf(name: str, n: int) -> QSeries:
    m = _NAME.match(name)
    if m.group(3):
        return j_invariant(n) if m.group(3) == "j" else delta(n)
    head, index = m.group(1), int(m.group(2))
    if head == "E":
        return eisenstein(index, n)
    if head == "eigenform":
        return eigenform(index, n)
    return g_form(index, n)


def _eval(node: Node, n: int) -> Union[QSeries, Fraction]:
    tag = node[0]
    if tag == "name":
        return _leaf(node[1], n)
    if tag == "int":
        return Fraction(node[1])
    if tag == "^":
        return _eval(node[1], n) ** node[2]
    left, right = _eval(node[1], n), _eval(node[2], n)
    return left * right if tag == "*" else left / right


def evaluate(text_or_node: Union[str, Node], prec: int) -> QSeries:
    """Evaluate a form expression to ``O(q^prec)``."""
    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node

    def build(n: int) -> QSeries:
        value = _eval(node, n)
        if isinstance(value, Fraction):
            return QSeries([value], 0, n, weight=0)
        return value

    return to_precision(build, prec, start=prec + 2)
