"""Recursive-descent parser shared by the entire-function and surface-function grammars.

::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*      # '/' only where allowed
    factor := ['-'] atom ('^' uint)?
    atom   := complex-literal | variable | 'exp' '(' expr ')' | '(' expr ')'

A leading ``-`` directly in front of a number is part of the literal, so
``-2^2`` is ``4`` while ``-x^2`` is ``-(x^2)``.
"""
from __future__ import annotations

import re
from typing import Callable, NamedTuple

from .poly import parse_complex


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"\s*(?:(?P<imag>{_NUM}i(?![A-Za-z_0-9]))|(?P<num>{_NUM})|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; offsets are character positions."""
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        toks.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(Token("end", "", len(text)))
    return toks


class Builder(NamedTuple):
    const: Callable
    var: Callable
    add: Callable
    sub: Callable
    mul: Callable
    div: Callable | None
    neg: Callable
    exp: Callable
    pow: Callable


class Parser:
    def __init__(self, text: str, variables: tuple[str, ...], builder: Builder):
        self.text = text
        self.toks: list[Token] = []
        self.i = 0
        self.variables = variables
        self.b = builder

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _eat(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t.offset)
        self.i += 1
        return t

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self):
        try:
            self.toks = tokenize(self.text)
            e = self.expr()
            if self.tok.kind != "end":
                raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        except ParseError as err:
            # offsets are tracked per character; report bytes
            msg = str(err).rsplit(" at byte offset", 1)[0]
            raise ParseError(msg, len(self.text[: err.offset].encode())) from None
        return e

    def expr(self):
        e = self.term()
        while self._is_op("+", "-"):
            op = self._eat("op").text
            rhs = self.term()
            e = self.b.add(e, rhs) if op == "+" else self.b.sub(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self._is_op("*", "/"):
            t = self._eat("op")
            if t.text == "/" and self.b.div is None:
                raise ParseError("division is not allowed in this grammar", t.offset)
            rhs = self.factor()
            e = self.b.mul(e, rhs) if t.text == "*" else self.b.div(e, rhs)
        return e

    def factor(self):
        if self._is_op("-"):
            self._eat("op")
            if self.tok.kind in ("num", "imag"):
                base = self._number(negate=True)
            else:
                return self.b.neg(self.factor())
        else:
            base = self.atom()
        if self._is_op("^"):
            self._eat("op")
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                raise ParseError("exponent must be a non-negative integer", t.offset)
            self.i += 1
            base = self.b.pow(base, int(t.text))
        return base

    def _number(self, negate: bool = False):
        t = self.tok
        self.i += 1
        text = t.text
        val = parse_complex(text)
        return self.b.const(-val if negate else val)

    def atom(self):
        t = self.tok
        if t.kind in ("num", "imag"):
            return self._number()
        if t.kind == "name":
            self.i += 1
            if t.text == "exp":
                self._eat("op", "(")
                e = self.expr()
                self._eat("op", ")")
                return self.b.exp(e)
            if t.text == "i":
                return self.b.const(1j)
            if t.text in self.variables:
                return self.b.var(t.text)
            raise ParseError(f"unknown identifier {t.text!r}", t.offset)
        if self._is_op("("):
            self._eat("op")
            e = self.expr()
            self._eat("op", ")")
            return e
        got = t.text or "end of input"
        raise ParseError(f"unexpected {got!r}", t.offset)
