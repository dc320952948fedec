"""Textual polynomial syntax: ``(D + 2*L)*n - 3/2*u^2`` and friends.

Expressions are parsed into an :class:`MPoly` over a caller-supplied list of
variable names.  Generator names are ordinary variables here; callers that
need "polynomial times generator" shape check linearity afterwards.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .poly import MPoly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str, line: int):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind) + 1
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str], line: int, col_offset: int):
        self.tokens = _tokenize(text, line)
        self.i = 0
        self.names = list(names)
        self.nv = len(names)
        self.line = line
        self.off = col_offset

    def error(self, msg: str, tok=None):
        tok = tok or self.tokens[self.i]
        raise ParseError(msg, self.line, tok[2] + self.off)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value:
            self.error(f"expected {value!r}", tok)

    def parse(self) -> MPoly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> MPoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MPoly:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = acc * self.power()
            elif tok[0] in ("num", "name") or tok[1] == "(":
                # juxtaposition multiplies: "2 (D + 1)", "2L"
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.error("exponent must be a nonnegative integer", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> MPoly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return MPoly.const(Fraction(val), self.nv)
        if kind == "name":
            if val not in self.names:
                self.error(f"unknown symbol {val!r}", tok)
            return MPoly.gen(self.names.index(val), self.nv)
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if val == "-":
            return -self.power()
        self.error(f"unexpected token {val!r}" if val else "unexpected end of expression", tok)


def parse_poly(text: str, names: Sequence[str], line: int = 1, col_offset: int = 0) -> MPoly:
    """Parse ``text`` into an MPoly over ``names``.

    >>> parse_poly("(D + 2*L)", ["L", "D"]).to_str(["L", "D"])
    '2*L + D'
    """
    return _Parser(text, names, line, col_offset).parse()


def parse_linear(
    text: str,
    coeff_names: Sequence[str],
    gen_names: Sequence[str],
    line: int = 1,
    col_offset: int = 0,
) -> dict[str, MPoly]:
    """Parse a sum of ``poly * generator`` terms.

    Returns ``{generator: coefficient MPoly over coeff_names}``.  Raises if
    any monomial is not of degree exactly one in the generators (a bare
    ``0`` is allowed and yields an empty map).
    """
    names = list(coeff_names) + list(gen_names)
    p = parse_poly(text, names, line, col_offset)
    nc = len(coeff_names)
    out: dict[str, dict] = {}
    for e, c in p.terms.items():
        gpart = e[nc:]
        if sum(gpart) != 1:
            raise ParseError(
                "each term must contain exactly one generator", line, col_offset + 1
            )
        g = gen_names[gpart.index(1)]
        out.setdefault(g, {})[e[:nc]] = c
    return {g: MPoly(t, nc) for g, t in out.items()}
