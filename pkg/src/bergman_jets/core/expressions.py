"""Parser for the polynomial text syntax, e.g. ``z1*zb'1 + pi^-1``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .coefficients import GaussianRational, PiCoeff
from .errors import ParseError, UnknownVariableError
from .multipoly import MultiPoly, VarFamily, VarId

_TOKEN_PATTERNS = [
    ("NUMBER", r"\d+"),
    ("VAR", r"zb'\d+|z'\d+|zb\d+|z\d+"),
    ("PI", r"pi\b|pi(?=\^|\*|\s|\)|$|[+-])"),
    ("I", r"i\b|i(?=\*|\s|\)|$|[+-])"),
    ("OP", r"[+\-*/^()]"),
    ("WS", r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_PATTERNS))

_VAR_FAMILIES = {"zb'": VarFamily.ZBP, "z'": VarFamily.ZP, "zb": VarFamily.ZB, "z": VarFamily.Z}


@dataclass
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str, offset: int = 0) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", offset + pos)
        kind = match.lastgroup
        if kind != "WS":
            tokens.append(Token(kind, match.group(), offset + pos))
        pos = match.end()
    tokens.append(Token("END", "", offset + len(text)))
    return tokens


def parse_var(text: str) -> VarId:
    for prefix, family in _VAR_FAMILIES.items():
        if text.startswith(prefix) and text[len(prefix):].isdigit():
            index = int(text[len(prefix):])
            if index < 1:
                raise ValueError(f"variable indices start at 1: {text}")
            return VarId(family, index - 1)
    raise ValueError(f"not a variable: {text}")


class _PolyParser:
    def __init__(self, text: str, dims: Tuple[int, int], offset: int):
        self.tokens = tokenize(text, offset)
        self.index = 0
        self.dims = dims

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text:
            raise ParseError(f"expected {text!r}, found {self.current.text or 'end of input'!r}", self.current.position)
        return self.advance()

    def parse(self) -> MultiPoly:
        if self.current.kind == "END":
            raise ParseError("empty expression", self.current.position)
        poly = self.expr()
        if self.current.kind != "END":
            raise ParseError(f"unexpected {self.current.text!r}", self.current.position)
        return poly

    def expr(self) -> MultiPoly:
        sign = 1
        if self.current.text in "+-" and self.current.kind == "OP":
            sign = -1 if self.advance().text == "-" else 1
        total = self.term().scale(sign)
        while self.current.kind == "OP" and self.current.text in ("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
            total = total + self.term().scale(sign)
        return total

    def term(self) -> MultiPoly:
        value = self.factor()
        while self.current.kind == "OP" and self.current.text == "*":
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> MultiPoly:
        token = self.current
        base = self.atom()
        if self.current.kind == "OP" and self.current.text == "^":
            self.advance()
            negative = False
            if self.current.text == "-":
                self.advance()
                negative = True
            if self.current.kind != "NUMBER":
                raise ParseError("expected integer exponent", self.current.position)
            power = int(self.advance().text)
            if negative:
                if token.kind != "PI":
                    raise ParseError("negative exponents are only allowed on pi", token.position)
                return MultiPoly.const(PiCoeff.pi_power(-power), self.dims)
            result = MultiPoly.one(self.dims)
            for _ in range(power):
                result = result * base
            return result
        return base

    def atom(self) -> MultiPoly:
        token = self.advance()
        if token.kind == "NUMBER":
            value = Fraction(int(token.text))
            if self.current.kind == "OP" and self.current.text == "/":
                self.advance()
                if self.current.kind != "NUMBER":
                    raise ParseError("expected denominator", self.current.position)
                denominator = int(self.advance().text)
                if denominator == 0:
                    raise ParseError("zero denominator", token.position)
                value = value / denominator
            return MultiPoly.const(value, self.dims)
        if token.kind == "PI":
            return MultiPoly.const(PiCoeff.pi_power(1), self.dims)
        if token.kind == "I":
            return MultiPoly.const(GaussianRational(0, 1), self.dims)
        if token.kind == "VAR":
            try:
                return MultiPoly.var(parse_var(token.text), self.dims)
            except (UnknownVariableError, ValueError) as exc:
                raise ParseError(str(exc), token.position) from exc
        if token.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {token.text or 'end of input'!r}", token.position)


def parse_poly(text: str, dims: Tuple[int, int], offset: int = 0) -> MultiPoly:
    """Parse the human polynomial syntax produced by ``str(MultiPoly)``.

    Args:
        text: Expression such as ``2*z1^2*zb'1 - pi^-1``
        dims: Variable family sizes (n1, n2)
        offset: Added to reported error positions when ``text`` is a slice

    Returns:
        Parsed polynomial in canonical form

    Raises:
        ParseError: On malformed input, with the character position
    """
    return _PolyParser(text, dims, offset).parse()
