"""Text grammar for polynomials.

    expr  := ['-'] term (('+' | '-') term)*
    term  := coeff | coeff '*' monos | monos
    monos := mono ('*' mono)*
    mono  := var ('^' uint)?
    coeff := int | int '/' uint        (fractions only over QQ)

Whitespace is ignored.  Printing uses graded-lex order, explicit ``*`` and
never a unary ``+``, so ``parse(format_poly(p)) == p``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .field import FieldError, FieldSpec
from .poly import DEFAULT_VARS, Poly, _glex_key


class ParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], field: FieldSpec) -> None:
        self.text = text
        self.vars = tuple(vars)
        self.field = field
        self.pos = 0
        # longest names first so that e.g. 'x1' is not read as 'x'
        self.names = sorted(self.vars, key=len, reverse=True)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an unsigned integer", start)
        return int(self.text[start:self.pos])

    def parse(self) -> Poly:
        acc: dict = {}
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        elif self.peek() == "":
            raise ParseError("empty expression", self.pos)
        while True:
            m, c = self.term()
            acc[m] = acc.get(m, 0) + sign * c
            ch = self.peek()
            if ch == "":
                break
            if ch == "+":
                sign = 1
            elif ch == "-":
                sign = -1
            else:
                raise ParseError(f"unexpected character {ch!r}", self.pos)
            self.pos += 1
        return Poly(self.field, self.vars, {m: c for m, c in acc.items()})

    def term(self) -> tuple[tuple[int, ...], object]:
        ch = self.peek()
        coeff: object = 1
        if ch.isdigit():
            start = self.pos
            num = self.uint()
            if self.peek() == "/":
                self.pos += 1
                den_pos = self.pos
                den = self.uint()
                if self.field.p is not None:
                    raise ParseError("fractions are only allowed over QQ", start)
                if den == 0:
                    raise ParseError("zero denominator", den_pos)
                coeff = Fraction(num, den)
            else:
                coeff = num
            try:
                coeff = self.field(coeff)
            except FieldError as exc:
                raise ParseError(str(exc), start) from None
            if self.peek() != "*":
                return (0,) * len(self.vars), coeff
            self.pos += 1
        exps = [0] * len(self.vars)
        while True:
            i, e = self.mono()
            exps[i] += e
            if self.peek() != "*":
                break
            self.pos += 1
        return tuple(exps), coeff

    def mono(self) -> tuple[int, int]:
        self.skip()
        for name in self.names:
            if self.text.startswith(name, self.pos):
                end = self.pos + len(name)
                # reject a longer identifier that merely starts with a known name
                if end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
                    continue
                self.pos = end
                e = 1
                if self.peek() == "^":
                    self.pos += 1
                    e = self.uint()
                return self.vars.index(name), e
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        word = self.text[start:self.pos]
        if word:
            raise ParseError(f"unknown variable {word!r}", start)
        raise ParseError("expected a variable", start)


def parse(text: str, vars: Sequence[str] = DEFAULT_VARS, field: FieldSpec | None = None) -> Poly:
    if field is None:
        field = FieldSpec(None)
    return _Parser(text, vars, field).parse()


def _format_coeff(c, field: FieldSpec) -> tuple[int, str]:
    """Return (sign, magnitude text)."""
    c = field.signed(c)
    sign = -1 if c < 0 else 1
    c = abs(c)
    if isinstance(c, Fraction):
        text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    else:
        text = str(c)
    return sign, text


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    pieces = []
    for m in sorted(f.terms, key=_glex_key, reverse=True):
        sign, mag = _format_coeff(f.terms[m], f.field)
        monos = []
        for v, e in zip(f.vars, m):
            if e == 1:
                monos.append(v)
            elif e > 1:
                monos.append(f"{v}^{e}")
        if not monos:
            body = mag
        elif mag == "1":
            body = "*".join(monos)
        else:
            body = mag + "*" + "*".join(monos)
        if not pieces:
            pieces.append(("-" if sign < 0 else "") + body)
        else:
            pieces.append(("-" if sign < 0 else "+") + body)
    return "".join(pieces)
