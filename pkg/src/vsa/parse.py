"""ASCII text form of monomial expressions.

Grammar::

    expr     := ["+"|"-"] term { ("+"|"-") term }
    term     := [rational] mono
    mono     := { mode } "vac"
    mode     := vector "_(" int ")"
    vector   := "[" int { "," int } "]" | "a"          ("a" means [1])
    rational := int [ "/" posint ]

Whitespace is insignificant between tokens.
"""

from __future__ import annotations

from fractions import Fraction

from vsa.combinatorics import frac_str
from vsa.errors import ParseError
from vsa.rewrite import Expression, Key, _acc


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str):
        found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
        raise ParseError(f"expected {expected}, found {found}", self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, lit: str) -> bool:
        self.skip()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.accept(lit):
            self.error(repr(lit))

    def integer(self, signed: bool = True) -> int:
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("integer")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.integer(signed=False)
        if self.accept("/"):
            at = self.pos
            den = self.integer(signed=False)
            if den == 0:
                raise ParseError("denominator must be positive", at)
            return Fraction(num, den)
        return Fraction(num)

    def vector(self) -> tuple[int, ...]:
        if self.accept("a"):
            return (1,)
        self.expect("[")
        parts = []
        while True:
            at = self.pos
            part = self.integer()
            if part < 1:
                raise ParseError("partition parts must be positive", at)
            parts.append(part)
            if self.accept("]"):
                return tuple(sorted(parts, reverse=True))
            if not self.accept(","):
                self.error("',' or ']'")

    def mono(self) -> Key:
        modes = []
        while True:
            if self.accept("vac"):
                return tuple(modes)
            if self.peek() not in ("[", "a"):
                self.error("a vector or 'vac'")
            p = self.vector()
            self.expect("_(")
            n = self.integer()
            self.expect(")")
            modes.append((p, n))

    def term(self) -> tuple[Fraction, Key]:
        c = self.rational() if self.peek().isdigit() else Fraction(1)
        return c, self.mono()

    def expr(self) -> Expression:
        out: dict = {}
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            c, key = self.term()
            _acc(out, key, sign * c)
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        self.skip()
        if self.pos != len(self.text):
            self.error("'+', '-' or end of input")
        return Expression(out)


def parse_expression(text: str) -> Expression:
    """Parse ``text`` into an Expression; raises ParseError with a position."""
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError(f"non-ASCII character {text[bad]!r}", bad)
    return _Parser(text).expr()


def render_key(key: Key) -> str:
    modes = " ".join(f"[{','.join(map(str, p))}]_({n})" for p, n in key)
    return f"{modes} vac" if modes else "vac"


def render(e: Expression) -> str:
    """Text form that ``parse_expression`` reads back to the same Expression."""
    if not e:
        return "0 vac"
    pieces = []
    for m in e.monomials():
        c = m.coeff
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = render_key(m.modes) if mag == 1 else f"{frac_str(mag)} {render_key(m.modes)}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
