"""Text syntax for difference polynomials.

Grammar (whitespace is insignificant)::

    poly   := ['-'] term (('+' | '-') term)*
    term   := coeff | [coeff '*'] factor ('*' factor)*
    factor := var ['^' nat]
    var    := 's' nat '(' base ')' | base
    base   := 'x' nat '_' nat | 'y' nat | 'idet' | 'iy' nat
    coeff  := int ['/' posint]

``s0(b)`` is the same variable as ``b``.
"""

from __future__ import annotations

from .errors import ParseError
from .polynomial import Polynomial, Q, VarId, var_rank


def format_base(v: VarId) -> str:
    if v.kind == "x":
        j, k = v.index
        s = f"x{j}_{k}"
    elif v.kind == "idet":
        s = "idet"
    else:
        s = v.kind + "".join(str(i) for i in v.index)
    return s


def format_var(v: VarId) -> str:
    s = format_base(v)
    if v.shift:
        s = f"s{v.shift}({s})"
    if v.copy:
        s = f"{s}@{v.copy}"
    return s


def _format_coeff(c) -> str:
    return str(c)


def format_poly(p: Polynomial) -> str:
    """Canonical text: terms largest first, ``1`` coefficients omitted."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        factors = []
        for v, e in sorted(m, key=lambda ve: var_rank(ve[0])):
            f = format_var(v)
            factors.append(f if e == 1 else f"{f}^{e}")
        if not factors:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(a) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, expected=()):
        raise ParseError(msg, self.pos, expected)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, s) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        if not self.startswith(s):
            self.error(f"expected {s!r}", [s])
        self.pos += len(s)

    def nat(self) -> int:
        self.skip()
        start = self.pos
        t = self.text
        while self.pos < len(t) and t[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number", ["<nat>"])
        return int(t[start : self.pos])

    def parse(self) -> Polynomial:
        if not self.text.strip():
            self.error("empty input", ["<term>"])
        result = Polynomial()
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        elif self.peek() == "+":
            self.pos += 1
        result = result + self.term() * sign
        while True:
            ch = self.peek()
            if ch == "":
                return result
            if ch == "+":
                self.pos += 1
                result = result + self.term()
            elif ch == "-":
                self.pos += 1
                result = result - self.term()
            else:
                self.error(f"unexpected character {ch!r}", ["+", "-", "*", "<end>"])

    def term(self) -> Polynomial:
        ch = self.peek()
        if ch.isdigit():
            num = self.nat()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                den = self.nat()
                if den == 0:
                    self.pos -= 1
                    self.error("zero denominator", ["<posint>"])
            coeff = Q(num, den)
            if self.peek() != "*":
                return Polynomial.const(coeff)
            self.pos += 1
            acc = Polynomial.const(coeff) * self.factor()
        else:
            acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        v = self.variable()
        p = Polynomial.var(v)
        if self.peek() == "^":
            self.pos += 1
            p = p ** self.nat()
        return p

    def variable(self) -> VarId:
        self.skip()
        t = self.text
        if self.startswith("s") and self.pos + 1 < len(t) and t[self.pos + 1].isdigit():
            self.pos += 1
            shift = self.nat()
            self.expect("(")
            base = self.base()
            self.expect(")")
            return base._replace(shift=shift)
        return self.base()

    def base(self) -> VarId:
        self.skip()
        if self.startswith("idet"):
            self.pos += 4
            return VarId("idet", ())
        if self.startswith("iy"):
            self.pos += 2
            return VarId("iy", (self.nat(),))
        if self.startswith("y"):
            self.pos += 1
            return VarId("y", (self.nat(),))
        if self.startswith("x"):
            self.pos += 1
            j = self.nat()
            self.expect("_")
            k = self.nat()
            return VarId("x", (j, k))
        self.error("expected a variable", ["x", "y", "iy", "idet", "s<nat>(", "<coeff>"])


def parse_poly(text: str) -> Polynomial:
    """Parse difference-polynomial text into a canonical Polynomial."""
    return _Parser(text).parse()


def parse_var(text: str) -> VarId:
    p = _Parser(text)
    v = p.variable()
    if p.peek() != "":
        p.error("trailing input after variable", ["<end>"])
    return v
