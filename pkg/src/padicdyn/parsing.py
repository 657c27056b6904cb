"""Front-end grammars for maps and domains.

Map expressions are rational-coefficient polynomials in x combined with
``+ - * / ^`` and parentheses; implicit multiplication ("2x^3", "2(x+1)")
is accepted and whitespace ignored.  The expression is evaluated exactly as
a quotient of polynomials, so "(x^2-1)/x" and "x - 1/x" both work, and a
zero denominator anywhere is rejected.  Every rejection carries the byte
offset of the offending token.

Domains: ``Zp`` or ``B(<rational>, <t>)`` combined left to right with ``+``
(union) and ``-`` (set difference); ``Qp`` selects the global analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domains import CompactDomain
from .errors import EmptyDomain, ParseError, ZeroDenominator
from .maps import RationalMap, normalize_map
from .polynomials import Polynomial

_MAX_DEPTH = 64
_MAX_POWER = 64

QP_GLOBAL = "Qp"


@dataclass
class _Tok:
    kind: str  # num, x, op, lparen, rparen, name, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "0123456789":
            j = i
            while j < n and text[j] in "0123456789":
                j += 1
            toks.append(_Tok("num", text[i:j], i))
            i = j
            continue
        if c.isascii() and c.isalpha():
            j = i
            while j < n and text[j].isascii() and text[j].isalnum():
                j += 1
            word = text[i:j]
            if word == "x":
                toks.append(_Tok("x", word, i))
            else:
                toks.append(_Tok("name", word, i))
            i = j
            continue
        if c in "+-*/^":
            toks.append(_Tok("op", c, i))
            i += 1
            continue
        if c == "(":
            toks.append(_Tok("lparen", c, i))
            i += 1
            continue
        if c == ")":
            toks.append(_Tok("rparen", c, i))
            i += 1
            continue
        if c == ",":
            toks.append(_Tok("comma", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


class _PolyFraction:
    """Exact quotient of two polynomials, the parser's value type."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        self.num = num
        self.den = den

    @staticmethod
    def const(c: Fraction, p: int) -> "_PolyFraction":
        return _PolyFraction(Polynomial.constant(c, p), Polynomial.constant(1, p))

    @staticmethod
    def x(p: int) -> "_PolyFraction":
        return _PolyFraction(Polynomial.x(p), Polynomial.constant(1, p))

    def add(self, o):
        return _PolyFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    def sub(self, o):
        return _PolyFraction(self.num * o.den - o.num * self.den, self.den * o.den)

    def mul(self, o):
        return _PolyFraction(self.num * o.num, self.den * o.den)

    def div(self, o, pos: int):
        if o.num.is_zero():
            raise ZeroDenominator(f"division by zero in map expression (offset {pos})")
        return _PolyFraction(self.num * o.den, self.den * o.num)

    def neg(self):
        return _PolyFraction(-self.num, self.den)

    def pow(self, k: int, pos: int):
        if k > _MAX_POWER:
            raise ParseError(f"exponent {k} too large", pos)
        out = _PolyFraction.const(Fraction(1), self.num.prime)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out


class _MapParser:
    """Recursive descent with precedence: +- < */ < unary- < ^."""

    def __init__(self, toks: list[_Tok], p: int):
        self.toks = toks
        self.i = 0
        self.p = p
        self.depth = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> _PolyFraction:
        value = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected trailing input {t.text!r}", t.pos)
        return value

    def expr(self) -> _PolyFraction:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance()
            rhs = self.term()
            value = value.add(rhs) if op.text == "+" else value.sub(rhs)
        return value

    def term(self) -> _PolyFraction:
        value = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.advance()
                rhs = self.unary()
                value = value.mul(rhs) if t.text == "*" else value.div(rhs, t.pos)
            elif t.kind in ("num", "x", "lparen"):
                # implicit multiplication: 2x, 2(x+1), x(x+1), (x+1)(x-1)
                value = value.mul(self.unary())
            else:
                return value

    def unary(self) -> _PolyFraction:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.advance()
            return self.unary().neg()
        if t.kind == "op" and t.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> _PolyFraction:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.advance()
            e = self.peek()
            if e.kind != "num":
                raise ParseError("expected a nonnegative integer exponent", e.pos)
            self.advance()
            return base.pow(int(e.text), e.pos)
        return base

    def atom(self) -> _PolyFraction:
        t = self.advance()
        if t.kind == "num":
            return _PolyFraction.const(Fraction(int(t.text)), self.p)
        if t.kind == "x":
            return _PolyFraction.x(self.p)
        if t.kind == "lparen":
            self.depth += 1
            if self.depth > _MAX_DEPTH:
                raise ParseError("expression nested too deeply", t.pos)
            value = self.expr()
            closing = self.advance()
            if closing.kind != "rparen":
                raise ParseError("expected ')'", closing.pos)
            self.depth -= 1
            return value
        raise ParseError(f"expected a number, 'x' or '(': got {t.text!r}", t.pos)


def parse_map(text: str, p: int) -> RationalMap:
    """Parse and normalize a rational map expression."""
    value = _MapParser(_tokenize(text), p).parse()
    return normalize_map(value.num, value.den)


def _parse_rational(toks: list[_Tok], i: int) -> tuple[Fraction, int]:
    sign = 1
    if toks[i].kind == "op" and toks[i].text == "-":
        sign = -1
        i += 1
    if toks[i].kind != "num":
        raise ParseError("expected a rational number", toks[i].pos)
    num = int(toks[i].text)
    i += 1
    if toks[i].kind == "op" and toks[i].text == "/":
        i += 1
        if toks[i].kind != "num":
            raise ParseError("expected a denominator", toks[i].pos)
        den = int(toks[i].text)
        if den == 0:
            raise ZeroDenominator(f"zero denominator in domain literal (offset {toks[i].pos})")
        i += 1
        return Fraction(sign * num, den), i
    return Fraction(sign * num), i


def _parse_integer(toks: list[_Tok], i: int) -> tuple[int, int]:
    sign = 1
    if toks[i].kind == "op" and toks[i].text == "-":
        sign = -1
        i += 1
    if toks[i].kind != "num":
        raise ParseError("expected an integer level", toks[i].pos)
    value = sign * int(toks[i].text)
    return value, i + 1


def parse_domain(text: str, p: int) -> CompactDomain | str:
    """Parse the domain grammar; returns QP_GLOBAL for "Qp"."""
    toks = _tokenize(text)
    if toks[0].kind == "name" and toks[0].text == "Qp" and toks[1].kind == "end":
        return QP_GLOBAL
    domain, i = _domain_atom(toks, 0, p)
    while toks[i].kind == "op" and toks[i].text in "+-":
        op = toks[i]
        rhs, i = _domain_atom(toks, i + 1, p)
        if op.text == "+":
            domain = domain.union(rhs)
        else:
            try:
                domain = domain.difference(rhs)
            except EmptyDomain:
                raise EmptyDomain(
                    f"domain became empty after '-' (offset {op.pos})"
                ) from None
    if toks[i].kind != "end":
        raise ParseError(f"unexpected trailing input {toks[i].text!r}", toks[i].pos)
    return domain


def _domain_atom(toks: list[_Tok], i: int, p: int) -> tuple[CompactDomain, int]:
    t = toks[i]
    if t.kind == "name" and t.text == "Zp":
        return CompactDomain.zp(p), i + 1
    if t.kind == "name" and t.text == "B":
        i += 1
        if toks[i].kind != "lparen":
            raise ParseError("expected '(' after B", toks[i].pos)
        i += 1
        center, i = _parse_rational(toks, i)
        if toks[i].kind != "comma":
            raise ParseError("expected ',' between center and level", toks[i].pos)
        i += 1
        level, i = _parse_integer(toks, i)
        if toks[i].kind != "rparen":
            raise ParseError("expected ')'", toks[i].pos)
        return CompactDomain.ball(center, level, p), i + 1
    raise ParseError(f"expected 'Zp' or 'B(center, level)': got {t.text!r}", t.pos)
