"""Parser for the shared polynomial grammar.

Terms are joined by '+' / '-'; a term is an optional rational
coefficient ("a" or "a/b"), then '*'-separated variable powers
"name^exponent" (exponent omitted means 1).  No parentheses.
Whitespace is insignificant.  Errors carry the byte offset of the
offending token.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .multipoly import MultiPoly


class PolyParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__("%s (at byte offset %d)" % (message, offset))
        self.offset = offset


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+^*/])")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError("unexpected character %r" % text[pos], pos)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), pos))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), pos))
        else:
            tokens.append(("op", m.group(3), pos))
        pos = m.end()
    return tokens


def parse_poly(text: str, variables) -> MultiPoly:
    vs = tuple(variables)
    index = {v: i for i, v in enumerate(vs)}
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial", 0)
    result = MultiPoly.zero(vs)
    i = 0
    nt = len(tokens)

    while i < nt:
        sign = 1
        # leading / separating signs
        saw_sign = False
        while i < nt and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if saw_sign and tokens[i][1] == "+":
                raise PolyParseError("doubled sign", tokens[i][2])
            if tokens[i][1] == "-":
                sign = -sign
            saw_sign = True
            i += 1
        if i >= nt:
            raise PolyParseError("dangling sign", tokens[-1][2])

        coeff = Fraction(sign)
        exps = [0] * len(vs)
        expect_factor = True
        saw_body = False

        while i < nt and expect_factor:
            kind, val, off = tokens[i]
            if kind == "int":
                num = int(val)
                i += 1
                if i < nt and tokens[i][0] == "op" and tokens[i][1] == "/":
                    i += 1
                    if i >= nt or tokens[i][0] != "int":
                        raise PolyParseError("expected denominator",
                                             tokens[i - 1][2])
                    den = int(tokens[i][1])
                    if den == 0:
                        raise PolyParseError("zero denominator", tokens[i][2])
                    coeff *= Fraction(num, den)
                    i += 1
                else:
                    coeff *= num
            elif kind == "name":
                if val not in index:
                    raise PolyParseError("unknown variable %r" % val, off)
                i += 1
                power = 1
                if i < nt and tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    if i >= nt or tokens[i][0] != "int":
                        raise PolyParseError("expected exponent",
                                             tokens[i - 1][2])
                    power = int(tokens[i][1])
                    i += 1
                exps[index[val]] += power
            else:
                raise PolyParseError("unexpected operator %r" % val, off)
            saw_body = True
            # a '*' continues the term
            if i < nt and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
                expect_factor = True
                if i >= nt:
                    raise PolyParseError("dangling '*'", tokens[-1][2])
            else:
                expect_factor = False
        if not saw_body:
            raise PolyParseError("empty term", tokens[i][2] if i < nt else 0)
        result = result + MultiPoly.monomial(vs, exps, coeff)
    return result
