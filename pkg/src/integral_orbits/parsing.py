"""Text input: polynomial expressions, point literals and place sets.

Expression grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*        # juxtaposition multiplies
    factor := atom ['^' INT]
    atom   := INT | NAME | '(' expr ')'

so the usual shorthand ``x^3(x+y+z)y^3z^9`` parses as written.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from . import mpoly
from .errors import ExpressionSyntaxError, InhomogeneousError, ParseError, UnknownVariable, ZeroFormError
from .forms import HomogeneousForm, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.n = ring.num_vars
        self.index = {name: k for k, name in enumerate(ring.var_names)}

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ExpressionSyntaxError("unexpected end of expression")
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise ExpressionSyntaxError(f"expected {op!r}, got {tok[1]!r}")

    def parse(self) -> mpoly.Poly:
        if not self.tokens:
            raise ExpressionSyntaxError("empty expression")
        p = self.expr()
        if self.peek() is not None:
            raise ExpressionSyntaxError(f"trailing input at token {self.peek()[1]!r}")
        return p

    def expr(self) -> mpoly.Poly:
        sign = 1
        tok = self.peek()
        if tok in (("op", "+"), ("op", "-")):
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = mpoly.scale(self.term(), sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = mpoly.add(acc, t) if op == "+" else mpoly.sub(acc, t)
        return acc

    def _starts_factor(self) -> bool:
        tok = self.peek()
        return tok is not None and (tok[0] in ("int", "name") or tok == ("op", "("))

    def term(self) -> mpoly.Poly:
        acc = self.factor()
        while True:
            if self.peek() == ("op", "*"):
                self.take()
                acc = mpoly.mul(acc, self.factor())
            elif self._starts_factor():
                acc = mpoly.mul(acc, self.factor())
            else:
                return acc

    def factor(self) -> mpoly.Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise ExpressionSyntaxError(f"exponent must be a nonnegative integer, got {val!r}")
            base = mpoly.power(base, int(val), self.n)
        return base

    def atom(self) -> mpoly.Poly:
        kind, val = self.take()
        if kind == "int":
            return mpoly.const(int(val), self.n)
        if kind == "name":
            if val not in self.index:
                raise UnknownVariable(f"unknown variable {val!r}; ring has {', '.join(self.ring.var_names)}")
            e = [0] * self.n
            e[self.index[val]] = 1
            return {tuple(e): 1}
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ExpressionSyntaxError(f"unexpected token {val!r}")


def parse_form(text: str, ring: Ring) -> HomogeneousForm:
    """Parse and expand ``text``; the result must be a nonzero homogeneous form."""
    terms = _Parser(text, ring).parse()
    if not terms:
        raise ZeroFormError(f"{text!r} expands to zero")
    degrees = {sum(e) for e in terms}
    if len(degrees) > 1:
        raise InhomogeneousError(f"{text!r} mixes degrees {sorted(degrees)}")
    return HomogeneousForm(ring, terms)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def parse_point_literal(text: str) -> List[Fraction]:
    """``[a : b : c]`` with integer or rational entries."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"point literal must look like [a : b : c], got {text!r}")
    parts = [p for p in s[1:-1].split(":")]
    if len(parts) < 2 or any(not p.strip() for p in parts):
        raise ParseError(f"malformed point literal {text!r}")
    return [parse_rational(p) for p in parts]


def parse_place_set(text: str) -> List[Optional[int]]:
    """``{inf, 2, 3}``; ``None`` stands for the infinite place."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError(f"place set must look like {{inf, 2, 3}}, got {text!r}")
    body = s[1:-1].strip()
    out: List[Optional[int]] = []
    if not body:
        return out
    for item in body.split(","):
        item = item.strip().lower()
        if item in ("inf", "infinity", "oo"):
            out.append(None)
        elif re.fullmatch(r"\d+", item):
            out.append(int(item))
        else:
            raise ParseError(f"bad place {item!r}")
    return out
