"""Text syntax for free polynomials.

Grammar (``^`` binds tighter than ``*`` and ``/``, which bind tighter than
``+`` and ``-``)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*' power) | ('/' INT))*
    power  := atom ['^' ['+'|'-'] INT]
    atom   := INT | 't' INT | '(' expr ')'

Division is only by integer literals, so ``3/2*t1`` means (3/2)*t1.
Negative powers are allowed on units only (``t1^-2``, ``(2*t1)^-1``).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, RankExceeded
from .freepoly import FreePolynomial
from .scalars import Field, PrimeField, format_scalar
from .words import format_word

__all__ = ["parse_expr", "format_poly"]

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)(\d+)|([-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("gen", int(m.group(3)), start))
        else:
            toks.append((m.group(4), None, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text: str, rank: int, field: Field):
        self.toks = _tokenize(text)
        self.i = 0
        self.rank = rank
        self.field = field

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def const(self, c) -> FreePolynomial:
        return FreePolynomial.constant(self.field(c), self.rank, self.field)

    def expr(self) -> FreePolynomial:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> FreePolynomial:
        out = self.power()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            if op == "*":
                out = out * self.power()
            else:
                tok = self.take("int")
                if tok[1] == 0:
                    raise ParseError("division by zero", tok[2])
                if isinstance(self.field, PrimeField) and tok[1] % self.field.p == 0:
                    from .errors import NonInvertibleDenominator

                    raise NonInvertibleDenominator(f"denominator {tok[1]} vanishes mod {self.field.p}")
                out = out.scale(self.field(Fraction(1, tok[1])))
        return out

    def power(self) -> FreePolynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] in ("+", "-"):
                sign = -1 if self.take()[0] == "-" else 1
            tok = self.take("int")
            e = sign * tok[1]
            if e < 0 and not base.is_unit():
                raise ParseError("negative power of a non-unit", tok[2])
            base = base ** e
        return base

    def atom(self) -> FreePolynomial:
        tok = self.take()
        kind = tok[0]
        if kind == "int":
            return self.const(tok[1])
        if kind == "gen":
            i = tok[1]
            if i < 1:
                raise ParseError(f"generator index must be positive, got t{i}", tok[2])
            if i > self.rank:
                raise RankExceeded(f"t{i} exceeds rank {self.rank}")
            return FreePolynomial.gen(i, self.rank, self.field)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"unexpected {what}", tok[2])


def parse_expr(text: str, rank: int, field: Field) -> FreePolynomial:
    """Parse ``text`` into an exact free polynomial of the given rank."""
    p = _Parser(text, rank, field)
    out = p.expr()
    p.take("end")
    return out


def format_poly(g: FreePolynomial, mode: str = "text") -> str:
    """Deterministic rendering in shortlex term order.

    ``mode="json"`` emits the JSON schema of :meth:`FreePolynomial.to_json`.
    """
    if mode == "json":
        import json

        return json.dumps(g.to_json(), sort_keys=True)
    if g.is_zero():
        return "0"
    chunks = []
    for k, (w, c) in enumerate(g.items()):
        neg = not isinstance(g.field, PrimeField) and c < 0
        mag = -c if neg else c
        body = format_scalar(mag)
        if w:
            body = format_word(w) if mag == 1 else f"{body}*{format_word(w)}"
        if k == 0:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)
