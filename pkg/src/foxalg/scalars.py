"""Exact scalar fields: the rationals and prime fields GF(p).

Rational scalars are plain :class:`fractions.Fraction` objects.  Residues mod
``p`` are :class:`Mod` instances.  Both support the usual arithmetic
operators, so the rest of the package writes field-generic code and asks the
:class:`Field` object only for coercion, parsing and formatting.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Union

from .errors import DivisionByZero, NonInvertibleDenominator, ParseError, UsageError

__all__ = [
    "Field",
    "Rationals",
    "PrimeField",
    "Mod",
    "FieldElem",
    "QQ",
    "GF",
    "field_from_spec",
    "scalar_invert",
    "scalar_parse",
    "format_scalar",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Mod:
    """A residue class modulo a prime, stored in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise UsageError(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise NonInvertibleDenominator(str(other))
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.p})")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


FieldElem = Union[Fraction, Mod]


class Field:
    """Common interface of :class:`Rationals` and :class:`PrimeField`."""

    characteristic: int = 0

    def __call__(self, x) -> FieldElem:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def zero(self) -> FieldElem:
        return self(0)

    @property
    def one(self) -> FieldElem:
        return self(1)

    def parse(self, text: str) -> FieldElem:
        return scalar_parse(text, self)

    def format(self, a: FieldElem) -> str:
        return format_scalar(a)

    def contains(self, a) -> bool:  # pragma: no cover - abstract
        raise NotImplementedError


class Rationals(Field):
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return scalar_parse(x, self)
        if isinstance(x, Mod):
            raise UsageError("cannot lift a residue class to the rationals")
        return Fraction(x)

    def contains(self, a) -> bool:
        return isinstance(a, Fraction)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    __str__ = __repr__


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise UsageError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> Mod:
        if isinstance(x, Mod):
            if x.p != self.p:
                raise UsageError(f"cannot coerce GF({x.p}) into GF({self.p})")
            return x
        if isinstance(x, int):
            return Mod(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NonInvertibleDenominator(f"denominator of {x} vanishes mod {self.p}")
            return Mod(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, str):
            return scalar_parse(x, self)
        raise UsageError(f"cannot coerce {x!r} into GF({self.p})")

    def contains(self, a) -> bool:
        return isinstance(a, Mod) and a.p == self.p

    def elements(self) -> Iterator[Mod]:
        for v in range(self.p):
            yield Mod(v, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    __str__ = __repr__


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


_SPEC_RE = re.compile(r"^\s*(?:gf|GF)\s*[:(]\s*(\d+)\s*\)?\s*$")


def field_from_spec(spec) -> Field:
    """Accept ``"Q"``, ``"QQ"``, ``"GF(p)"``, ``"gf:p"`` or a Field instance."""
    if isinstance(spec, Field):
        return spec
    text = str(spec).strip()
    if text in ("Q", "QQ", "q"):
        return QQ
    m = _SPEC_RE.match(text)
    if m:
        return PrimeField(int(m.group(1)))
    raise ParseError(f"unknown field specification {spec!r}")


_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def scalar_parse(text: str, field: Field) -> FieldElem:
    """Parse an integer or fraction literal into ``field``.

    >>> scalar_parse("7", GF(5))
    Mod(2, 5)
    """
    m = _SCALAR_RE.match(text)
    if not m:
        raise ParseError(f"malformed scalar {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DivisionByZero(f"zero denominator in {text!r}")
    if isinstance(field, PrimeField):
        if den % field.p == 0:
            raise NonInvertibleDenominator(f"denominator {den} vanishes mod {field.p}")
        return Mod(num * pow(den, -1, field.p), field.p)
    return Fraction(num, den)


def scalar_invert(a: FieldElem) -> FieldElem:
    if isinstance(a, Mod):
        return a.inverse()
    if a == 0:
        raise DivisionByZero("0 has no inverse")
    return 1 / Fraction(a)


def format_scalar(a: FieldElem) -> str:
    """Decimal serialization: ``"num"`` or ``"num/den"``."""
    if isinstance(a, Mod):
        return str(a.v)
    a = Fraction(a)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"
