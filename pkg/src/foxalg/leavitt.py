"""The Fox algebra: elements Σ λ_w w^* with polynomial coefficients.

For a monomial w = x_{i1}⋯x_{ik} in x_i = t_i - 1, the starred word is
w^* = x_{ik}^*⋯x_{i1}^*.  Stars always sit on the right.  Products are
normalized with the relations x_i^* x_j = δ_ij and Σ x_i x_i^* = 1, which
give x_i^* λ = ∂_i λ + ε(λ) x_i^* for every free polynomial λ.
"""
from __future__ import annotations

import json
from typing import Dict, Mapping

from .errors import DepthTooSmall, FieldMismatch, IndexOutOfRange, ParseError, RankMismatch
from .fox import DerivativeIndex, partial_derivative
from .freepoly import FreePolynomial
from .scalars import Field, field_from_spec
from .words import XMonomial

__all__ = [
    "LeavittElement",
    "embed",
    "star",
    "x_gen",
    "multiply",
    "canonical_form",
    "equals",
    "zeta",
    "parse_leavitt",
]


class LeavittElement:
    __slots__ = ("terms", "rank", "field")

    def __init__(self, terms: Mapping[XMonomial, FreePolynomial], rank: int, field: Field):
        self.rank = rank
        self.field = field
        acc: Dict[XMonomial, FreePolynomial] = {}
        for w, lam in terms.items():
            w = tuple(int(i) for i in w)
            if any(not 1 <= i <= rank for i in w):
                raise IndexOutOfRange(f"star word {w} outside rank {rank}")
            if lam.rank != rank:
                raise RankMismatch(f"coefficient of rank {lam.rank} in rank {rank} element")
            if lam.field != field:
                raise FieldMismatch(f"{lam.field} != {field}")
            acc[w] = acc[w] + lam if w in acc else lam
        self.terms = {w: lam for w, lam in acc.items() if not lam.is_zero()}

    @classmethod
    def zero(cls, rank: int, field: Field) -> "LeavittElement":
        return cls({}, rank, field)

    @property
    def depth(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "LeavittElement") -> None:
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} != {other.field}")

    def __add__(self, other):
        if isinstance(other, FreePolynomial):
            other = embed(other)
        self._check(other)
        out = dict(self.terms)
        for w, lam in other.terms.items():
            out[w] = out[w] + lam if w in out else lam
        return LeavittElement(out, self.rank, self.field)

    __radd__ = __add__

    def __neg__(self):
        return LeavittElement({w: -lam for w, lam in self.terms.items()}, self.rank, self.field)

    def __sub__(self, other):
        if isinstance(other, FreePolynomial):
            other = embed(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FreePolynomial):
            other = embed(other)
        if isinstance(other, LeavittElement):
            return multiply(self, other)
        return LeavittElement({w: lam.scale(other) for w, lam in self.terms.items()}, self.rank, self.field)

    def __rmul__(self, other):
        if isinstance(other, FreePolynomial):
            return multiply(embed(other), self)
        return self * other

    def __eq__(self, other):
        if isinstance(other, FreePolynomial):
            other = embed(other)
        if not isinstance(other, LeavittElement):
            return NotImplemented
        return equals(self, other)

    def __hash__(self):
        c = canonical_form(self, self.depth)
        return hash((c.depth, frozenset(c.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, lam in self.sorted_terms():
            if w:
                stars = "*".join(f"x{i}^*" for i in reversed(w))
                parts.append(f"({lam})*{stars}")
            else:
                parts.append(f"({lam})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LeavittElement({self})"

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "rank": self.rank,
            "terms": [{"star_word": list(w), "coeff": lam.to_json()} for w, lam in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "LeavittElement":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            terms = {}
            for t in data["terms"]:
                w = tuple(int(i) for i in t["star_word"])
                lam = FreePolynomial.from_json(t["coeff"])
                terms[w] = terms[w] + lam if w in terms else lam
            if "rank" in data:
                rank = int(data["rank"])
                field = field_from_spec(data.get("field", "Q"))
            elif terms:
                first = next(iter(terms.values()))
                rank, field = first.rank, first.field
            else:
                raise ParseError("empty element needs explicit rank")
            return cls(terms, rank, field)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed Leavitt JSON: {exc}") from exc


def embed(g: FreePolynomial) -> LeavittElement:
    return LeavittElement({(): g} if not g.is_zero() else {}, g.rank, g.field)


def star(i: int, rank: int, field: Field) -> LeavittElement:
    """The element x_i^*."""
    if not 1 <= i <= rank:
        raise IndexOutOfRange(f"index {i} outside 1..{rank}")
    return LeavittElement({(i,): FreePolynomial.constant(1, rank, field)}, rank, field)


def x_gen(i: int, rank: int, field: Field) -> LeavittElement:
    """The element x_i = t_i - 1."""
    if not 1 <= i <= rank:
        raise IndexOutOfRange(f"index {i} outside 1..{rank}")
    return embed(FreePolynomial.gen(i, rank, field) - 1)


def _push(word: XMonomial, lam: FreePolynomial) -> Dict[XMonomial, FreePolynomial]:
    """Normal form of word^* · λ as {w: λ_w} meaning Σ λ_w w^*.

    The star of the first letter of ``word`` is adjacent to λ, so letters are
    pushed in order.
    """
    state: Dict[XMonomial, FreePolynomial] = {(): lam}
    for i in word:
        d = DerivativeIndex(i, False)
        nxt: Dict[XMonomial, FreePolynomial] = {}
        for w, mu in state.items():
            dm = partial_derivative(d, mu)
            if not dm.is_zero():
                nxt[w] = nxt[w] + dm if w in nxt else dm
            e = mu.augmentation()
            if e != 0:
                key = w + (i,)
                c = FreePolynomial.constant(e, lam.rank, lam.field)
                nxt[key] = nxt[key] + c if key in nxt else c
        state = {w: m for w, m in nxt.items() if not m.is_zero()}
    return state


def multiply(a: LeavittElement, b: LeavittElement) -> LeavittElement:
    a._check(b)
    out: Dict[XMonomial, FreePolynomial] = {}
    for u, lam in a.terms.items():
        for v, mu in b.terms.items():
            for w, nu in _push(u, mu).items():
                key = v + w
                val = lam * nu
                out[key] = out[key] + val if key in out else val
    return LeavittElement(out, a.rank, a.field)


def canonical_form(a: LeavittElement, l: int) -> LeavittElement:
    """Equivalent element whose star words all have length exactly l."""
    if l < a.depth:
        raise DepthTooSmall(f"depth {a.depth} exceeds requested {l}")
    xs = [FreePolynomial.gen(i, a.rank, a.field) - 1 for i in range(1, a.rank + 1)]
    terms = dict(a.terms)
    for level in range(l):
        nxt: Dict[XMonomial, FreePolynomial] = {}
        for w, lam in terms.items():
            if len(w) > level:
                nxt[w] = nxt[w] + lam if w in nxt else lam
                continue
            for i, x in enumerate(xs, start=1):
                key = w + (i,)
                val = lam * x
                if not val.is_zero():
                    nxt[key] = nxt[key] + val if key in nxt else val
        terms = {w: m for w, m in nxt.items() if not m.is_zero()}
    return LeavittElement(terms, a.rank, a.field)


def equals(a: LeavittElement, b: LeavittElement) -> bool:
    a._check(b)
    l = max(a.depth, b.depth)
    return canonical_form(a, l).terms == canonical_form(b, l).terms


def zeta(i: int, rank: int, field: Field) -> LeavittElement:
    """ζ_i = x_i x_i^*."""
    if not 1 <= i <= rank:
        raise IndexOutOfRange(f"index {i} outside 1..{rank}")
    return LeavittElement({(i,): FreePolynomial.gen(i, rank, field) - 1}, rank, field)


def parse_leavitt(text: str, rank: int, field: Field) -> LeavittElement:
    """Parse JSON or the text form ``expr @ i j ... ; expr @ ...``.

    ``expr @ 1 2`` stands for expr·(x1 x2)^* = expr·x2^* x1^*; a term without
    ``@`` has no stars.
    """
    from .expr import parse_expr

    s = text.strip()
    if s.startswith("{"):
        el = LeavittElement.from_json(s)
        if el.rank != rank and el.terms:
            raise RankMismatch(f"element of rank {el.rank}, expected {rank}")
        return el
    terms: Dict[XMonomial, FreePolynomial] = {}
    for chunk in s.split(";"):
        if not chunk.strip():
            continue
        poly_text, _, word_text = chunk.partition("@")
        try:
            w = tuple(int(tok) for tok in word_text.replace(",", " ").split())
        except ValueError as exc:
            raise ParseError(f"bad star word {word_text.strip()!r}") from exc
        lam = parse_expr(poly_text, rank, field)
        terms[w] = terms[w] + lam if w in terms else lam
    return LeavittElement(terms, rank, field)
