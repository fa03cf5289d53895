"""Free polynomials: elements of the group algebra k[F_n].

A :class:`FreePolynomial` is a finitely supported map from reduced words to
nonzero scalars.  Instances are immutable and hashable.
"""
from __future__ import annotations

import json
from typing import Dict, Iterable, Mapping

from .errors import FieldMismatch, ParseError, RankExceeded, RankMismatch, ZeroPolynomial
from .scalars import Field, FieldElem, field_from_spec, format_scalar
from .words import (
    EMPTY,
    Letter,
    Word,
    concat_reduce,
    free_reduce,
    invert,
    shortlex_key,
    word_from_json,
    word_to_json,
)

__all__ = [
    "FreePolynomial",
    "MixedPolynomial",
    "multiply",
    "augmentation",
    "length_of",
    "order_of",
    "strictly_maximal",
    "to_mixed_basis",
    "from_mixed_basis",
    "reduce_mixed_word",
]


class FreePolynomial:
    __slots__ = ("terms", "rank", "field", "_hash")

    def __init__(self, terms: Mapping[Word, FieldElem], rank: int, field: Field, *, _trusted=False):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.field = field
        if _trusted:
            self.terms: Dict[Word, FieldElem] = dict(terms)
        else:
            acc: Dict[Word, FieldElem] = {}
            zero = field.zero
            for w, c in terms.items():
                w = free_reduce(w, rank)
                acc[w] = acc.get(w, zero) + field(c)
            self.terms = {w: c for w, c in acc.items() if c != 0}
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rank: int, field: Field) -> "FreePolynomial":
        return cls({}, rank, field, _trusted=True)

    @classmethod
    def constant(cls, c, rank: int, field: Field) -> "FreePolynomial":
        return cls({EMPTY: c}, rank, field)

    @classmethod
    def monomial(cls, w: Iterable[Letter], rank: int, field: Field, coeff=1) -> "FreePolynomial":
        return cls({free_reduce(w, rank): coeff}, rank, field)

    @classmethod
    def gen(cls, i: int, rank: int, field: Field, sign: int = 1) -> "FreePolynomial":
        if not 1 <= i <= rank:
            raise RankExceeded(f"generator t{i} outside rank {rank}")
        return cls({((i, sign),): field.one}, rank, field, _trusted=True)

    def _new(self, terms) -> "FreePolynomial":
        return FreePolynomial(terms, self.rank, self.field, _trusted=True)

    def _check(self, other: "FreePolynomial") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} != rank {other.rank}")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} != {other.field}")

    def _lift(self, other) -> "FreePolynomial":
        if isinstance(other, FreePolynomial):
            self._check(other)
            return other
        return FreePolynomial.constant(self.field(other), self.rank, self.field)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "FreePolynomial":
        c = self.field(c)
        if c == 0:
            return self._new({})
        return self._new({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FreePolynomial):
            return self.scale(other)
        self._check(other)
        out: Dict[Word, FieldElem] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = concat_reduce(u, v)
                s = out.get(w)
                out[w] = a * b if s is None else s + a * b
        return self._new({w: c for w, c in out.items() if c != 0})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise ValueError("only units have negative powers")
            return self.unit_inverse() ** (-k)
        out = FreePolynomial.constant(1, self.rank, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def left_translate(self, w: Word) -> "FreePolynomial":
        return self._new({concat_reduce(w, u): c for u, c in self.terms.items()})

    def right_translate(self, w: Word) -> "FreePolynomial":
        return self._new({concat_reduce(u, w): c for u, c in self.terms.items()})

    # structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(w == EMPTY for w in self.terms)

    def constant_term(self) -> FieldElem:
        return self.terms.get(EMPTY, self.field.zero)

    def is_unit(self) -> bool:
        """Units of k[F] are exactly the nonzero scalar multiples of group elements."""
        return len(self.terms) == 1

    def unit_inverse(self) -> "FreePolynomial":
        if not self.is_unit():
            raise ValueError("not a unit")
        (w, c), = self.terms.items()
        return self._new({invert(w): 1 / c})

    def augmentation(self) -> FieldElem:
        return sum(self.terms.values(), self.field.zero)

    def length(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no length")
        return max(len(w) for w in self.terms)

    def support(self) -> list:
        return sorted(self.terms, key=shortlex_key)

    def items(self):
        return [(w, self.terms[w]) for w in self.support()]

    def coeff(self, w: Word) -> FieldElem:
        return self.terms.get(w, self.field.zero)

    def normalized(self) -> "FreePolynomial":
        """Divide by the augmentation (comonic normalization)."""
        e = self.augmentation()
        if e == 0:
            from .errors import ZeroAugmentation

            raise ZeroAugmentation("augmentation is zero")
        return self.scale(1 / e)

    def __eq__(self, other):
        if isinstance(other, FreePolynomial):
            return self.rank == other.rank and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "denominator") or hasattr(other, "p"):
            try:
                return self == self._lift(other)
            except Exception:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.field, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        return tuple((shortlex_key(w), format_scalar(c)) for w, c in self.items())

    # io -----------------------------------------------------------------
    def __str__(self):
        from .expr import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"FreePolynomial({str(self)!r}, rank={self.rank}, field={self.field})"

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "rank": self.rank,
            "terms": [{"word": word_to_json(w), "coeff": format_scalar(c)} for w, c in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> "FreePolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            field = field_from_spec(data["field"])
            rank = int(data["rank"])
            terms: Dict[Word, FieldElem] = {}
            for t in data["terms"]:
                w = word_from_json(t["word"], rank)
                terms[w] = terms.get(w, field.zero) + field.parse(str(t["coeff"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed polynomial JSON: {exc}") from exc
        return cls(terms, rank, field)


# module-level operations ----------------------------------------------

def multiply(a: FreePolynomial, b: FreePolynomial) -> FreePolynomial:
    return a * b


def augmentation(g: FreePolynomial) -> FieldElem:
    return g.augmentation()


def length_of(g: FreePolynomial) -> int:
    return g.length()


def order_of(g: FreePolynomial) -> int:
    """Valuation of the Magnus image, found by doubling the truncation."""
    from .series import magnus_embed

    if g.is_zero():
        raise ZeroPolynomial("the zero polynomial has no order")
    k = 4
    while True:
        s = magnus_embed(g, k)
        if not s.is_zero():
            return s.valuation()
        k *= 2


def strictly_maximal(g: FreePolynomial):
    """Return (maximal words, their first letters, special flag)."""
    n = g.length()
    words = {w for w in g.terms if len(w) == n}
    heads = {w[0] for w in words if w}
    return words, heads, (n >= 1 and len(heads) == 1)


# mixed x/y basis ------------------------------------------------------
# A mixed letter is (i, 1) for x_i = t_i - 1 and (i, -1) for y_i = t_i^-1 - 1.

class MixedPolynomial:
    __slots__ = ("terms", "rank", "field")

    def __init__(self, terms: Mapping[tuple, FieldElem], rank: int, field: Field):
        self.terms = {w: c for w, c in terms.items() if c != 0}
        self.rank = rank
        self.field = field

    def __eq__(self, other):
        return isinstance(other, MixedPolynomial) and self.terms == other.terms and self.rank == other.rank

    def __repr__(self):
        parts = []
        for w in sorted(self.terms, key=shortlex_key):
            name = "*".join(f"{'x' if s == 1 else 'y'}{i}" for i, s in w) or "1"
            parts.append(f"{format_scalar(self.terms[w])}*{name}")
        return "MixedPolynomial(" + " + ".join(parts) + ")" if parts else "MixedPolynomial(0)"

    def is_normal(self) -> bool:
        return all(_first_forbidden(w) is None for w in self.terms)


def _first_forbidden(w) -> int | None:
    for k in range(len(w) - 1):
        if w[k][0] == w[k + 1][0] and w[k][1] == -w[k + 1][1]:
            return k
    return None


def _all_forbidden(w) -> list:
    return [k for k in range(len(w) - 1) if w[k][0] == w[k + 1][0] and w[k][1] == -w[k + 1][1]]


def reduce_mixed_word(w: tuple, field: Field, choose=None) -> Dict[tuple, FieldElem]:
    """Normal form of one mixed word under x_i y_i, y_i x_i -> -x_i - y_i.

    ``choose`` picks which forbidden position to rewrite from the list of
    candidates; the default takes the leftmost.  Every choice gives the same
    result because the system is confluent.
    """
    out: Dict[tuple, FieldElem] = {}
    stack = [(tuple(w), field.one)]
    while stack:
        u, c = stack.pop()
        spots = _all_forbidden(u)
        if not spots:
            s = out.get(u)
            out[u] = c if s is None else s + c
            continue
        k = spots[0] if choose is None else choose(spots)
        i = u[k][0]
        pre, post = u[:k], u[k + 2 :]
        stack.append((pre + ((i, 1),) + post, -c))
        stack.append((pre + ((i, -1),) + post, -c))
    return {u: c for u, c in out.items() if c != 0}


def _append_mixed(w: tuple, a: tuple, c, acc: dict) -> None:
    # w is already normal; only the seam can create a forbidden factor.
    if w and w[-1][0] == a[0] and w[-1][1] == -a[1]:
        _append_mixed(w[:-1], (a[0], 1), -c, acc)
        _append_mixed(w[:-1], (a[0], -1), -c, acc)
        return
    key = w + (a,)
    acc[key] = acc.get(key, 0) + c


def to_mixed_basis(g: FreePolynomial) -> MixedPolynomial:
    field = g.field
    total: Dict[tuple, FieldElem] = {}
    for w, c in g.terms.items():
        cur: Dict[tuple, FieldElem] = {(): field.one}
        for a in w:
            nxt: Dict[tuple, FieldElem] = {}
            for u, cu in cur.items():
                nxt[u] = nxt.get(u, field.zero) + cu
                _append_mixed(u, a, cu, nxt)
            cur = {u: v for u, v in nxt.items() if v != 0}
        for u, cu in cur.items():
            total[u] = total.get(u, field.zero) + c * cu
    return MixedPolynomial(total, g.rank, field)


def from_mixed_basis(m: MixedPolynomial) -> FreePolynomial:
    rank, field = m.rank, m.field
    one = FreePolynomial.constant(1, rank, field)
    out = FreePolynomial.zero(rank, field)
    for w, c in m.terms.items():
        p = one
        for i, s in w:
            p = p * (FreePolynomial.gen(i, rank, field, s) - 1)
        out = out + p.scale(c)
    return out
