"""Truncated noncommutative power series in x_1..x_n and rational series.

A :class:`TruncatedSeries` is exact modulo monomials of degree > cutoff.
When two series with different cutoffs meet, the result keeps the smaller
cutoff.  A :class:`RationalRep` is a linear representation (P, Q, entry):
the series it stands for is entry ``entry`` of the unique solution of
Z = P + QZ, where P and Q hold free polynomials and every entry of Q has
zero augmentation.
"""
from __future__ import annotations

import json
from typing import Dict, List, Sequence

from .errors import DimensionMismatch, FieldMismatch, NonzeroConstantTerm, ParseError
from .freepoly import FreePolynomial
from .scalars import Field, FieldElem, field_from_spec, format_scalar
from .words import XMonomial

__all__ = [
    "TruncatedSeries",
    "magnus_embed",
    "quasi_inverse",
    "solve_affine_system",
    "invert_one_plus",
    "RationalRep",
    "rat_sum",
    "rat_product",
    "rat_quasi_inverse",
    "rat_eval",
]


class TruncatedSeries:
    __slots__ = ("cutoff", "terms", "rank", "field")

    def __init__(self, terms: Dict[XMonomial, FieldElem], cutoff: int, rank: int, field: Field):
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.cutoff = cutoff
        self.rank = rank
        self.field = field
        self.terms = {tuple(m): field(c) for m, c in terms.items() if len(m) <= cutoff and c != 0}

    @classmethod
    def constant(cls, c, cutoff, rank, field):
        return cls({(): c}, cutoff, rank, field)

    @classmethod
    def var(cls, i, cutoff, rank, field):
        return cls({(i,): 1}, cutoff, rank, field)

    def _new(self, terms, cutoff=None):
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.cutoff = self.cutoff if cutoff is None else cutoff
        out.rank = self.rank
        out.field = self.field
        out.terms = {m: c for m, c in terms.items() if c != 0 and len(m) <= out.cutoff}
        return out

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} != {other.field}")
            return other
        return TruncatedSeries.constant(self.field(other), self.cutoff, self.rank, self.field)

    def __add__(self, other):
        other = self._lift(other)
        k = min(self.cutoff, other.cutoff)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return self._new(out, k)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = self.field(c)
        return self._new({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        other = self._lift(other)
        k = min(self.cutoff, other.cutoff)
        out: Dict[XMonomial, FieldElem] = {}
        right = sorted(other.terms.items(), key=lambda t: len(t[0]))
        for u, a in self.terms.items():
            room = k - len(u)
            if room < 0:
                continue
            for v, b in right:
                if len(v) > room:
                    break
                m = u + v
                out[m] = out[m] + a * b if m in out else a * b
        return self._new(out, k)

    def __rmul__(self, other):
        return self.scale(other)

    def truncate(self, k: int) -> "TruncatedSeries":
        return self._new(self.terms, min(k, self.cutoff))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> FieldElem:
        return self.terms.get((), self.field.zero)

    def valuation(self) -> int:
        """Least degree carrying a nonzero coefficient."""
        if not self.terms:
            raise ValueError("zero series has no valuation below the cutoff")
        return min(len(m) for m in self.terms)

    def coeff(self, m) -> FieldElem:
        return self.terms.get(tuple(m), self.field.zero)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((self.cutoff, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __repr__(self):
        parts = []
        for m, c in self.sorted_terms():
            name = "*".join(f"x{i}" for i in m) or "1"
            parts.append(f"{format_scalar(c)}*{name}")
        body = " + ".join(parts) if parts else "0"
        return f"TruncatedSeries({body}, K={self.cutoff})"

    def to_json(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "field": str(self.field),
            "rank": self.rank,
            "terms": [{"mono": list(m), "coeff": format_scalar(c)} for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data, rank: int | None = None, field: Field | None = None) -> "TruncatedSeries":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            field = field or field_from_spec(data.get("field", "Q"))
            rank = rank or int(data.get("rank", 0)) or max(
                [max(t["mono"], default=1) for t in data["terms"]] + [1]
            )
            terms = {tuple(int(i) for i in t["mono"]): field.parse(str(t["coeff"])) for t in data["terms"]}
            return cls(terms, int(data["cutoff"]), rank, field)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed series JSON: {exc}") from exc


def _letter_image(i: int, sign: int, K: int, field: Field) -> Dict[XMonomial, FieldElem]:
    if sign > 0:
        return {(): field.one, (i,): field.one}
    # t^-1 = 1/(1 + x) = Σ (-x)^k
    return {(i,) * k: field(-1 if k % 2 else 1) for k in range(K + 1)}


def magnus_embed(g: FreePolynomial, K: int) -> TruncatedSeries:
    """Image under t_i -> 1 + x_i, t_i^-1 -> Σ (-x_i)^k, exact mod degree > K."""
    if K < 0:
        raise ValueError("cutoff must be >= 0")
    field, rank = g.field, g.rank
    cache: Dict[tuple, TruncatedSeries] = {}
    out = TruncatedSeries({}, K, rank, field)
    for w, c in g.terms.items():
        s = TruncatedSeries.constant(1, K, rank, field)
        for a in w:
            img = cache.get(a)
            if img is None:
                img = TruncatedSeries(_letter_image(a[0], a[1], K, field), K, rank, field)
                cache[a] = img
            s = s * img
        out = out + s.scale(c)
    return out


def quasi_inverse(s: TruncatedSeries) -> TruncatedSeries:
    """The u with u = s + s u (equivalently 1 + u = (1 - s)^-1)."""
    if s.constant_term() != 0:
        raise NonzeroConstantTerm("quasi-inverse needs a zero constant term")
    u = s
    for _ in range(s.cutoff):
        u = s + s * u
    return u


def _check_square(Q, l):
    if len(Q) != l or any(len(row) != l for row in Q):
        raise DimensionMismatch("Q must be square and match P")


def solve_affine_system(P: Sequence[TruncatedSeries], Q: Sequence[Sequence[TruncatedSeries]]) -> List[TruncatedSeries]:
    """Unique solution of Z = P + QZ by eliminating the last unknown first.

    z_l = (1 + q_ll^+)(p_l + Σ_{j<l} q_lj z_j); substituting it leaves a system
    of size l - 1 of the same shape.
    """
    l = len(P)
    _check_square(Q, l)
    for row in Q:
        for q in row:
            if q.constant_term() != 0:
                raise NonzeroConstantTerm("entries of Q must have zero constant term")
    if l == 0:
        return []
    P = list(P)
    Q = [list(row) for row in Q]
    last = l - 1
    c = quasi_inverse(Q[last][last]) + 1
    head_P = [P[i] + Q[i][last] * c * P[last] for i in range(last)]
    head_Q = [[Q[i][j] + Q[i][last] * c * Q[last][j] for j in range(last)] for i in range(last)]
    head = solve_affine_system(head_P, head_Q)
    acc = P[last]
    for j in range(last):
        acc = acc + Q[last][j] * head[j]
    return head + [c * acc]


def invert_one_plus(Q: Sequence[Sequence[TruncatedSeries]]) -> List[List[TruncatedSeries]]:
    """Inverse of 1 + Q modulo the cutoff, column by column."""
    l = len(Q)
    _check_square(Q, l)
    if l == 0:
        return []
    ref = Q[0][0]
    negQ = [[-q for q in row] for row in Q]
    cols = []
    for k in range(l):
        e = [TruncatedSeries.constant(1 if i == k else 0, ref.cutoff, ref.rank, ref.field) for i in range(l)]
        cols.append(solve_affine_system(e, negQ))
    return [[cols[c][r] for c in range(l)] for r in range(l)]


class RationalRep:
    """Linear representation of a rational series: entry of Z = P + QZ."""

    def __init__(self, P: Sequence[FreePolynomial], Q: Sequence[Sequence[FreePolynomial]], entry: int = 0):
        self.P = list(P)
        self.Q = [list(r) for r in Q]
        self.size = len(self.P)
        _check_square(self.Q, self.size)
        if not 0 <= entry < self.size:
            raise DimensionMismatch("designated entry out of range")
        self.entry = entry
        first = self.P[0]
        self.rank, self.field = first.rank, first.field
        for row in self.Q:
            for q in row:
                if q.augmentation() != 0:
                    raise NonzeroConstantTerm("Q entries must lie in the augmentation ideal")

    # constructors -------------------------------------------------------
    @classmethod
    def atom(cls, p: FreePolynomial) -> "RationalRep":
        return cls([p], [[FreePolynomial.zero(p.rank, p.field)]])

    @classmethod
    def geometric(cls, q: FreePolynomial) -> "RationalRep":
        """(1 - q)^-1 for q with ε(q) = 0."""
        return cls([FreePolynomial.constant(1, q.rank, q.field)], [[q]])

    def _zero(self):
        return FreePolynomial.zero(self.rank, self.field)

    def first_row_form(self) -> "RationalRep":
        """Same series with the designated entry moved to index 0."""
        if self.entry == 0:
            return self
        perm = [self.entry] + [i for i in range(self.size) if i != self.entry]
        P = [self.P[i] for i in perm]
        Q = [[self.Q[i][j] for j in perm] for i in perm]
        return RationalRep(P, Q, 0)

    def __repr__(self):
        return f"RationalRep(size={self.size}, entry={self.entry})"

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "entry": self.entry,
            "P": [p.to_json() for p in self.P],
            "Q": [[q.to_json() for q in row] for row in self.Q],
        }

    @classmethod
    def from_json(cls, data) -> "RationalRep":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            P = [FreePolynomial.from_json(p) for p in data["P"]]
            Q = [[FreePolynomial.from_json(q) for q in row] for row in data["Q"]]
            rep = cls(P, Q, int(data.get("entry", 0)))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed rational representation: {exc}") from exc
        if "size" in data and int(data["size"]) != rep.size:
            raise ParseError("size field disagrees with P")
        return rep


def _same(a: RationalRep, b: RationalRep):
    if a.field != b.field or a.rank != b.rank:
        raise FieldMismatch("representations over different algebras")


def rat_sum(a: RationalRep, b: RationalRep) -> RationalRep:
    _same(a, b)
    a, b = a.first_row_form(), b.first_row_form()
    z = a._zero()
    l1, l2 = a.size, b.size
    P = [a.P[0] + b.P[0]] + a.P + b.P
    Q = [[z] + a.Q[0] + b.Q[0]]
    Q += [[z] + a.Q[i] + [z] * l2 for i in range(l1)]
    Q += [[z] + [z] * l1 + b.Q[i] for i in range(l2)]
    return RationalRep(P, Q, 0)


def rat_product(a: RationalRep, b: RationalRep) -> RationalRep:
    _same(a, b)
    a, b = a.first_row_form(), b.first_row_form()
    z = a._zero()
    l1, l2 = a.size, b.size
    P = [p * b.P[0] for p in a.P] + b.P
    Q = [a.Q[i] + [a.P[i] * q for q in b.Q[0]] for i in range(l1)]
    Q += [[z] * l1 + b.Q[i] for i in range(l2)]
    return RationalRep(P, Q, 0)


def rat_quasi_inverse(a: RationalRep) -> RationalRep:
    """Representation of u^+ where u is the series of ``a``."""
    a = a.first_row_form()
    if rat_eval(a, 0).constant_term() != 0:
        raise NonzeroConstantTerm("quasi-inverse needs a zero constant term")
    z = a._zero()
    one = FreePolynomial.constant(1, a.rank, a.field)
    P, Q = a.P, a.Q
    if not P[0].is_zero():
        # border so that the first entry of P vanishes
        l = a.size
        P1 = [z] + P[1:] + [one]
        P2 = [P[0]] + [z] * l
        Q1 = [Q[i] + [P2[i]] for i in range(l)] + [[z] * (l + 1)]
        P, Q = P1, Q1
    bar = Q[0]
    Qn = [[Q[i][j] + P[i] * bar[j] for j in range(len(P))] for i in range(len(P))]
    return RationalRep(P, Qn, 0)


def rat_eval(a: RationalRep, K: int) -> TruncatedSeries:
    P = [magnus_embed(p, K) for p in a.P]
    Q = [[magnus_embed(q, K) for q in row] for row in a.Q]
    return solve_affine_system(P, Q)[a.entry]
