"""Right Fox derivatives, the star action and derivative spans.

``∂_i`` is the derivative dual to t_i and ``∂̄_i`` (written ``dbar``) the one
dual to t_i^-1.  Both satisfy ∂(ab) = ε(a)∂(b) + ∂(a)b, and ∂̄_i = -t_i ∂_i.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from .errors import IndexOutOfRange, RankExceeded, ZeroPolynomial
from .freepoly import FreePolynomial
from .linalg import Subspace
from .words import EMPTY, Word, shortlex_key

__all__ = [
    "DerivativeIndex",
    "partial_derivative",
    "derivative_recursive",
    "higher_derivative",
    "StarContext",
    "star_action",
    "derivative_span",
    "DerivativeSpan",
    "comonic_generators",
    "constant_witness",
    "derivative_order",
]


@dataclass(frozen=True)
class DerivativeIndex:
    index: int
    barred: bool = False

    def letter(self):
        return (self.index, -1 if self.barred else 1)

    def __str__(self):
        return f"dbar{self.index}" if self.barred else f"d{self.index}"


def derivative_order(rank: int) -> List[DerivativeIndex]:
    """Unbarred indices ascending, then barred ascending."""
    return [DerivativeIndex(i, False) for i in range(1, rank + 1)] + [
        DerivativeIndex(i, True) for i in range(1, rank + 1)
    ]


def _word_derivative(w: Word, i: int, barred: bool) -> List[Tuple[Word, int]]:
    # ∂_i(w)  = Σ_{w_k = t_i} θ(k)  - Σ_{w_k = t_i^-1} θ(k-1)
    # ∂̄_i(w) = Σ_{w_k = t_i^-1} θ(k) - Σ_{w_k = t_i} θ(k-1)
    plus = -1 if barred else 1
    out = []
    for k, (j, s) in enumerate(w):
        if j != i:
            continue
        if s == plus:
            out.append((w[k + 1 :], 1))
        else:
            out.append((w[k:], -1))
    return out


def _as_index(d, rank: int) -> DerivativeIndex:
    if isinstance(d, DerivativeIndex):
        di = d
    elif isinstance(d, tuple):
        di = DerivativeIndex(d[0], d[1] if isinstance(d[1], bool) else d[1] < 0)
    else:
        di = DerivativeIndex(int(d), False)
    if not 1 <= di.index <= rank:
        raise RankExceeded(f"derivative index {di.index} outside 1..{rank}")
    return di


def partial_derivative(d, g: FreePolynomial) -> FreePolynomial:
    """Apply ∂_i (``d = i`` or ``DerivativeIndex(i)``) or ∂̄_i (``barred=True``)."""
    di = _as_index(d, g.rank)
    acc: Dict[Word, object] = {}
    for w, c in g.terms.items():
        for u, sgn in _word_derivative(w, di.index, di.barred):
            v = c if sgn > 0 else -c
            s = acc.get(u)
            acc[u] = v if s is None else s + v
    return FreePolynomial({u: c for u, c in acc.items() if c != 0}, g.rank, g.field, _trusted=True)


def derivative_recursive(d, g: FreePolynomial) -> FreePolynomial:
    """Same derivative computed letter by letter with the product rule.

    Kept as an independent cross-check of :func:`partial_derivative`.
    """
    di = _as_index(d, g.rank)
    rank, field = g.rank, g.field
    out = FreePolynomial.zero(rank, field)
    for w, c in g.terms.items():
        # ∂(a w') = ∂(w') + ∂(a) w'   because ε(a) = 1 for a letter a
        acc = FreePolynomial.zero(rank, field)
        for k in range(len(w) - 1, -1, -1):
            a = w[k]
            rest = FreePolynomial.monomial(w[k + 1 :], rank, field)
            if a[0] == di.index:
                same = (a[1] == 1) != di.barred
                if same:
                    da = FreePolynomial.constant(1, rank, field)
                else:
                    da = -FreePolynomial.monomial((a,), rank, field)
                acc = acc + da * rest
        out = out + acc.scale(c)
    return out


def higher_derivative(w: Word, g: FreePolynomial) -> FreePolynomial:
    """∂_w: the first letter of ``w`` is applied first, the last letter last."""
    out = g
    for i, s in w:
        if not 1 <= i <= g.rank:
            raise RankExceeded(f"derivative index {i} outside 1..{g.rank}")
        out = partial_derivative(DerivativeIndex(i, s < 0), out)
        if out.is_zero():
            break
    return out


class StarContext:
    """Caches the 2n first derivatives of a comonic γ for the star action."""

    def __init__(self, gamma: FreePolynomial):
        from .errors import NotComonic

        if gamma.augmentation() != 1:
            raise NotComonic("the star action needs ε(γ) = 1")
        self.gamma = gamma
        self.rank = gamma.rank
        self.derivs = [partial_derivative(d, gamma) for d in derivative_order(gamma.rank)]

    def act(self, j: int, lam: FreePolynomial) -> FreePolynomial:
        return star_action(self, j, lam)


def star_action(ctx: StarContext, j: int, lam: FreePolynomial) -> FreePolynomial:
    """z_j ∗_γ λ = ∂λ - ε(λ)∂γ with ∂ = ∂_j (j ≤ n) or ∂̄_{j-n} (j > n)."""
    n = ctx.rank
    if not 1 <= j <= 2 * n:
        raise IndexOutOfRange(f"operator index {j} outside 1..{2 * n}")
    d = DerivativeIndex(j, False) if j <= n else DerivativeIndex(j - n, True)
    out = partial_derivative(d, lam)
    e = lam.augmentation()
    if e != 0:
        out = out - ctx.derivs[j - 1].scale(e)
    return out


class PolyCoords:
    """Coordinates of polynomials on a fixed, growable list of words."""

    def __init__(self, rank, field, words=()):
        self.rank = rank
        self.field = field
        self.words: List[Word] = []
        self.index: Dict[Word, int] = {}
        for w in words:
            self.add(w)

    def add(self, w: Word) -> int:
        k = self.index.get(w)
        if k is None:
            k = len(self.words)
            self.words.append(w)
            self.index[w] = k
        return k

    def vector(self, p: FreePolynomial) -> list:
        for w in p.terms:
            self.add(w)
        v = [self.field.zero] * len(self.words)
        for w, c in p.terms.items():
            v[self.index[w]] = c
        return v

    def poly(self, v) -> FreePolynomial:
        return FreePolynomial(
            {self.words[k]: c for k, c in enumerate(v) if c != 0}, self.rank, self.field, _trusted=True
        )


def _suffix_words(g: FreePolynomial) -> List[Word]:
    seen = set()
    for w in g.terms:
        for k in range(len(w) + 1):
            seen.add(w[k:])
    return sorted(seen, key=shortlex_key)


@dataclass
class DerivativeSpan:
    """Basis of span{∂_w γ} plus the matrices of the 2n derivatives on it.

    ``matrices[k][r][c]`` is the coefficient of ``basis[r]`` in the image of
    ``basis[c]`` under the k-th derivative of :func:`derivative_order`.
    """

    basis: List[FreePolynomial]
    matrices: List[list]
    coords: PolyCoords = dc_field(repr=False)
    space: Subspace = dc_field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, p: FreePolynomial) -> Optional[list]:
        """Coordinates of p on ``basis`` (None if p is outside the span)."""
        v = self.coords.vector(p)
        if len(v) != self.space.dim_ambient:
            if any(x != 0 for x in v[self.space.dim_ambient :]):
                return None
            v = v[: self.space.dim_ambient]
        red = self.space.reduce(v)
        if any(x != 0 for x in red):
            return None
        return self.space.coordinates(v)

    def to_json(self) -> dict:
        from .scalars import format_scalar

        return {
            "dimension": self.dimension,
            "basis": [b.to_json() for b in self.basis],
            "matrices": [[[format_scalar(x) for x in row] for row in m] for m in self.matrices],
        }


def derivative_span(g: FreePolynomial) -> DerivativeSpan:
    """Closure of {γ} under all 2n letter derivatives, in echelon form.

    All derivatives of γ are combinations of suffixes of its words, so the
    coordinate system is fixed up front.
    """
    if g.is_zero():
        raise ZeroPolynomial("derivative span of the zero polynomial")
    coords = PolyCoords(g.rank, g.field, _suffix_words(g))
    dim = len(coords.words)
    ops = derivative_order(g.rank)
    found: List[list] = []
    space = Subspace(g.field, dim)
    queue = deque([g])
    while queue:
        p = queue.popleft()
        v = coords.vector(p)
        if space.contains(v):
            continue
        space = space.span_with([v])
        found.append(v)
        for d in ops:
            q = partial_derivative(d, p)
            if not q.is_zero():
                queue.append(q)
    space = Subspace(g.field, dim, found)
    basis = [coords.poly(r) for r in space.rows]
    matrices = []
    for d in ops:
        cols = [space.coordinates(coords.vector(partial_derivative(d, b))) for b in basis]
        matrices.append([[cols[c][r] for c in range(len(basis))] for r in range(len(basis))])
    return DerivativeSpan(basis, matrices, coords, space)


def comonic_generators(g: FreePolynomial) -> List[FreePolynomial]:
    """Comonic polynomials generating the same left ideal of the Fox algebra.

    A polynomial with ε ≠ 0 is simply normalized.  Otherwise γ = Σ ζ_i γ and
    ζ_i γ lies in the ideal of ∂_i γ and of ∂̄_i γ, so γ is replaced by one
    derivative per index, picking the shorter of the two.  Lengths drop
    within two steps along every branch, so the recursion terminates.
    """
    if g.is_zero():
        raise ZeroPolynomial("comonic generators of zero")
    e = g.augmentation()
    if e != 0:
        h = g.scale(1 / e)
        return [_one(g)] if h.is_unit() else [h]
    gens: List[FreePolynomial] = []
    coords = PolyCoords(g.rank, g.field, _suffix_words(g))
    done = Subspace(g.field, len(coords.words))

    def visit(p: FreePolynomial):
        nonlocal done
        if p.is_zero():
            return
        e = p.augmentation()
        if e != 0:
            h = p.scale(1 / e)
            if h not in gens:
                gens.append(h)
            return
        v = coords.vector(p)
        if done.contains(v):
            return
        for i in range(1, g.rank + 1):
            a = partial_derivative(DerivativeIndex(i, False), p)
            b = partial_derivative(DerivativeIndex(i, True), p)
            la = a.length() if a else -1
            lb = b.length() if b else -1
            visit(a if la <= lb else b)
        done = done.span_with([v])

    visit(g)
    if any(h.is_unit() for h in gens):
        return [_one(g)]
    return sorted(gens, key=lambda h: (h.length(), h.sort_key()))


def _one(g: FreePolynomial) -> FreePolynomial:
    return FreePolynomial.constant(1, g.rank, g.field)


def constant_witness(lam: FreePolynomial, max_len: Optional[int] = None):
    """Shortest derivative word w (breadth first) with ∂_w λ a nonzero constant.

    Returns ``(w, value)`` or None if nothing is found within ``max_len``
    letters (default 2|λ|).
    """
    if lam.is_zero():
        raise ZeroPolynomial("no constant witness for zero")
    if max_len is None:
        max_len = 2 * lam.length()
    ops = derivative_order(lam.rank)
    layer = [(EMPTY, lam)]
    seen = {lam}
    for depth in range(max_len + 1):
        for w, p in layer:
            if p.is_constant() and not p.is_zero():
                return w, p.constant_term()
        if depth == max_len:
            break
        nxt = []
        for w, p in layer:
            for d in ops:
                q = partial_derivative(d, p)
                if q.is_zero() or q in seen:
                    continue
                seen.add(q)
                nxt.append((w + (d.letter(),), q))
        layer = nxt
    return None
