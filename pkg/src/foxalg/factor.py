"""Right division, lattices, greatest common divisors and factorization.

For a comonic γ the cyclic module coker γ = Λ/Λγ carries the starred
operators x_i^*, y_i^* acting on representatives by the star action.  The
span of all Fox derivatives of γ, taken modulo Λγ, is a lattice U that
contains the class e of 1.  The smallest lattice L sits inside U: it is the
spin of the stable image of the operators y_j^* x_i^*, and it may miss e.

* zero tests in coker γ reduce a state q·e + u through x_i^* then y_j^*
  until q is a constant (:class:`CokerOracle`);
* a submodule of L can generate less than its trace on L, so submodules are
  enlarged by Λ-multiples before they are read as left ideals;
* every divisor found from a submodule is certified by exact division,
  so a wrong guess costs a retry, never a wrong answer;
* irreducibility is simplicity of L, and factorization splits γ = π·c
  along proper submodules until every piece has a simple lattice.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BudgetExhausted,
    FieldMismatch,
    IsUnit,
    NotComonic,
    NotDivisibleWithinBound,
    UnresolvedSimplicity,
    RankMismatch,
    ZeroAugmentation,
    ZeroDivisor,
    ZeroPolynomial,
)
from .fox import (
    DerivativeIndex,
    PolyCoords,
    _suffix_words,
    comonic_generators,
    derivative_order,
    derivative_span,
    partial_derivative,
)
from .freepoly import FreePolynomial
from .linalg import Subspace, mat_mul, mat_vec, nullspace, rref, solve_sparse
from .repmod import (
    OperatorModule,
    composition_series,
    intertwiner_space,
    is_isomorphic,
    is_simple,
    minimal_submodule,
    project,
    quotient,
    spin,
    submodule,
)
from .scalars import Mod, PrimeField, format_scalar
from .words import EMPTY, Word, concat_reduce, invert, reduced_words, shortlex_key, word_to_json

__all__ = [
    "divide_right",
    "divide_left",
    "Lattice",
    "lattice_of",
    "CokerOracle",
    "gcd",
    "is_irreducible",
    "factorize",
    "Factorization",
    "similar",
    "endo_dim",
    "composition_length",
    "canonical_translate",
    "same_up_to_translate",
]

DIVISION_NODE_BUDGET = 200_000
CIRCUIT_LIMIT = 5000
AFFINE_LIMIT = 3125


def _check_pair(a: FreePolynomial, b: FreePolynomial) -> None:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} != {b.field}")


def _one(g: FreePolynomial) -> FreePolynomial:
    return FreePolynomial.constant(1, g.rank, g.field)


def _comonic(g: FreePolynomial) -> FreePolynomial:
    if g.is_zero():
        raise ZeroPolynomial("zero polynomial")
    e = g.augmentation()
    if e == 0:
        raise ZeroAugmentation("polynomial lies in the augmentation ideal")
    return g if e == 1 else g.scale(1 / e)


# right division ----------------------------------------------------------------


class _Stop(Exception):
    pass


def _divide_recursive(lam: FreePolynomial, gamma: FreePolynomial, max_len: int) -> FreePolynomial:
    """The ρ with ργ = λ, assuming ε(γ) ≠ 0.

    Uses ∂(ργ) = ε(ρ)∂γ + (∂ρ)γ to get the derivatives of ρ as quotients of
    smaller problems, then ρ = ε(ρ) + Σ (t_i - 1) ∂_i ρ.  The two derivative
    families alternate so that lengths of ρ drop every second level.
    """
    n, F = gamma.rank, gamma.field
    eg = gamma.augmentation()
    families = []
    for barred in (False, True):
        fam = []
        for i in range(1, n + 1):
            d = DerivativeIndex(i, barred)
            step = FreePolynomial.gen(i, n, F, -1 if barred else 1) - 1
            fam.append((d, partial_derivative(d, gamma), step))
        families.append(fam)
    limit = 2 * max_len + 3
    memo: Dict[tuple, FreePolynomial] = {}
    active = set()
    nodes = [0]

    def rec(p: FreePolynomial, parity: int, depth: int) -> FreePolynomial:
        key = (p, parity)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if key in active or depth > limit:
            raise _Stop
        nodes[0] += 1
        if nodes[0] > DIVISION_NODE_BUDGET:
            raise _Stop
        active.add(key)
        c = p.augmentation() / eg
        out = FreePolynomial.constant(c, n, F)
        for d, dg, step in families[parity]:
            sub = partial_derivative(d, p)
            if c != 0:
                sub = sub - dg.scale(c)
            if not sub.is_zero():
                out = out + step * rec(sub, 1 - parity, depth + 1)
        active.discard(key)
        memo[key] = out
        return out

    return rec(lam, 0, 0)


def _divide_linear(lam: FreePolynomial, gamma: FreePolynomial, max_len: int) -> Optional[FreePolynomial]:
    n, F = gamma.rank, gamma.field
    start = min(lam.length(), max_len)
    for L in range(start, max_len + 1):
        words = list(reduced_words(n, L))
        eqs: Dict[Word, Dict[Word, object]] = {}
        for w in words:
            for u, c in gamma.terms.items():
                m = concat_reduce(w, u)
                row = eqs.setdefault(m, {})
                row[w] = row.get(w, F.zero) + c
        for m in lam.terms:
            eqs.setdefault(m, {})
        keys = list(eqs)
        sol = solve_sparse([eqs[k] for k in keys], [lam.coeff(k) for k in keys], F)
        if sol is not None:
            return FreePolynomial({w: c for w, c in sol.items() if c != 0}, n, F)
    return None


def divide_right(lam: FreePolynomial, gamma: FreePolynomial, max_len: Optional[int] = None) -> FreePolynomial:
    """ρ with ρ·γ = λ, looking only at ρ of length <= max_len.

    Raises :class:`NotDivisibleWithinBound` when no such ρ exists; every
    returned quotient is checked by multiplication.
    """
    _check_pair(lam, gamma)
    if gamma.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    if lam.is_zero():
        return lam
    if max_len is None:
        max_len = lam.length() + gamma.length() + 4
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    rho: Optional[FreePolynomial]
    if gamma.is_unit():
        rho = lam * gamma.unit_inverse()
    elif gamma.augmentation() != 0:
        try:
            rho = _divide_recursive(lam, gamma, max_len)
        except _Stop:
            rho = None
    else:
        rho = _divide_linear(lam, gamma, max_len)
    if rho is None or (not rho.is_zero() and rho.length() > max_len) or rho * gamma != lam:
        raise NotDivisibleWithinBound(max_len)
    return rho


def _bar(g: FreePolynomial) -> FreePolynomial:
    """The anti-involution w -> w^-1."""
    return FreePolynomial({invert(w): c for w, c in g.terms.items()}, g.rank, g.field, _trusted=True)


def divide_left(lam: FreePolynomial, alpha: FreePolynomial, max_len: Optional[int] = None) -> FreePolynomial:
    """β with α·β = λ."""
    return _bar(divide_right(_bar(lam), _bar(alpha), max_len))


# zero tests in coker γ ---------------------------------------------------------


class CokerOracle:
    """Exact zero test for elements q·e + u of a cyclic module Λ/Λδ.

    ``module`` is a lattice of the module (its 2n operators are the starred
    x_1^*..x_n^*, y_1^*..y_n^*) containing the class e of 1.  A state is
    zero iff all its images under y_j^* x_i^* are zero, and those images
    have shorter polynomial part, so the test bottoms out in the lattice.
    Coordinates are compressed level by level to stay small.  Arithmetic
    runs on plain ints modulo p over GF(p).
    """

    def __init__(self, module: OperatorModule, e: Sequence, rank: int):
        self.module = module
        self.rank = rank
        self.field = module.field
        self.p = module.field.p if isinstance(module.field, PrimeField) else None
        self.ops = [DerivativeIndex(i, False) for i in range(1, rank + 1)]
        self.bars = [DerivativeIndex(i, True) for i in range(1, rank + 1)]
        self._ops = [[[self._raw(x) for x in row] for row in op] for op in module.operators]
        self._e = [self._raw(x) for x in e]
        self._ze = [self._mv(j, self._e) for j in range(len(self._ops))]
        self._g_cache: Dict[Word, list] = {}

    def _raw(self, x):
        return int(x) if self.p else x

    def _cook(self, x):
        return Mod(x, self.p) if self.p else x

    def _mv(self, j: int, v):
        out = []
        for row in self._ops[j]:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc += a * b
            out.append(acc % self.p if self.p else acc)
        return out

    def _step(self, q: FreePolynomial, v, j: int):
        """Image of the state (q, v) under operator j (0-based), v raw."""
        d = self.ops[j] if j < self.rank else self.bars[j - self.rank]
        e = self._raw(q.augmentation()) if q.terms else 0
        nv = self._mv(j, v) if v is not None else [0] * self.module.dim
        if e:
            nv = [a + e * b for a, b in zip(nv, self._ze[j])]
            if self.p:
                nv = [x % self.p for x in nv]
        return partial_derivative(d, q), nv

    def _grandchildren(self, q: FreePolynomial, v) -> list:
        out = []
        n = self.rank
        for i in range(n):
            q1, v1 = self._step(q, v, i)
            for j in range(n):
                out.append(self._step(q1, v1, n + j))
        return out

    def grandchildren(self, q: FreePolynomial, v) -> list:
        """All images (y_j^* x_i^* applied to q·e + v) as (poly, vector) pairs."""
        raw = None if v is None else [self._raw(x) for x in v]
        return [(q2, [self._cook(x) for x in v2]) for q2, v2 in self._grandchildren(q, raw)]

    def _word_children(self, w: Word) -> list:
        hit = self._g_cache.get(w)
        if hit is None:
            mono = FreePolynomial({w: self.field.one}, self.rank, self.field, _trusted=True)
            hit = [(dict((u, self._raw(c)) for u, c in q2.terms.items()), v2) for q2, v2 in self._grandchildren(mono, None)]
            self._g_cache[w] = hit
        return hit

    def _combine(self, terms, v, coord, cu, width):
        acc = [0] * width
        for u, c in terms.items():
            if c:
                acc = [a + c * x for a, x in zip(acc, coord[u])]
        for b, c in enumerate(v):
            if c:
                acc = [a + c * x for a, x in zip(acc, cu[b])]
        if self.p:
            acc = [x % self.p for x in acc]
        return acc

    def _compress(self, rows: List[list], width: int) -> List[int]:
        return rref(rows, width, self.field)[1]

    def coordinates(self, states: Sequence[Tuple[FreePolynomial, Optional[Sequence]]]) -> List[list]:
        """Compressed coordinates; a state is zero iff its coordinates are."""
        r, n = self.module.dim, self.rank
        depth = max((q.length() for q, _ in states if q.terms), default=0)
        levels: List[set] = [set() for _ in range(depth + 1)]
        for q, _ in states:
            levels[depth].update(q.terms)
        for d in range(depth, 0, -1):
            for w in levels[d]:
                for q2, _ in self._word_children(w):
                    levels[d - 1].update(q2)
        if any(w != EMPTY for w in levels[0]):
            raise AssertionError("non-constant word at level 0")
        coord: Dict[Word, list] = {w: list(self._e) for w in levels[0]}
        cu = [[1 if k == b else 0 for k in range(r)] for b in range(r)]
        units = [[1 if k == b else 0 for k in range(r)] for b in range(r)]
        zz = [[self._mv(n + j, self._mv(i, u)) for i in range(n) for j in range(n)] for u in units]
        width = r
        for d in range(1, depth + 1):
            raw_words = {}
            for w in levels[d]:
                parts = []
                for terms, v2 in self._word_children(w):
                    parts.extend(self._combine(terms, v2, coord, cu, width))
                raw_words[w] = parts
            raw_u = []
            for b in range(r):
                parts = []
                for img in zz[b]:
                    parts.extend(self._combine({}, img, coord, cu, width))
                raw_u.append(parts)
            piv = self._compress(list(raw_words.values()) + raw_u, n * n * width)
            coord = {w: [v[k] for k in piv] for w, v in raw_words.items()}
            cu = [[v[k] for k in piv] for v in raw_u]
            width = len(piv)
        out = []
        for q, v in states:
            terms = {u: self._raw(c) for u, c in q.terms.items()}
            vr = [self._raw(x) for x in v] if v is not None else [0] * r
            out.append([self._cook(x) for x in self._combine(terms, vr, coord, cu, width)])
        return out

    def is_zero(self, q: FreePolynomial, v=None) -> bool:
        return all(x == 0 for x in self.coordinates([(q, v)])[0])

    def kernel(self, polys: Sequence[FreePolynomial]) -> List[list]:
        """Basis of {c : Σ c_k polys[k] is zero in the module}."""
        cols = self.coordinates([(p, None) for p in polys])
        width = len(cols[0]) if cols else 0
        rows = [[cols[k][r] for k in range(len(polys))] for r in range(width)]
        return nullspace(rows, len(polys), self.field)

    def orbit_submodule(self, q: FreePolynomial) -> Subspace:
        """Spin of the deep y^*x^* images of the class of q: a submodule of
        the lattice that generates the same submodule as q."""
        F, r = self.field, self.module.dim
        coords = PolyCoords(q.rank, F, _suffix_words(q))
        nw = len(coords.words)
        states = [(q, [0] * r)]
        for _ in range(q.length() if q.terms else 0):
            space = Subspace(F, nw + r)
            nxt = []
            for p, v in states:
                for p2, v2 in self._grandchildren(p, v):
                    vec = coords.vector(p2) + [self._cook(x) for x in v2]
                    if len(vec) != nw + r:
                        raise AssertionError("derivative left the suffix span")
                    if not space.contains(vec):
                        space = space.span_with([vec])
                        nxt.append((p2, v2))
            states = nxt
        leaves = []
        for p, v in states:
            c = self._raw(p.constant_term()) if p.terms else 0
            leaves.append([self._cook(a + c * b) for a, b in zip(v, self._e)])
        return spin(self.module, leaves)


# lattices ----------------------------------------------------------------------


def _g_operators(M: OperatorModule, rank: int) -> List[list]:
    """Matrices of y_j^* x_i^* for all i, j."""
    X, Y = M.operators[:rank], M.operators[rank:]
    return [mat_mul(Yj, Xi, M.field) for Xi in X for Yj in Y]


def _stable_image(M: OperatorModule, rank: int) -> Tuple[Subspace, int]:
    """(W, K): W = G^K(M) = G^{K+1}(M), G the y^*x^* operators.

    Each G step shortens representatives, so W sits inside every lattice.
    """
    gops = _g_operators(M, rank)
    F = M.field
    W = Subspace.full(F, M.dim)
    K = 0
    while True:
        nxt = Subspace(F, M.dim, [mat_vec(g, r, F) for g in gops for r in W.rows])
        if nxt.dim == W.dim:
            return W, K
        W, K = nxt, K + 1


@dataclass
class Lattice:
    """The smallest lattice of coker γ as an operator module.

    ``module`` is the smallest lattice with polynomial labels (lifts).  It is
    computed inside ``span``, the lattice spanned by the classes of all
    derivatives of γ, which always contains the class of 1 (``span_one``)
    but can be larger.  ``embedding`` holds the smallest lattice as a
    subspace of ``span``; ``one_class`` gives the class of 1 in ``module``
    coordinates, or None when it lies outside.
    """

    module: OperatorModule
    gamma: FreePolynomial
    one_class: Optional[list]
    span: OperatorModule = dc_field(repr=False)
    span_one: list = dc_field(repr=False)
    embedding: Subspace = dc_field(repr=False)
    _oracle: Optional[CokerOracle] = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def oracle(self) -> CokerOracle:
        if self._oracle is None:
            self._oracle = CokerOracle(self.span, self.span_one, self.gamma.rank)
        return self._oracle

    def lift(self, v: Sequence) -> FreePolynomial:
        acc = FreePolynomial.zero(self.gamma.rank, self.gamma.field)
        for c, lab in zip(v, self.module.labels):
            if c != 0:
                acc = acc + lab.scale(c)
        return acc

    def contains(self, lam: FreePolynomial) -> bool:
        """Whether λ lies in Λγ (exact)."""
        return self.oracle.is_zero(lam)

    def _to_span(self, v: Sequence) -> list:
        F = self.gamma.field
        out = [F.zero] * self.span.dim
        for c, row in zip(v, self.embedding.rows):
            if c != 0:
                out = [a + c * b for a, b in zip(out, row)]
        return out

    def orbit(self, mu: FreePolynomial) -> Subspace:
        """A submodule X of ``span`` inside the submodule S generated by the
        class of μ, with Λ·X = S."""
        return self.oracle.orbit_submodule(mu)

    def expand(self, X: Subspace, ell: int) -> Subspace:
        """``span`` ∩ Λ_{<=ell}·X, a submodule between X and Λ·X ∩ ``span``."""
        if ell == 0 or X.dim == 0 or X.dim == self.span.dim:
            return X
        F, n = self.gamma.field, self.gamma.rank
        lifts = [_combine(self.span.labels, r, n, F) for r in X.rows]
        states = [(FreePolynomial({w: F.one}, n, F, _trusted=True) * p, None) for w in reduced_words(n, ell) for p in lifts]
        states += [(FreePolynomial.zero(n, F), self.span.unit(b)) for b in range(self.span.dim)]
        cols = self.oracle.coordinates(states)
        width = len(cols[0])
        rows = [[col[r] for col in cols] for r in range(width)]
        sol = nullspace(rows, len(states), F)
        k = len(states) - self.span.dim
        return spin(self.span, [v[k:] for v in sol] + list(X.rows))

    def to_json(self) -> dict:
        out = self.module.to_json()
        out["gamma"] = self.gamma.to_json()
        out["one_class"] = None if self.one_class is None else [format_scalar(x) for x in self.one_class]
        return out


def lattice_of(gamma: FreePolynomial, spurious_bound: Optional[int] = None) -> Lattice:
    """Smallest lattice of coker γ for a comonic non-unit γ.

    The span V of all derivatives of γ is divided by V ∩ Λγ.  The line kγ is
    always in there; larger intersections are searched for among ργ with
    |ρ| <= ``spurious_bound`` (default min(|γ|, 2)).  The smallest lattice is
    the spin of the stable image of the y^*x^* operators on that quotient.
    """
    if gamma.is_zero():
        raise ZeroPolynomial("lattice of zero")
    if gamma.augmentation() != 1:
        raise NotComonic("lattice needs ε(γ) = 1")
    if gamma.is_unit():
        raise IsUnit("units have zero cokernel")
    F, n = gamma.field, gamma.rank
    span = derivative_span(gamma)
    m = span.dimension
    eps = [b.augmentation() for b in span.basis]
    ops = []
    for k, d in enumerate(derivative_order(n)):
        dg = span.coordinates(partial_derivative(d, gamma))
        D = span.matrices[k]
        ops.append([[D[r][c] - eps[c] * dg[r] for c in range(m)] for r in range(m)])
    vmod = OperatorModule(m, ops, F, labels=span.basis)
    B = min(gamma.length(), 2) if spurious_bound is None else spurious_bound
    Y = _multiples_in_span(gamma, span, B)
    U = quotient(vmod, Y)
    one = span.coordinates(_one(gamma))
    if one is None:
        raise AssertionError("1 is not a combination of derivatives")
    e = project(vmod, Y, one)
    W, _ = _stable_image(U, n)
    L = spin(U, W.rows)
    return Lattice(submodule(U, L), gamma, L.coordinates(e), U, e, L)


def _multiples_in_span(gamma: FreePolynomial, span, bound: int) -> Subspace:
    """Coordinates (on the span basis) of V ∩ {ργ : |ρ| <= bound}."""
    F, n = gamma.field, gamma.rank
    m = span.dimension
    mults = [FreePolynomial({w: F.one}, n, F, _trusted=True) * gamma for w in reduced_words(n, bound)]
    coords = PolyCoords(n, F)
    cols = [coords.vector(b) for b in span.basis] + [coords.vector(-p) for p in mults]
    N = len(coords.words)
    rows = [[(col[r] if r < len(col) else F.zero) for col in cols] for r in range(N)]
    sol = nullspace(rows, len(cols), F)
    return Subspace(F, m, [v[:m] for v in sol])


def _combine(labels, v, rank, F) -> FreePolynomial:
    acc = FreePolynomial.zero(rank, F)
    for c, lab in zip(v, labels):
        if c != 0:
            acc = acc + lab.scale(c)
    return acc


def _search_generator(lat: Lattice, X: Subspace, accept, max_len: int, max_expand: int = 3):
    """A comonic c with [c] in S = Λ·X and ``accept(c)`` true.

    Returns 1 when S is everything, None when nothing was accepted.  Zero
    tests run on ``span`` modulo an inner approximation T of S ∩ ``span``,
    so every c found really lies in the preimage of S.  A larger T only
    enlarges the kernel, so T is grown first and searched once.
    """
    g = lat.gamma
    T = X
    for ell in range(1, max_expand + 1):
        if T.dim == lat.span.dim:
            break
        T2 = lat.expand(X, ell)
        if T2 == T and ell > 1:
            break
        T = T2
    if T.dim == lat.span.dim:
        return _one(g)
    Uq = quotient(lat.span, T)
    eq = project(lat.span, T, lat.span_one)
    return _generator(Uq, eq, g.rank, g.field, max_len, accept)


# gcd ----------------------------------------------------------------------------


def _coeff_key(c):
    return (c.v,) if hasattr(c, "v") else (c.numerator, c.denominator)


def _poly_key(g: FreePolynomial):
    supp = g.support()
    return (
        g.length() if not g.is_zero() else -1,
        tuple(shortlex_key(w) for w in supp),
        tuple(_coeff_key(g.terms[w]) for w in supp),
    )


def _dist(a: Word, b: Word) -> int:
    return len(concat_reduce(invert(a), b))


def _centers(supp: Sequence[Word]) -> List[Word]:
    hull = set()
    for a in supp:
        for b in supp:
            g = concat_reduce(invert(a), b)
            for k in range(len(g) + 1):
                hull.add(concat_reduce(a, g[:k]))
    best, out = None, []
    for x in hull:
        ecc = max(_dist(x, v) for v in supp)
        if best is None or ecc < best:
            best, out = ecc, [x]
        elif ecc == best:
            out.append(x)
    return out


def canonical_translate(g: FreePolynomial) -> FreePolynomial:
    """A representative of {w·g : w in F_n} depending only on that set.

    The shortest translates are x^-1·g for x a center of the support in the
    Cayley tree; among them the least in shortlex order is taken.
    """
    if g.is_zero():
        return g
    cands = []
    for x in _centers(list(g.terms)):
        cands.append(g.left_translate(invert(x)))
    return min(cands, key=_poly_key)


def same_up_to_translate(a: FreePolynomial, b: FreePolynomial) -> bool:
    return canonical_translate(a) == canonical_translate(b)


def _circuits(basis: List[list], F) -> List[list]:
    k = len(basis)
    if k == 0:
        return []
    if k == 1:
        return [basis[0]]
    support = sorted({c for v in basis for c, x in enumerate(v) if x != 0})
    total = 1
    for t in range(k - 1):
        total = total * (len(support) - t) // (t + 1)
    if total > CIRCUIT_LIMIT:
        return list(basis)
    out, seen = [], set()
    for T in itertools.combinations(support, k - 1):
        rows = [[basis[r][c] for r in range(k)] for c in T]
        ns = nullspace(rows, k, F)
        if len(ns) != 1:
            continue
        a = ns[0]
        v = [sum((a[r] * basis[r][c] for r in range(k)), F.zero) for c in range(len(basis[0]))]
        key = tuple(c for c, x in enumerate(v) if x != 0)
        if key in seen:
            continue
        seen.add(key)
        out.append(v)
    return out


def _candidates(basis: List[list], words: List[Word], rank: int, F) -> Iterable[FreePolynomial]:
    """Comonic elements of span(basis) worth testing, sparsest first."""

    def poly(v):
        return FreePolynomial({w: c for w, c in zip(words, v) if c != 0}, rank, F, _trusted=True)

    seen = set()
    first = []
    for v in _circuits(basis, F):
        p = poly(v)
        e = p.augmentation()
        if e == 0:
            continue
        p = p.scale(1 / e)
        if p.is_unit() or p in seen:
            continue
        seen.add(p)
        first.append(p)
    first.sort(key=lambda p: (len(p.terms), _poly_key(p)))
    yield from first
    k = len(basis)
    if isinstance(F, PrimeField) and F.p ** (k - 1) <= AFFINE_LIMIT:
        for coeffs in itertools.product(range(F.p), repeat=k):
            v = [sum((F(c) * basis[r][j] for r, c in enumerate(coeffs)), F.zero) for j in range(len(words))]
            p = poly(v)
            if p.is_zero() or p.augmentation() != 1 or p.is_unit() or p in seen:
                continue
            seen.add(p)
            yield p


def _generator(module: OperatorModule, e: Sequence, rank: int, field, max_len: int, accept):
    """First accepted comonic c in the kernel of Λ -> coker, sparsest first."""
    oracle = CokerOracle(module, e, rank)
    for ell in range(1, max_len + 1):
        words = list(reduced_words(rank, ell))
        monos = [FreePolynomial({w: field.one}, rank, field, _trusted=True) for w in words]
        basis = oracle.kernel(monos)
        if not any(sum(v, field.zero) != 0 for v in basis):
            continue
        basis, _ = rref(basis, len(words), field)
        for c in _candidates(basis, words, rank, field):
            if accept(c):
                return c
    return None


def _divides(lam: FreePolynomial, c: FreePolynomial) -> Optional[FreePolynomial]:
    try:
        return divide_right(lam, c)
    except NotDivisibleWithinBound:
        return None


def _gcd_pair(a: FreePolynomial, b: FreePolynomial) -> FreePolynomial:
    if a.is_unit() or b.is_unit():
        return _one(a)
    if a == b:
        return a
    for x, y in ((a, b), (b, a)):
        try:
            divide_right(y, x, y.length() + x.length())
            return x
        except NotDivisibleWithinBound:
            pass
    g, mu = (a, b) if (a.length(), _poly_key(a)) <= (b.length(), _poly_key(b)) else (b, a)
    lat = lattice_of(g)
    # c lies in L(Λ)g + L(Λ)μ, so dividing both makes it the generator
    accept = lambda c: _divides(g, c) is not None and _divides(mu, c) is not None
    delta = _search_generator(lat, lat.orbit(mu), accept, min(a.length(), b.length()))
    if delta is None:
        raise BudgetExhausted(f"no certified common divisor of {g} and {mu}")
    return delta


def gcd(gamma: FreePolynomial, lam: FreePolynomial, seed: int = 0, shuffle: bool = False) -> FreePolynomial:
    """The comonic δ with L(Λ)γ + L(Λ)λ = L(Λ)δ.

    δ is unique up to left multiplication by a group element.  A normalized
    input of minimal length that is such a translate is returned, otherwise
    the canonical translate, which is a shortest one.  ``shuffle`` permutes the internal generator order,
    which must not change the answer.
    """
    _check_pair(gamma, lam)
    if gamma.is_zero() or lam.is_zero():
        raise ZeroPolynomial("gcd with the zero polynomial")
    one = _one(gamma)
    gens = comonic_generators(gamma) + comonic_generators(lam)
    if any(g.is_unit() for g in gens):
        return one
    if shuffle:
        random.Random(seed).shuffle(gens)
    delta = gens[0]
    for g in gens[1:]:
        delta = _gcd_pair(delta, g)
        if delta.is_unit():
            return one
    canon = canonical_translate(delta)
    bound = min(gamma.length(), lam.length())
    picks = [_comonic(p) for p in (gamma, lam) if p.augmentation() != 0 and p.length() <= bound]
    picks = [p for p in picks if canonical_translate(p) == canon]
    delta = picks[0] if picks else canon
    for p in (gamma, lam):
        try:
            divide_right(p, delta)
        except NotDivisibleWithinBound as exc:
            raise BudgetExhausted(f"gcd candidate {delta} failed to divide {p}") from exc
    return delta


# irreducibility and factorization ---------------------------------------------------


def _prepared(gamma: FreePolynomial) -> FreePolynomial:
    g = _comonic(gamma)
    if g.is_unit():
        raise IsUnit(f"{gamma} is a unit")
    return g


def _split(g: FreePolynomial, lat: Lattice, seed: int, tries: int = 4):
    """(π, c) with g = π·c and both non-units, or None if none was found.

    c is searched in the preimage of the submodule generated by a minimal
    submodule of the smallest lattice.
    """
    def accept(c):
        if c.is_unit():
            return False
        pi = _divides(g, c)
        if pi is None or pi.is_unit():
            return False
        found.append(pi)
        return True

    for k in range(tries):
        N = minimal_submodule(lat.module, seed + k)
        X = spin(lat.span, [lat._to_span(r) for r in N.rows])
        found: List[FreePolynomial] = []
        c = _search_generator(lat, X, accept, g.length())
        if c is not None and found:
            return found[-1], c
    return None


def is_irreducible(gamma: FreePolynomial, seed: int = 0) -> bool:
    """Whether coker γ is simple.

    A simple smallest lattice proves irreducibility and an exact split
    γ = π·c into non-units proves the opposite.
    """
    g = _prepared(gamma)
    lat = lattice_of(g)
    if is_simple(lat.module, seed):
        return True
    if _split(g, lat, seed) is not None:
        return False
    raise UnresolvedSimplicity(f"lattice of {g} is not simple but no factor was found")


def composition_length(gamma: FreePolynomial, seed: int = 0) -> int:
    """Composition length of the smallest lattice of coker γ."""
    g = _comonic(gamma)
    if g.is_unit():
        return 0
    return len(composition_series(lattice_of(g).module, seed)) - 1


@dataclass
class Factorization:
    """γ = unit · unit_word · factors[0] ⋯ factors[-1]."""

    unit: object
    factors: List[FreePolynomial]
    input: FreePolynomial
    unit_word: Word = EMPTY

    @property
    def length(self) -> int:
        return len(self.factors)

    def product(self) -> FreePolynomial:
        acc = FreePolynomial({self.unit_word: self.unit}, self.input.rank, self.input.field)
        for f in self.factors:
            acc = acc * f
        return acc

    @property
    def verified(self) -> bool:
        return self.product() == self.input

    def to_json(self) -> dict:
        return {
            "unit": format_scalar(self.unit),
            "unit_word": word_to_json(self.unit_word),
            "factors": [f.to_json() for f in self.factors],
            "length": self.length,
            "verified": self.verified,
        }


def factorize(gamma: FreePolynomial, seed: int = 0) -> Factorization:
    """Irreducible comonic factors π_1 ⋯ π_m of γ (up to a scalar).

    γ is split as π·c recursively until every piece has a simple smallest
    lattice, which certifies it is irreducible.  Right factors are brought
    to a canonical left translate.
    """
    g = _comonic(gamma)
    unit = gamma.augmentation()
    if g.is_unit():
        (w, _), = g.terms.items()
        return Factorization(unit, [], gamma, w)

    def rec(p: FreePolynomial) -> List[FreePolynomial]:
        lat = lattice_of(p)
        if is_simple(lat.module, seed):
            return [p]
        parts = _split(p, lat, seed)
        if parts is None:
            raise UnresolvedSimplicity(f"lattice of {p} is not simple but no factor was found")
        pi, c = parts
        c2 = canonical_translate(c)
        pi = divide_right(p, c2)
        return rec(pi) + rec(c2)

    out = Factorization(unit, rec(g), gamma)
    if not out.verified:
        raise AssertionError("factorization does not multiply back")
    return out


def similar(gamma: FreePolynomial, lam: FreePolynomial, seed: int = 0) -> bool:
    _check_pair(gamma, lam)
    a = lattice_of(_prepared(gamma)).module
    b = lattice_of(_prepared(lam)).module
    return is_isomorphic(a, b, seed)


def endo_dim(gamma: FreePolynomial) -> int:
    M = lattice_of(_prepared(gamma)).module
    return intertwiner_space(M, M).dim
