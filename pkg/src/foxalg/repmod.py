"""Finite-dimensional modules over a free algebra given by operator matrices.

Matrices act on column vectors: ``op[r][c]`` is the coefficient of e_r in
the image of e_c.  Subspaces are :class:`~foxalg.linalg.Subspace` objects
holding row vectors.

Simplicity is decided by a MeatAxe-style search.  Cheap proper submodules
are looked for first (spins of basis vectors, common kernels, image sums,
exhaustive spins over small prime fields).  Otherwise random elements of the
generated algebra are drawn, and each irreducible factor f of a
characteristic polynomial is tried: a vector in ker f(a) that does not spin
to the whole module exhibits a submodule, and when dim ker f(a) = deg f the
dual spin settles simplicity (Holt-Rees).  Characteristic polynomials are
computed and factored with sympy.
"""
from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    BudgetExhausted,
    DimensionMismatch,
    FieldMismatch,
    ParseError,
    UnresolvedSimplicity,
    ZeroModule,
)
from .freepoly import FreePolynomial
from .linalg import Subspace, det, identity, mat_mul, mat_vec, nullspace, transpose, zeros
from .scalars import Field, PrimeField, field_from_spec, format_scalar

__all__ = [
    "OperatorModule",
    "spin",
    "submodule",
    "quotient",
    "preimage",
    "find_proper_submodule",
    "is_simple",
    "minimal_submodule",
    "composition_series",
    "composition_factors",
    "socle",
    "socle_series",
    "intertwiner_space",
    "is_isomorphic",
]

QUICK_ATTEMPTS = 6
EXHAUSTIVE_LIMIT = 3125
DEFAULT_ATTEMPTS = 60


class OperatorModule:
    """A vector space field^dim with a list of operator matrices."""

    __slots__ = ("dim", "operators", "field", "labels")

    def __init__(self, dim: int, operators: Sequence[Sequence[Sequence]], field: Field, labels=None):
        self.dim = dim
        self.field = field
        ops = []
        for op in operators:
            if len(op) != dim or any(len(row) != dim for row in op):
                raise DimensionMismatch(f"operator is not {dim}x{dim}")
            ops.append([[field(x) for x in row] for row in op])
        self.operators = ops
        if labels is not None and len(labels) != dim:
            raise DimensionMismatch("one label per basis vector required")
        self.labels = list(labels) if labels is not None else None

    @property
    def n_ops(self) -> int:
        return len(self.operators)

    def act(self, j: int, v: Sequence) -> list:
        return mat_vec(self.operators[j], v, self.field)

    def unit(self, k: int) -> list:
        v = [self.field.zero] * self.dim
        v[k] = self.field.one
        return v

    def conjugate(self, g) -> "OperatorModule":
        """The same module written in the basis given by the columns of g."""
        from .linalg import inverse

        gi = inverse(g, self.field)
        if gi is None:
            raise ValueError("change of basis is singular")
        ops = [mat_mul(mat_mul(gi, op, self.field), g, self.field) for op in self.operators]
        return OperatorModule(self.dim, ops, self.field)

    def __repr__(self):
        return f"OperatorModule(dim={self.dim}, ops={self.n_ops}, field={self.field})"

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "field": str(self.field),
            "operators": [[[format_scalar(x) for x in row] for row in op] for op in self.operators],
        }
        if self.labels is not None:
            out["labels"] = [lab.to_json() for lab in self.labels]
        return out

    @classmethod
    def from_json(cls, data) -> "OperatorModule":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            field = field_from_spec(data.get("field", "Q"))
            ops = [[[field.parse(str(x)) for x in row] for row in op] for op in data["operators"]]
            labels = data.get("labels")
            if labels is not None:
                labels = [FreePolynomial.from_json(lab) for lab in labels]
            return cls(int(data["dim"]), ops, field, labels)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed module JSON: {exc}") from exc


# subspaces, sub- and quotient modules -----------------------------------------


def spin(M: OperatorModule, seeds: Sequence[Sequence]) -> Subspace:
    """Smallest invariant subspace containing ``seeds``."""
    echelon: List[Tuple[int, list]] = []
    queue = []
    for v in seeds:
        if len(v) != M.dim:
            raise DimensionMismatch(f"seed of length {len(v)} in a module of dimension {M.dim}")
        queue.append(list(v))
    while queue and len(echelon) < M.dim:
        r = queue.pop()
        for pc, row in echelon:
            f = r[pc]
            if f:
                r = [x - f * y for x, y in zip(r, row)]
        pc = next((k for k, x in enumerate(r) if x), None)
        if pc is None:
            continue
        inv = 1 / r[pc]
        r = [x * inv for x in r]
        echelon.append((pc, r))
        for op in M.operators:
            queue.append(mat_vec(op, r, M.field))
    return Subspace(M.field, M.dim, [row for _, row in echelon])


def _spin_dual(M: OperatorModule, w: Sequence) -> Subspace:
    dual = OperatorModule(M.dim, [transpose(op) for op in M.operators], M.field)
    return spin(dual, [w])


def is_invariant(M: OperatorModule, S: Subspace) -> bool:
    return all(S.contains(mat_vec(op, r, M.field)) for op in M.operators for r in S.rows)


def submodule(M: OperatorModule, S: Subspace) -> OperatorModule:
    """The invariant subspace S as a module in the basis ``S.rows``."""
    ops = []
    for op in M.operators:
        cols = [S.coordinates(mat_vec(op, r, M.field)) for r in S.rows]
        if any(c is None for c in cols):
            raise ValueError("subspace is not invariant")
        ops.append([[cols[c][r] for c in range(S.dim)] for r in range(S.dim)])
    labels = None
    if M.labels is not None:
        labels = [_combine_labels(M, r) for r in S.rows]
    return OperatorModule(S.dim, ops, M.field, labels)


def _combine_labels(M: OperatorModule, v: Sequence) -> FreePolynomial:
    acc = None
    for c, lab in zip(v, M.labels):
        if c != 0:
            term = lab.scale(c)
            acc = term if acc is None else acc + term
    if acc is None:
        return M.labels[0] - M.labels[0]
    return acc


def _free_columns(S: Subspace) -> List[int]:
    piv = set(S.pivots)
    return [c for c in range(S.dim_ambient) if c not in piv]


def quotient(M: OperatorModule, S: Subspace) -> OperatorModule:
    """M/S in the basis of unit vectors off the pivot columns of S."""
    free = _free_columns(S)
    ops = []
    for op in M.operators:
        cols = []
        for c in free:
            img = S.reduce(mat_vec(op, M.unit(c), M.field))
            cols.append([img[k] for k in free])
        ops.append([[cols[c][r] for c in range(len(free))] for r in range(len(free))])
    labels = [M.labels[c] for c in free] if M.labels is not None else None
    return OperatorModule(len(free), ops, M.field, labels)


def project(M: OperatorModule, S: Subspace, v: Sequence) -> list:
    """Coordinates of the class of v in :func:`quotient` (M, S)."""
    r = S.reduce(v)
    return [r[c] for c in _free_columns(S)]


def lift(M: OperatorModule, S: Subspace, q: Sequence) -> list:
    v = [M.field.zero] * M.dim
    for c, x in zip(_free_columns(S), q):
        v[c] = x
    return v


def preimage(M: OperatorModule, S: Subspace, T: Subspace) -> Subspace:
    """Preimage in M of a subspace T of M/S."""
    return Subspace(M.field, M.dim, list(S.rows) + [lift(M, S, r) for r in T.rows])


def embed_subspace(M: OperatorModule, S: Subspace, T: Subspace) -> Subspace:
    """A subspace T of submodule(M, S), written in the coordinates of M."""
    rows = []
    for t in T.rows:
        v = [M.field.zero] * M.dim
        for c, b in zip(t, S.rows):
            if c != 0:
                v = [x + c * y for x, y in zip(v, b)]
        rows.append(v)
    return Subspace(M.field, M.dim, rows)


# simplicity ----------------------------------------------------------------------


def _projective_points(field: PrimeField, d: int):
    p = field.p
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            v = [field.zero] * lead + [field.one] + [field(x) for x in tail]
            yield v


def _random_scalar(field: Field, rng: random.Random):
    if isinstance(field, PrimeField):
        return field(rng.randrange(field.p))
    return field(rng.randint(-3, 3))


def _random_algebra_element(M: OperatorModule, rng: random.Random):
    F = M.field
    a = zeros(F, M.dim, M.dim)
    ops = M.operators
    words = [[op] for op in ops]
    for _ in range(min(4, len(ops) * len(ops))):
        words.append([rng.choice(ops), rng.choice(ops)])
    if rng.random() < 0.5:
        words.append([rng.choice(ops), rng.choice(ops), rng.choice(ops)])
    for w in words:
        c = _random_scalar(F, rng)
        if c == 0:
            continue
        m = w[0]
        for nxt in w[1:]:
            m = mat_mul(m, nxt, F)
        a = [[x + c * y for x, y in zip(ra, rm)] for ra, rm in zip(a, m)]
    return a


def _charpoly_factors(a, field: Field):
    """Irreducible monic factors of the characteristic polynomial of a."""
    import sympy
    from sympy.polys.matrices import DomainMatrix

    x = sympy.Symbol("x")
    n = len(a)
    if isinstance(field, PrimeField):
        K = sympy.GF(field.p)
        dm = DomainMatrix([[K(int(v)) for v in row] for row in a], (n, n), K)
        coeffs = [K.to_int(c) for c in dm.charpoly()]
        facs = sympy.Poly(coeffs, x, modulus=field.p).factor_list()[1]
        conv = lambda c: field(int(c))  # noqa: E731
    else:
        K = sympy.QQ
        dm = DomainMatrix([[K(v.numerator, v.denominator) for v in row] for row in a], (n, n), K)
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in dm.charpoly()]
        facs = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ").factor_list()[1]
        conv = lambda c: Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))  # noqa: E731
    out = []
    for f, _ in facs:
        cs = [conv(c) for c in f.all_coeffs()]
        lead = cs[0]
        out.append([c / lead for c in cs])
    out.sort(key=len)
    return out


def _poly_at(coeffs, a, field: Field):
    n = len(a)
    acc = zeros(field, n, n)
    ident = identity(field, n)
    for c in coeffs:
        acc = mat_mul(acc, a, field)
        acc = [[x + c * y for x, y in zip(ra, ri)] for ra, ri in zip(acc, ident)]
    return acc


def find_proper_submodule(
    M: OperatorModule, seed: int = 0, attempts: int = DEFAULT_ATTEMPTS
) -> Optional[Subspace]:
    """A proper nonzero submodule of M, or None when M is certified simple."""
    d, F = M.dim, M.field
    if d == 0:
        raise ZeroModule("the zero module has no simple submodules")
    if d == 1:
        return None
    best = None
    for k in range(d):
        s = spin(M, [M.unit(k)])
        if s.dim < d and (best is None or s.dim < best.dim):
            best = s
    if best is not None:
        return best
    # common kernel and sum of images are invariant
    stacked = [row for op in M.operators for row in op]
    ker = nullspace(stacked, d, F) if stacked else [M.unit(0)]
    if ker:
        return spin(M, [ker[0]])
    img = Subspace(F, d, [col for op in M.operators for col in transpose(op)])
    if img.dim < d:
        return img
    rng = random.Random(seed)
    exhaustive = isinstance(F, PrimeField) and F.p**d <= EXHAUSTIVE_LIMIT
    for k in range(attempts):
        if exhaustive and k == QUICK_ATTEMPTS:
            # points of the projective space: a complete check when small
            for v in _projective_points(F, d):
                s = spin(M, [v])
                if s.dim < d:
                    return s
            return None
        verdict = _holt_rees_round(M, _random_algebra_element(M, rng))
        if verdict is not _UNDECIDED:
            return verdict
    raise UnresolvedSimplicity(f"simplicity of a {d}-dimensional module left open after {attempts} attempts")


_UNDECIDED = object()


def _holt_rees_round(M: OperatorModule, a):
    """One random-element round: a submodule, None (simple) or undecided."""
    d, F = M.dim, M.field
    for f in _charpoly_factors(a, F):
        fa = _poly_at(f, a, F)
        kern = nullspace(fa, d, F)
        if not kern:
            continue
        for v in kern:
            s = spin(M, [v])
            if s.dim < d:
                return s
        if len(kern) == len(f) - 1:
            w = nullspace(transpose(fa), d, F)[0]
            dual = _spin_dual(M, w)
            if dual.dim < d:
                # annihilator of an invariant subspace of the dual
                return Subspace(F, d, nullspace(dual.rows, d, F))
            return None
    return _UNDECIDED


def is_simple(M: OperatorModule, seed: int = 0) -> bool:
    return M.dim > 0 and find_proper_submodule(M, seed) is None


def minimal_submodule(M: OperatorModule, seed: int = 0) -> Subspace:
    """A simple submodule of M."""
    if M.dim == 0:
        raise ZeroModule("the zero module has no simple submodules")
    S = Subspace.full(M.field, M.dim)
    while True:
        sub = submodule(M, S)
        proper = find_proper_submodule(sub, seed)
        if proper is None:
            return S
        S = embed_subspace(M, S, proper)


def composition_series(M: OperatorModule, seed: int = 0) -> List[Subspace]:
    """0 = S_0 ⊂ S_1 ⊂ ... ⊂ S_m = M with simple quotients."""
    chain = [Subspace(M.field, M.dim)]
    S = chain[0]
    while S.dim < M.dim:
        Q = quotient(M, S)
        T = minimal_submodule(Q, seed)
        S = preimage(M, S, T)
        chain.append(S)
    return chain


def composition_factors(M: OperatorModule, seed: int = 0) -> List[OperatorModule]:
    chain = composition_series(M, seed)
    out = []
    for lo, hi in zip(chain, chain[1:]):
        out.append(quotient(submodule(M, hi), _relative(M, hi, lo)))
    return out


def _relative(M: OperatorModule, hi: Subspace, lo: Subspace) -> Subspace:
    """lo ⊆ hi written in the basis ``hi.rows``."""
    return Subspace(M.field, hi.dim, [hi.coordinates(r) for r in lo.rows])


def socle(M: OperatorModule, seed: int = 0) -> Subspace:
    """Sum of all simple submodules, via images of homomorphisms from simples."""
    F = M.field
    if M.dim == 0:
        return Subspace(F, 0)
    found: List[OperatorModule] = []
    vectors = []
    for T in composition_factors(M, seed):
        if any(T.dim == U.dim and is_isomorphic(T, U, seed) for U in found):
            continue
        found.append(T)
        H = intertwiner_space(T, M)
        for h in H.rows:
            Z = [h[r * T.dim : (r + 1) * T.dim] for r in range(M.dim)]
            vectors.extend(transpose(Z))
    return Subspace(F, M.dim, vectors)


def socle_series(M: OperatorModule, seed: int = 0) -> List[Subspace]:
    chain = [Subspace(M.field, M.dim)]
    S = chain[0]
    while S.dim < M.dim:
        Q = quotient(M, S)
        S = preimage(M, S, socle(Q, seed))
        chain.append(S)
    return chain


# homomorphisms -------------------------------------------------------------------


def _check_pair(A: OperatorModule, B: OperatorModule):
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} != {B.field}")
    if A.n_ops != B.n_ops:
        raise DimensionMismatch(f"{A.n_ops} vs {B.n_ops} operators")


def intertwiner_space(A: OperatorModule, B: OperatorModule) -> Subspace:
    """All Z (dim B x dim A, flattened row-major) with Z A_j = B_j Z."""
    _check_pair(A, B)
    F = A.field
    dA, dB = A.dim, B.dim
    nvar = dA * dB
    rows = []
    for Aj, Bj in zip(A.operators, B.operators):
        for r in range(dB):
            for c in range(dA):
                eq = [F.zero] * nvar
                for k in range(dA):
                    if Aj[k][c] != 0:
                        eq[r * dA + k] += Aj[k][c]
                for k in range(dB):
                    if Bj[r][k] != 0:
                        eq[k * dA + c] -= Bj[r][k]
                if any(x != 0 for x in eq):
                    rows.append(eq)
    return Subspace(F, nvar, nullspace(rows, nvar, F) if rows else identity(F, nvar))


def _combo_det(basis, coeffs, d, F):
    flat = [F.zero] * (d * d)
    for c, h in zip(coeffs, basis):
        if c != 0:
            flat = [x + c * y for x, y in zip(flat, h)]
    return det([flat[r * d : (r + 1) * d] for r in range(d)], F)


def is_isomorphic(
    A: OperatorModule, B: OperatorModule, seed: int = 0, samples: int = 200, grid_limit: int = 20000
) -> bool:
    """Whether some intertwiner A -> B is invertible.

    Over GF(p) all combinations are tried when there are few of them,
    otherwise random ones.  Over Q a nonvanishing determinant is searched at
    random integer points and then on the grid {0..d}^r, which cannot miss a
    nonzero polynomial of degree d.
    """
    _check_pair(A, B)
    if A.dim != B.dim:
        return False
    d, F = A.dim, A.field
    if d == 0:
        return True
    H = intertwiner_space(A, B).rows
    r = len(H)
    if r == 0:
        return False
    rng = random.Random(seed)
    if isinstance(F, PrimeField):
        if F.p**r <= grid_limit:
            return any(
                _combo_det(H, [F(x) for x in pt], d, F) != 0 for pt in itertools.product(range(F.p), repeat=r)
            )
        for _ in range(samples):
            if _combo_det(H, [F(rng.randrange(F.p)) for _ in range(r)], d, F) != 0:
                return True
        raise BudgetExhausted(f"no invertible intertwiner among {samples} samples of a {r}-dimensional space")
    for _ in range(samples):
        if _combo_det(H, [F(rng.randint(-10, 10)) for _ in range(r)], d, F) != 0:
            return True
    if (d + 1) ** r <= grid_limit:
        return any(_combo_det(H, [F(x) for x in pt], d, F) != 0 for pt in itertools.product(range(d + 1), repeat=r))
    raise BudgetExhausted(f"determinant search on a {r}-dimensional intertwiner space left open")
