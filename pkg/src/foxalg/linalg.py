"""Exact dense and sparse linear algebra over a :class:`~foxalg.scalars.Field`.

Vectors are lists of field elements, matrices are lists of rows.  Nothing
here ever touches floating point.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch
from .scalars import Field, Mod, PrimeField

Vector = List
Matrix = List[List]


def zeros(field: Field, rows: int, cols: int) -> Matrix:
    z = field.zero
    return [[z] * cols for _ in range(rows)]


def identity(field: Field, n: int) -> Matrix:
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def mat_mul(a: Matrix, b: Matrix, field: Field) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    cols = len(b[0]) if b else 0
    z = field.zero
    out = []
    for row in a:
        acc = [z] * cols
        for k, x in enumerate(row):
            if not x:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    acc[j] = acc[j] + x * bk[j]
        out.append(acc)
    return out


def mat_vec(a: Matrix, v: Sequence, field: Field) -> Vector:
    z = field.zero
    out = []
    for row in a:
        acc = z
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def is_zero_vector(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def _rref_mod(rows: Sequence[Sequence], ncols: int, field: PrimeField) -> Tuple[Matrix, List[int]]:
    p = field.p
    m = [[int(x) for x in r] for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        pr = [x * inv % p for x in m[r]]
        m[r] = pr
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [[Mod(x, p) for x in row] for row in m[:r]], pivots


def rref(rows: Sequence[Sequence], ncols: int, field: Field) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if isinstance(field, PrimeField):
        return _rref_mod(rows, ncols, field)
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int, field: Field) -> int:
    return len(rref(rows, ncols, field)[1])


def nullspace(a: Matrix, ncols: int, field: Field) -> Matrix:
    """Basis of {x : a x = 0}, one vector per free column."""
    red, piv = rref(a, ncols, field)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence, ncols: int, field: Field) -> Optional[Vector]:
    """One solution of a x = b, or None when inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, ncols + 1, field)
    if piv and piv[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[ncols]
    return x


def inverse(a: Matrix, field: Field) -> Optional[Matrix]:
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(field, n))]
    red, piv = rref(aug, 2 * n, field)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in red[:n]]


def det(a: Matrix, field: Field):
    n = len(a)
    m = [list(r) for r in a]
    d = field.one
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return field.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d = d * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


class Subspace:
    """A subspace of field^dim held as a reduced echelon basis of row vectors."""

    __slots__ = ("field", "dim_ambient", "rows", "pivots")

    def __init__(self, field: Field, dim_ambient: int, vectors: Sequence[Sequence] = ()):
        self.field = field
        self.dim_ambient = dim_ambient
        for v in vectors:
            if len(v) != dim_ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {dim_ambient}")
        self.rows, self.pivots = rref(vectors, dim_ambient, field) if vectors else ([], [])

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, identity(field, n))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> Vector:
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc] != 0:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return is_zero_vector(self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Coefficients of v in terms of ``rows`` (None if v is outside)."""
        if not self.contains(v):
            return None
        return [v[pc] for pc in self.pivots]

    def span_with(self, vectors: Sequence[Sequence]) -> "Subspace":
        return Subspace(self.field, self.dim_ambient, list(self.rows) + list(vectors))

    def complement_basis(self) -> List[Vector]:
        """Unit vectors completing ``rows`` to a basis of the ambient space."""
        piv = set(self.pivots)
        out = []
        for c in range(self.dim_ambient):
            if c not in piv:
                v = [self.field.zero] * self.dim_ambient
                v[c] = self.field.one
                out.append(v)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.dim_ambient == other.dim_ambient
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.dim_ambient})"


def solve_sparse(
    equations: Sequence[Dict[Hashable, object]],
    rhs: Sequence,
    field: Field,
) -> Optional[Dict[Hashable, object]]:
    """Solve a sparse system given as rows ``{var: coeff}``.

    Returns one solution (free variables set to zero) or None if the system
    is inconsistent.  Rows are eliminated in order of increasing size to keep
    fill-in down.
    """
    rows = []
    for eq, b in zip(equations, rhs):
        row = {k: v for k, v in eq.items() if v != 0}
        if row or b != 0:
            rows.append((row, b))
    pivot_rows: Dict[Hashable, Tuple[Dict, object]] = {}
    order: List[Hashable] = []
    pending = sorted(rows, key=lambda r: len(r[0]))
    for row, b in pending:
        row = dict(row)
        # eliminate known pivots
        changed = True
        while changed:
            changed = False
            for k in list(row):
                if k in pivot_rows and k in row:
                    f = row[k]
                    prow, pb = pivot_rows[k]
                    for kk, vv in prow.items():
                        nv = row.get(kk, field.zero) - f * vv
                        if nv == 0:
                            row.pop(kk, None)
                        else:
                            row[kk] = nv
                    b = b - f * pb
                    changed = True
        if not row:
            if b != 0:
                return None
            continue
        k = min(row, key=lambda kk: (kk not in pivot_rows, 0))
        inv = 1 / row[k]
        row = {kk: vv * inv for kk, vv in row.items()}
        b = b * inv
        # back-substitute the new pivot into existing pivot rows
        for pk, (prow, pb) in list(pivot_rows.items()):
            if k in prow:
                f = prow[k]
                nrow = dict(prow)
                for kk, vv in row.items():
                    nv = nrow.get(kk, field.zero) - f * vv
                    if nv == 0:
                        nrow.pop(kk, None)
                    else:
                        nrow[kk] = nv
                pivot_rows[pk] = (nrow, pb - f * b)
        pivot_rows[k] = (row, b)
        order.append(k)
    # all pivot rows are fully reduced against each other; free vars = 0
    return {k: pb for k, (prow, pb) in pivot_rows.items()}
