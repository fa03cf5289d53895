import random

import pytest

from conftest import F5, random_poly
from foxalg.errors import DimensionMismatch, NonzeroConstantTerm
from foxalg.expr import parse_expr
from foxalg.freepoly import FreePolynomial
from foxalg.scalars import QQ
from foxalg.series import (
    RationalRep,
    TruncatedSeries,
    invert_one_plus,
    magnus_embed,
    quasi_inverse,
    rat_eval,
    rat_product,
    rat_quasi_inverse,
    rat_sum,
    solve_affine_system,
)
from foxalg.words import monomials


def S(terms, K, field=QQ, rank=2):
    return TruncatedSeries({tuple(m): field(c) for m, c in terms.items()}, K, rank, field)


def P(text, field=QQ):
    return parse_expr(text, 2, field)


def geometric(i, K, sign=1):
    return S({(i,) * k: sign**k for k in range(K + 1)}, K)


def random_series(rng, K, field=F5, zero_constant=False, density=0.4):
    terms = {}
    for m in monomials(2, K):
        if m == () and zero_constant:
            continue
        if rng.random() < density:
            terms[m] = rng.randrange(5) if field is F5 else rng.randint(-2, 2)
    return S(terms, K, field)


def test_magnus_examples():
    assert magnus_embed(P("t1^-1"), 3) == geometric(1, 3, -1)
    assert magnus_embed(P("t1 + t1^-1 - 2"), 3) == S({(1, 1): 1, (1, 1, 1): -1}, 3)
    assert magnus_embed(P("1"), 5) == S({(): 1}, 5)


def test_quasi_inverse_examples():
    assert quasi_inverse(S({(1,): 1}, 3)) == S({(1,): 1, (1, 1): 1, (1, 1, 1): 1}, 3)
    all_monomials = {m: 1 for m in monomials(2, 2) if m}
    assert quasi_inverse(S({(1,): 1, (2,): 1}, 2)) == S(all_monomials, 2)
    assert quasi_inverse(S({}, 3)).is_zero()
    with pytest.raises(NonzeroConstantTerm):
        quasi_inverse(S({(): 1}, 3))


def test_mixed_cutoffs_truncate_to_smaller():
    a, b = S({(1,): 1}, 2), S({(2, 2, 2): 1, (1,): 1}, 5)
    assert (a + b).cutoff == 2
    assert (a * b).cutoff == 2


def test_solve_examples():
    (z,) = solve_affine_system([S({(): 1}, 4)], [[S({(1,): 1}, 4)]])
    assert z == geometric(1, 4)
    zero = S({}, 3)
    Pv = [S({(): 1}, 3), zero]
    Q = [[zero, S({(1,): 1}, 3)], [S({(2,): 1}, 3), zero]]
    Z = solve_affine_system(Pv, Q)
    for r in range(2):
        assert Z[r] == Pv[r] + Q[r][0] * Z[0] + Q[r][1] * Z[1]
    with pytest.raises(NonzeroConstantTerm):
        solve_affine_system([S({(): 1}, 3)], [[S({(): 1}, 3)]])
    with pytest.raises(DimensionMismatch):
        solve_affine_system(Pv, [[zero]])


def test_invert_one_plus_examples():
    zero = S({}, 3)
    M = invert_one_plus([[zero, zero], [zero, zero]])
    assert M == [[S({(): 1}, 3), zero], [zero, S({(): 1}, 3)]]
    (m,) = invert_one_plus([[S({(1,): 1}, 2)]])[0:1]
    assert m == [S({(): 1, (1,): -1, (1, 1): 1}, 2)]


@pytest.mark.parametrize("size", [2, 3])
def test_solver_residual(size):
    rng = random.Random(size)
    K = 6
    for _ in range(5):
        Pv = [random_series(rng, K) for _ in range(size)]
        Q = [[random_series(rng, K, zero_constant=True, density=0.15) for _ in range(size)] for _ in range(size)]
        Z = solve_affine_system(Pv, Q)
        for r in range(size):
            acc = Pv[r]
            for c in range(size):
                acc = acc + Q[r][c] * Z[c]
            assert Z[r] == acc


def test_invert_one_plus_two_sided():
    rng = random.Random(4)
    K, n = 4, 2
    Q = [[random_series(rng, K, zero_constant=True, density=0.2) for _ in range(n)] for _ in range(n)]
    M = invert_one_plus(Q)
    one, zero = S({(): 1}, K, F5), S({}, K, F5)
    A = [[(one if r == c else zero) + Q[r][c] for c in range(n)] for r in range(n)]
    for r in range(n):
        for c in range(n):
            left = sum((A[r][k] * M[k][c] for k in range(n)), zero)
            right = sum((M[r][k] * A[k][c] for k in range(n)), zero)
            assert left == right == (one if r == c else zero)


def test_magnus_is_multiplicative():
    rng = random.Random(8)
    for _ in range(60):
        a, b = random_poly(rng, F5), random_poly(rng, F5)
        assert magnus_embed(a * b, 5) == magnus_embed(a, 5) * magnus_embed(b, 5)


def test_rational_examples():
    x1, x2 = P("t1 - 1"), P("t2 - 1")
    K = 4
    assert rat_eval(rat_sum(RationalRep.atom(x1), RationalRep.atom(x2)), K) == S({(1,): 1, (2,): 1}, K)
    assert rat_eval(rat_sum(RationalRep.atom(x1), RationalRep.atom(x1)), K) == S({(1,): 2}, K)
    assert rat_eval(rat_product(RationalRep.atom(x1), RationalRep.atom(x2)), K) == S({(1, 2): 1}, K)
    b = RationalRep.geometric(x2)
    assert rat_eval(rat_product(RationalRep.atom(P("1")), b), K) == rat_eval(b, K)
    assert rat_eval(RationalRep.geometric(x1), K) == geometric(1, K)
    assert rat_eval(rat_quasi_inverse(RationalRep.atom(x1)), K) == geometric(1, K) - S({(): 1}, K)
    all_monomials = {m: 1 for m in monomials(2, 2) if m}
    assert rat_eval(rat_quasi_inverse(RationalRep.atom(x1 + x2)), 2) == S(all_monomials, 2)
    composite = rat_product(rat_quasi_inverse(RationalRep.atom(x1)), RationalRep.atom(x2))
    assert rat_eval(composite, 4) == (geometric(1, 4) - S({(): 1}, 4)) * S({(2,): 1}, 4)
    with pytest.raises(NonzeroConstantTerm):
        rat_quasi_inverse(RationalRep.atom(P("2")))
    with pytest.raises(NonzeroConstantTerm):
        RationalRep([P("1")], [[P("t1")]])


def test_rational_sizes():
    a, b = RationalRep.atom(P("t1")), RationalRep.geometric(P("t2 - 1"))
    assert rat_sum(a, b).size == a.size + b.size + 1
    assert rat_product(a, b).size == a.size + b.size


def _build(rng, depth, K):
    """A random composite together with its value computed directly."""
    if depth == 0 or rng.random() < 0.3:
        p = random_poly(rng, F5, 1, 2)
        q = p - FreePolynomial.constant(p.augmentation(), 2, F5)
        if q and rng.random() < 0.5:
            inv = quasi_inverse(magnus_embed(q, K)) + S({(): 1}, K, F5)
            return RationalRep.geometric(q), inv
        return RationalRep.atom(p), magnus_embed(p, K)
    kind = rng.choice(["sum", "product", "qi"])
    a, va = _build(rng, depth - 1, K)
    if kind == "qi":
        if va.constant_term() != 0:
            shift = FreePolynomial.constant(-va.constant_term(), 2, F5)
            a = rat_sum(a, RationalRep.atom(shift))
            va = va - S({(): va.constant_term()}, K, F5)
        return rat_quasi_inverse(a), quasi_inverse(va)
    b, vb = _build(rng, depth - 1, K)
    if kind == "sum":
        return rat_sum(a, b), va + vb
    return rat_product(a, b), va * vb


def test_rational_constructions_match_direct_arithmetic():
    rng = random.Random(21)
    for _ in range(25):
        rep, value = _build(rng, 3, 6)
        assert rat_eval(rep, 6) == value


def test_rational_rep_json_round_trip():
    rep = rat_product(RationalRep.geometric(P("t1 - 1")), RationalRep.atom(P("2 + t2")))
    again = RationalRep.from_json(rep.to_json())
    assert again.to_json() == rep.to_json()
    s = rat_eval(rep, 3)
    assert TruncatedSeries.from_json(s.to_json()) == s
