"""Acceptance criteria, one test per criterion.

Each test appends a ``PASS``/``FAIL`` line to RESULTS; the lines are printed
in the pytest terminal summary and by running this file as a script.
"""
import random
import time

import pytest

from conftest import F5, random_comonic, random_poly
from foxalg.expr import parse_expr
from foxalg.factor import divide_right, factorize, gcd, is_irreducible, lattice_of
from foxalg.fox import DerivativeIndex, StarContext, constant_witness, higher_derivative, partial_derivative, star_action
from foxalg.freepoly import FreePolynomial, strictly_maximal
from foxalg.leavitt import LeavittElement, canonical_form, embed, equals, multiply, star, x_gen, zeta
from foxalg.repmod import composition_series
from foxalg.repmod_io import run_oracle_factor_search
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
from foxalg.words import monomials, reduced_words

RESULTS = []
BUDGET = 120.0


def record(number, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}" + (f": {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def P(text, field=QQ, rank=2):
    return parse_expr(text, rank, field)


# 1 ----------------------------------------------------------------------------------


def _fox_axioms_hold(a, b):
    n, F = a.rank, a.field
    one = FreePolynomial.constant(1, n, F)
    forward = backward = FreePolynomial.constant(a.augmentation(), n, F)
    for i in range(1, n + 1):
        d, db = DerivativeIndex(i), DerivativeIndex(i, True)
        for dd in (d, db):
            lhs = partial_derivative(dd, a * b)
            rhs = partial_derivative(dd, b).scale(a.augmentation()) + partial_derivative(dd, a) * b
            if lhs != rhs:
                return False
        t, ti = FreePolynomial.gen(i, n, F), FreePolynomial.gen(i, n, F, -1)
        if partial_derivative(db, a) != -(t * partial_derivative(d, a)):
            return False
        forward = forward + (t - one) * partial_derivative(d, a)
        backward = backward + (ti - one) * partial_derivative(db, a)
    return forward == a and backward == a


def test_criterion_01_fox_axioms():
    rng = random.Random(101)
    t0 = time.time()
    bad = 0
    for field in (QQ, F5):
        for _ in range(200):
            a, b = random_poly(rng, field), random_poly(rng, field)
            bad += not _fox_axioms_hold(a, b)
    dt = time.time() - t0
    record(1, bad == 0 and dt < 5, f"400 pairs, {bad} violations, {dt:.1f}s")


# 2 ----------------------------------------------------------------------------------


def test_criterion_02_point_values():
    checks = [
        partial_derivative(DerivativeIndex(1), P("t1^-1")) == P("-t1^-1"),
        partial_derivative(DerivativeIndex(1, True), P("t1^-1")) == P("1"),
        P("t1 - 1") * P("t1^-1 - 1") == P("2 - t1 - t1^-1"),
        strictly_maximal(P("t1*t2*t3 + t2*t1 + t1*t3", rank=3))[0] == {((1, 1), (2, 1), (3, 1))},
        P("t1 - 4*t1^-1").augmentation() == -3,
    ]
    record(2, all(checks), f"{sum(checks)}/5 values")


# 3 ----------------------------------------------------------------------------------


def test_criterion_03_star_action_example():
    ctx = StarContext(P("t1^2 + t2^2 - 1"))
    v1, v2, v3 = P("1"), P("t1 - 1"), P("t2 - 1")
    zero = FreePolynomial.zero(2, QQ)
    # x_i^* is the operator of the derivative dual to t_i
    expected = [
        (1, v1, -v2 - v1.scale(2)),
        (2, v1, -v3 - v1.scale(2)),
        (1, v2, v1),
        (2, v3, v1),
        (2, v2, zero),
        (1, v3, zero),
    ]
    got = [star_action(ctx, j, v) == value for j, v, value in expected]
    record(3, all(got), f"{sum(got)}/6 relations")


# 4 ----------------------------------------------------------------------------------


def test_criterion_04_irreducibility_examples():
    linear = P("2 - t1")
    ok_linear = is_irreducible(linear) and lattice_of(linear).dim == 1
    g = P("t1 - 4*t1^-1")
    f = factorize(g)
    ok_reducible = (
        not is_irreducible(g)
        and f.length == 2
        and f.product() == g
        and all(is_irreducible(p) for p in f.factors)
    )
    record(4, ok_linear and ok_reducible, "2 - t1 irreducible; t1 - 4*t1^-1 has 2 factors")


# 5 ----------------------------------------------------------------------------------


def _divides(lam, d):
    try:
        return divide_right(lam, d) * d == lam
    except Exception:
        return False


def test_criterion_05_gcd_contract():
    rng = random.Random(505)
    t0 = time.time()
    bad = []
    for k in range(100):
        pi, a, b = (random_comonic(rng) for _ in range(3))
        u, v = a * pi, b * pi
        try:
            d = gcd(u, v)
            ok = (
                d.augmentation() == 1
                and _divides(u, d)
                and _divides(v, d)
                and _divides(d, pi)
                and gcd(u, v, seed=k + 1, shuffle=True) == d
            )
        except Exception:
            ok = False
        if not ok:
            bad.append(k)
    dt = time.time() - t0
    record(5, not bad and dt < BUDGET, f"100 triples, failures {bad}, {dt:.1f}s")


# 6 ----------------------------------------------------------------------------------


def _special_linear():
    out = []
    for w in reduced_words(2, 1):
        if w:
            for c in (2, 3, 4):
                out.append(FreePolynomial({(): c, w: 1 - c}, 2, F5))
    return out


def test_criterion_06_factorization_round_trip():
    rng = random.Random(606)
    pool = _special_linear()
    t0 = time.time()
    bad = []
    for k in range(50):
        m = rng.randint(2, 3)
        fs = [rng.choice(pool) for _ in range(m)]
        g = fs[0]
        for h in fs[1:]:
            g = g * h
        try:
            f = factorize(g)
            chain = composition_series(lattice_of(g).module)
            ok = f.length == m == len(chain) - 1 and f.product() == g
        except Exception:
            ok = False
        if not ok:
            bad.append(k)
    dt = time.time() - t0
    record(6, not bad and dt < BUDGET, f"50 products, failures {bad}, {dt:.1f}s")


# 7 ----------------------------------------------------------------------------------


def test_criterion_07_oracle_equivalence():
    rng = random.Random(707)
    words = list(reduced_words(2, 2))
    t0 = time.time()
    seen, bad = set(), []
    while len(seen) < 200:
        ws = rng.sample(words, rng.randint(1, 3))
        g = FreePolynomial({w: rng.randrange(1, 5) for w in ws}, 2, F5)
        if not g or g.augmentation() == 0:
            continue
        g = g.normalized()
        if g.is_unit() or g in seen:
            continue
        seen.add(g)
        try:
            agree = is_irreducible(g) == (not run_oracle_factor_search(g, 2))
        except Exception:
            agree = False
        if not agree:
            bad.append(str(g))
    dt = time.time() - t0
    record(7, not bad and dt < BUDGET, f"200 instances, disagreements {bad}, {dt:.1f}s")


# 8 ----------------------------------------------------------------------------------


def _random_leavitt(rng):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        w = tuple(rng.randint(1, 2) for _ in range(rng.randint(0, 2)))
        terms[w] = random_poly(rng, F5, 2, 2)
    return LeavittElement(terms, 2, F5)


def test_criterion_08_leavitt_suite():
    ok = True
    for n in (2, 3):
        one, zero = embed(P("1", rank=n)), LeavittElement.zero(n, QQ)
        total = zero
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                ok &= equals(multiply(star(i, n, QQ), x_gen(j, n, QQ)), one if i == j else zero)
                ok &= equals(multiply(zeta(i, n, QQ), zeta(j, n, QQ)), zeta(i, n, QQ) if i == j else zero)
            total = total + zeta(i, n, QQ)
        ok &= equals(total, one)
        ok &= equals(sum((multiply(x_gen(i, n, QQ), star(i, n, QQ)) for i in range(1, n + 1)), zero), one)
    rng = random.Random(808)
    for _ in range(100):
        a = _random_leavitt(rng)
        l = a.depth + rng.randint(0, 1)
        ok &= canonical_form(a - a, l).is_zero()
        c = canonical_form(a, l)
        for v in monomials(2, l):
            if len(v) == l:
                xv = embed(P("1", F5))
                for i in v:
                    xv = multiply(xv, x_gen(i, 2, F5))
                expected = c.terms.get(v, FreePolynomial.zero(2, F5))
                ok &= equals(multiply(c, xv), embed(expected))
    record(8, ok, "CK1, CK2, zeta relations at n = 2, 3; 100 canonical forms")


# 9 ----------------------------------------------------------------------------------


def _series(rng, K, zero_constant=False, density=0.3):
    terms = {}
    for m in monomials(2, K):
        if (m or not zero_constant) and rng.random() < density:
            terms[m] = F5(rng.randrange(5))
    return TruncatedSeries(terms, K, 2, F5)


def _composite(rng, depth, K):
    if depth == 0 or rng.random() < 0.3:
        p = random_poly(rng, F5, 1, 2)
        q = p - FreePolynomial.constant(p.augmentation(), 2, F5)
        if q and rng.random() < 0.5:
            return RationalRep.geometric(q), quasi_inverse(magnus_embed(q, K)) + TruncatedSeries.constant(1, K, 2, F5)
        return RationalRep.atom(p), magnus_embed(p, K)
    kind = rng.choice(["sum", "product", "qi"])
    a, va = _composite(rng, depth - 1, K)
    if kind == "qi":
        c = va.constant_term()
        if c != 0:
            a = rat_sum(a, RationalRep.atom(FreePolynomial.constant(-c, 2, F5)))
            va = va - TruncatedSeries.constant(c, K, 2, F5)
        return rat_quasi_inverse(a), quasi_inverse(va)
    b, vb = _composite(rng, depth - 1, K)
    if kind == "sum":
        return rat_sum(a, b), va + vb
    return rat_product(a, b), va * vb


def test_criterion_09_series_suite():
    rng = random.Random(909)
    K = 6
    ok = True
    for size in (2, 3):
        for _ in range(5):
            Pv = [_series(rng, K) for _ in range(size)]
            Q = [[_series(rng, K, True, 0.1) for _ in range(size)] for _ in range(size)]
            Z = solve_affine_system(Pv, Q)
            for r in range(size):
                acc = Pv[r]
                for c in range(size):
                    acc = acc + Q[r][c] * Z[c]
                ok &= acc == Z[r]
    n = 2
    Q = [[_series(rng, 4, True, 0.2) for _ in range(n)] for _ in range(n)]
    M = invert_one_plus(Q)
    one, zero = TruncatedSeries.constant(1, 4, 2, F5), TruncatedSeries({}, 4, 2, F5)
    A = [[(one if r == c else zero) + Q[r][c] for c in range(n)] for r in range(n)]
    for r in range(n):
        for c in range(n):
            target = one if r == c else zero
            ok &= sum((A[r][k] * M[k][c] for k in range(n)), zero) == target
            ok &= sum((M[r][k] * A[k][c] for k in range(n)), zero) == target
    for _ in range(25):
        rep, value = _composite(rng, 3, K)
        ok &= rat_eval(rep, K) == value
    for _ in range(50):
        a, b = random_poly(rng, F5), random_poly(rng, F5)
        ok &= magnus_embed(a * b, 5) == magnus_embed(a, 5) * magnus_embed(b, 5)
    record(9, ok, "solver residuals, 1+Q inverses, 25 rational composites, Magnus products")


# 10 ---------------------------------------------------------------------------------


def test_criterion_10_constant_witness():
    rng = random.Random(1010)
    misses = 0
    for _ in range(100):
        lam = random_poly(rng, F5, 3, 4)
        found = constant_witness(lam, 2 * lam.length())
        if found is None or len(found[0]) > 2 * lam.length() or found[1] == 0:
            misses += 1
        else:
            w, value = found
            misses += higher_derivative(w, lam) != FreePolynomial.constant(value, 2, F5)
    record(10, misses == 0, f"100 polynomials, {misses} without witness")


# 11 ---------------------------------------------------------------------------------

OUT_OF_SCOPE = {
    "module type (1, n) of the Fox algebra": "an infinite-dimensional statement with no finite check",
    "simplicity of the Leavitt localization of the power-series ring": "not decidable from truncations",
    "universal property of Cohn localization": "only finite truncation windows are exercised (criterion 9)",
}


@pytest.mark.skip(reason="out of scope: " + OUT_OF_SCOPE["module type (1, n) of the Fox algebra"])
def test_out_of_scope_module_type():
    raise AssertionError("not reproducible at desk scale")


@pytest.mark.skip(reason="out of scope: " + OUT_OF_SCOPE["simplicity of the Leavitt localization of the power-series ring"])
def test_out_of_scope_leavitt_simplicity():
    raise AssertionError("not reproducible at desk scale")


@pytest.mark.skip(reason="out of scope: " + OUT_OF_SCOPE["universal property of Cohn localization"])
def test_out_of_scope_cohn_universal_property():
    raise AssertionError("not reproducible at desk scale")


def test_criterion_11_exclusions_are_marked():
    marked = [
        f
        for f in (test_out_of_scope_module_type, test_out_of_scope_leavitt_simplicity, test_out_of_scope_cohn_universal_property)
        if any(m.name == "skip" for m in getattr(f, "pytestmark", []))
    ]
    record(11, len(marked) == len(OUT_OF_SCOPE), f"{len(marked)} exclusions carry skip markers")


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("PASS") for line in RESULTS) else 1)
