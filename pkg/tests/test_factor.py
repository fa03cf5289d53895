import random

import pytest

from conftest import F5, random_comonic
from foxalg.errors import IsUnit, NotComonic, NotDivisibleWithinBound, ZeroAugmentation, ZeroDivisor, ZeroPolynomial
from foxalg.expr import parse_expr
from foxalg.factor import (
    canonical_translate,
    composition_length,
    divide_left,
    divide_right,
    endo_dim,
    factorize,
    gcd,
    is_irreducible,
    lattice_of,
    same_up_to_translate,
    similar,
)
from foxalg.fox import StarContext, star_action
from foxalg.freepoly import FreePolynomial
from foxalg.linalg import mat_vec
from foxalg.scalars import QQ


def P(text, field=QQ):
    return parse_expr(text, 2, field)


def test_divide_right_examples():
    assert divide_right(P("(2 - t2)*(2 - t1)"), P("2 - t1")) == P("2 - t2")
    g = P("3 - t1*t2^-1")
    assert divide_right(g, P("1")) == g
    with pytest.raises(NotDivisibleWithinBound):
        divide_right(P("1"), P("2 - t1"), 6)
    with pytest.raises(ZeroDivisor):
        divide_right(g, FreePolynomial.zero(2, QQ))


def test_divide_right_with_zero_augmentation_divisor():
    d = P("t1 - t2")
    assert divide_right(P("(3 + t2^-1)*(t1 - t2)"), d) == P("3 + t2^-1")


def test_divide_left():
    a, b = P("2 - t1"), P("1 + t2*t1")
    assert divide_left(a * b, a) == b


def test_lattice_examples():
    assert lattice_of(P("2 - t1")).dim == 1
    assert lattice_of(P("t1 - 4*t1^-1").normalized()).dim == 2
    with pytest.raises(IsUnit):
        lattice_of(P("t1"))
    with pytest.raises(NotComonic):
        lattice_of(P("4 - t1"))


def test_lattice_operators_match_star_action():
    for text in ["(2 - t1)*(2 - t2)", "2 + t1*t2 - 2*t2^-1", "(2 - t2)*(1 + t1 - t2)"]:
        g = P(text, F5).normalized()
        lat = lattice_of(g)
        M, ctx = lat.module, StarContext(g)
        for j, op in enumerate(M.operators, start=1):
            for c, label in enumerate(M.labels):
                image = star_action(ctx, j, label)
                coords = mat_vec(op, M.unit(c), F5)
                combo = FreePolynomial.zero(2, F5)
                for x, lab in zip(coords, M.labels):
                    combo = combo + lab.scale(x)
                # equal modulo the left ideal generated by g
                assert lat.contains(image - combo)


def test_gcd_examples():
    g = P("3 - t1*t2", F5)
    assert gcd(g, g) == g.normalized()
    assert gcd(g, P("1", F5)) == P("1", F5)
    assert gcd(P("(2 - t2)*(2 - t1)", F5), P("2 - t1", F5)) == P("2 + 4*t1", F5)
    with pytest.raises(ZeroPolynomial):
        gcd(g, FreePolynomial.zero(2, F5))


def test_gcd_of_coprime_pair_is_one():
    assert gcd(P("2 - t1", F5), P("2 - t2", F5)) == P("1", F5)


def test_gcd_contract_small_sample():
    rng = random.Random(31)
    for k in range(15):
        pi, a, b = (random_comonic(rng) for _ in range(3))
        d = gcd(a * pi, b * pi)
        assert d.augmentation() == 1
        assert d.length() <= min((a * pi).length(), (b * pi).length())
        assert divide_right(a * pi, d) * d == a * pi
        assert divide_right(b * pi, d) * d == b * pi
        divide_right(d, pi)
        assert gcd(a * pi, b * pi, seed=k, shuffle=True) == d


def test_is_irreducible_examples():
    assert is_irreducible(P("2 - t1"))
    assert not is_irreducible(P("t1 - 4*t1^-1"))
    assert not is_irreducible(P("(2 - t1)*(2 - t2)", F5))
    with pytest.raises(ZeroAugmentation):
        is_irreducible(P("t1 - 1"))
    with pytest.raises(IsUnit):
        is_irreducible(P("3*t2"))


def test_factorize_examples():
    f = factorize(P("t1"))
    assert f.factors == [] and f.verified
    f = factorize(P("2 - t1"))
    assert f.factors == [P("2 - t1")]
    g = P("(2 - t1)*(2 - t2)", F5)
    f = factorize(g)
    assert f.length == 2 and f.verified and f.product() == g
    assert f.factors[1] == P("2 - t2", F5).normalized()
    assert similar(f.factors[0], P("2 - t1", F5))
    assert composition_length(g) == 2


def test_factorize_reference_example():
    g = P("t1 - 4*t1^-1")
    f = factorize(g)
    assert f.length == 2 and f.verified
    assert f.product() == g
    assert all(is_irreducible(p) and p.augmentation() == 1 for p in f.factors)


def test_factorization_json():
    f = factorize(P("(2 - t1)*(2 - t2)", F5))
    data = f.to_json()
    assert set(data) >= {"unit", "factors", "length", "verified"}
    assert data["length"] == 2 and data["verified"] is True


def test_factorize_rejects_zero_augmentation():
    with pytest.raises(ZeroAugmentation):
        factorize(P("t1 - t2"))


def test_similar_examples():
    g = P("2 + t1*t2", F5)
    assert similar(g, g)
    assert similar(g, g.scale(F5(3)))
    assert not similar(P("2 - t1"), P("2 - t2"))


def test_endo_dim_examples():
    assert endo_dim(P("2 - t1")) == 1
    assert endo_dim(P("(2 - t1)*(2 - t2)", F5)) >= 1
    assert 1 <= endo_dim(P("t1 - 4*t1^-1").normalized()) <= 4


def test_canonical_translate():
    g = P("2 + 4*t1", F5)
    h = g.left_translate(((2, 1), (1, -1)))
    assert same_up_to_translate(g, h)
    assert canonical_translate(h) == canonical_translate(g)
