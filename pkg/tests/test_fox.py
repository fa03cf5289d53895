import random

import pytest
from hypothesis import given, settings

from conftest import F5, FIELDS, polys, random_poly
from foxalg.errors import IndexOutOfRange, NotComonic, RankExceeded, ZeroPolynomial
from foxalg.expr import parse_expr
from foxalg.fox import (
    DerivativeIndex,
    StarContext,
    comonic_generators,
    constant_witness,
    derivative_order,
    derivative_recursive,
    derivative_span,
    higher_derivative,
    partial_derivative,
    star_action,
)
from foxalg.freepoly import FreePolynomial
from foxalg.scalars import QQ

D1, Db1 = DerivativeIndex(1), DerivativeIndex(1, True)


def P(text, field=QQ, rank=2):
    return parse_expr(text, rank, field)


def test_partial_derivative_examples():
    assert partial_derivative(D1, P("t1^-1")) == P("-t1^-1")
    assert partial_derivative(Db1, P("t1^-1")) == P("1")
    assert partial_derivative(D1, P("5")).is_zero()
    with pytest.raises(RankExceeded):
        partial_derivative(DerivativeIndex(3), P("t1"))


def test_higher_derivative_examples():
    assert higher_derivative(((1, 1), (1, 1)), P("t1*t1")) == P("1")
    g = P("2 - t1*t2")
    assert higher_derivative((), g) == g
    assert higher_derivative(((2, 1),), P("t1")).is_zero()


def test_derivative_order_fixed():
    assert [str(d) for d in derivative_order(2)] == ["d1", "d2", "dbar1", "dbar2"]


def test_star_action_examples():
    ctx = StarContext(P("t1^2 + t2^2 - 1"))
    assert star_action(ctx, 1, P("1")) == P("-t1 - 1")
    g = P("1 + t1 - t1^-1")
    ctx = StarContext(g)
    assert star_action(ctx, 1, P("3 + 2*t1 - 4*t1^-1")) == P("1 + 3*t1^-1")
    for j in range(1, 5):
        assert star_action(ctx, j, g).is_zero()
    with pytest.raises(IndexOutOfRange):
        star_action(ctx, 5, g)
    with pytest.raises(NotComonic):
        StarContext(P("t1 - 1"))


def test_star_action_stays_in_short_words():
    rng = random.Random(5)
    for _ in range(30):
        g = random_poly(rng, F5, 2, 3)
        if g.augmentation() == 0:
            continue
        g = g.normalized()
        ctx = StarContext(g)
        N = max([g.length()] + [d.length() for d in ctx.derivs if d])
        lam = random_poly(rng, F5, N, 4)
        for j in range(1, 5):
            out = star_action(ctx, j, lam)
            assert not out or out.length() <= N


def test_derivative_span_examples():
    span = derivative_span(P("2 - t1"))
    assert span.dimension == 2
    assert {frozenset(b.terms) for b in span.basis} <= {frozenset({()}), frozenset({((1, 1),)}), frozenset({(), ((1, 1),)})}
    assert derivative_span(P("1")).dimension == 1
    g = P("t1 - 4*t1^-1").scale(QQ(-1) / 3)
    span = derivative_span(g)
    assert span.dimension == 3
    for w in ["1", "t1", "t1^-1"]:
        assert span.coordinates(P(w)) is not None
    with pytest.raises(ZeroPolynomial):
        derivative_span(FreePolynomial.zero(2, QQ))


def test_derivative_span_matrices_agree_with_derivatives():
    g = P("3 + t1*t2 - 2*t2^-1*t1")
    span = derivative_span(g)
    for k, d in enumerate(derivative_order(2)):
        for c, b in enumerate(span.basis):
            image = FreePolynomial.zero(2, QQ)
            for r, coeff in enumerate(span.matrices[k][r][c] for r in range(span.dimension)):
                image = image + span.basis[r].scale(coeff)
            assert image == partial_derivative(d, b)


def test_comonic_generators_examples():
    g = P("2 - t1")
    assert comonic_generators(g) == [P("2 - t1")]
    assert comonic_generators(P("t1 - 1")) == [P("1")]
    assert comonic_generators(P("(t1 - 1)*(2 - t1)")) == [P("2 - t1")]
    assert comonic_generators(P("4 - 2*t1")) == [P("2 - t1")]


def test_constant_witness_examples():
    w, value = constant_witness(P("2 - t1"))
    assert w == ((1, 1),) and value == -1
    assert constant_witness(P("3"))[0] == ()
    w, value = constant_witness(P("t1*t2 - t2*t1"))
    assert value != 0 and len(w) <= 4


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_positional_formula_matches_product_rule(field):
    rng = random.Random(2)
    for _ in range(100):
        g = random_poly(rng, field)
        for d in derivative_order(2):
            assert partial_derivative(d, g) == derivative_recursive(d, g)


def _fox_identities(a, b):
    n = a.rank
    for d in derivative_order(n):
        assert partial_derivative(d, a * b) == partial_derivative(d, b).scale(a.augmentation()) + partial_derivative(
            d, a
        ) * b
    one = FreePolynomial.constant(1, n, a.field)
    e = FreePolynomial.constant(a.augmentation(), n, a.field)
    forward, backward = e, e
    for i in range(1, n + 1):
        t, ti = FreePolynomial.gen(i, n, a.field), FreePolynomial.gen(i, n, a.field, -1)
        forward = forward + (t - one) * partial_derivative(DerivativeIndex(i), a)
        backward = backward + (ti - one) * partial_derivative(DerivativeIndex(i, True), a)
        bar = partial_derivative(DerivativeIndex(i, True), a) + t * partial_derivative(DerivativeIndex(i), a)
        assert bar.is_zero()
    assert forward == a and backward == a


@settings(max_examples=80)
@given(polys(QQ), polys(QQ))
def test_fox_identities_rationals(a, b):
    _fox_identities(a, b)


@settings(max_examples=80)
@given(polys(F5), polys(F5))
def test_fox_identities_gf5(a, b):
    _fox_identities(a, b)


def test_derivative_never_lengthens():
    rng = random.Random(9)
    for _ in range(100):
        g = random_poly(rng, F5)
        for d in derivative_order(2):
            h = partial_derivative(d, g)
            if h:
                assert h.length() <= g.length()
