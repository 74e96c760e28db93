from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsnets import asymcore as ac
from epsnets import oracle
from epsnets.asymcore import GrowthOrder, LimitKind, Monomial, Sign, parse_expr

from conftest import exprs, monomials
from _oracle_helpers import grid_agrees

E = parse_expr


def test_normalize_merges_and_cancels():
    assert E("eps + eps") == ac.eps_pow(1, 2)
    assert E("eps^(1/2) - eps^(1/2)").is_zero
    assert E("exp(eps^-1)*eps*exp(-1*eps^-1)") == ac.EPS
    assert ac.ZERO.terms == ()


def test_compare_growth_examples():
    inv, log5 = Monomial(q=-1), Monomial(k=5)
    assert ac.compare_growth(inv, log5) is GrowthOrder.DOMINATES
    assert oracle.diverges(lambda e: 1 / (e * mpmath.log(1 / e) ** 5))
    tiny, e100 = Monomial(u=-1), Monomial(q=100)
    assert ac.compare_growth(tiny, e100) is GrowthOrder.DOMINATED_BY
    assert oracle.vanishes(E("exp(-1*eps^-1)*eps^-100"))
    m = Monomial(q=1, k=1)
    assert ac.compare_growth(m, m) is GrowthOrder.SAME


def test_eventual_sign_examples():
    assert ac.eventual_sign(E("eps - eps^2")) is Sign.POSITIVE
    neg = E("2*eps^2 - eps")
    assert ac.eventual_sign(neg) is Sign.NEGATIVE
    assert oracle.tail_sign(neg).sign == -1
    assert ac.eventual_sign(ac.ZERO) is Sign.ZERO


def test_arith_examples():
    assert ac.arith("add", ac.EPS, ac.EPS) == E("2*eps")
    assert ac.arith("abs", E("2*eps^2 - eps")) == E("eps - 2*eps^2")
    assert ac.arith("mul", E("eps^(1/2)"), E("eps^(1/2)")) == ac.EPS


def test_limit_class_examples():
    assert ac.limit_class(E("7 + eps")) == ac.LimitClass(LimitKind.FINITE, Fraction(7))
    z = E("exp(-1*eps^-1)*eps^-9")
    assert ac.limit_class(z).kind is LimitKind.ZERO
    assert oracle.vanishes(z)
    assert ac.limit_class(ac.LOG).kind is LimitKind.INFINITE


def test_eval_at_examples():
    assert float(ac.eval_at(ac.EPS, Fraction(1, 8))) == 0.125
    enc = ac.eval_at(E("exp(-1*eps^-1)"), Fraction(1, 10))
    with mpmath.workdps(40):
        exact = mpmath.exp(-10)
        assert enc.lo <= exact <= enc.hi
    assert abs(float(enc) - 4.53999e-5) < 1e-10
    assert float(ac.eval_at(E("eps - eps^2"), Fraction(1, 2))) == 0.25


def test_parse_rejects_garbage():
    for bad in ("eps^", "exp(", "eps/2", ")"):
        with pytest.raises(SyntaxError):
            parse_expr(bad)


def test_monomial_canonical_fields():
    assert Monomial(u=0, r=5).r == 1
    with pytest.raises(ValueError):
        Monomial(r=0, u=1)
    with pytest.raises(ValueError):
        Monomial(k=-1)


def test_sign_threshold_is_certified_on_interval():
    e = E("eps - 100*eps^2")
    k = ac.sign_threshold(e)
    assert ac.sign_on_interval(e, Fraction(1, 2 ** (k + 8)), Fraction(1, 2**k)) is Sign.POSITIVE
    assert ac.sign_at(e, Fraction(1, 2)) is Sign.NEGATIVE


@given(exprs(), exprs())
def test_trichotomy(a, b):
    assert ac.eventual_sign(a - b) in (Sign.NEGATIVE, Sign.ZERO, Sign.POSITIVE)
    assert ac.eventual_sign(a - b) == -ac.eventual_sign(b - a)
    assert (ac.eventual_sign(a - b) is Sign.ZERO) == (a == b)


@given(exprs(), exprs(), exprs())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ac.ZERO


@given(exprs(max_terms=2, exp=False, log=False) | exprs(max_terms=2), exprs(max_terms=2))
def test_sign_matches_grid_tail(a, b):
    d = a - b
    s = ac.eventual_sign(d)
    if s is not Sign.ZERO:
        assert grid_agrees(d, s)


@given(exprs())
def test_normalize_idempotent(a):
    assert ac.AsymptoticExpr(a.terms) == a
    assert parse_expr(str(a)) == a


@given(*[monomials(rates=(1, 2, Fraction(1, 2)))] * 3)
def test_compare_growth_order(m1, m2, m3):
    o12, o21 = ac.compare_growth(m1, m2), ac.compare_growth(m2, m1)
    flip = {GrowthOrder.DOMINATES: GrowthOrder.DOMINATED_BY, GrowthOrder.DOMINATED_BY: GrowthOrder.DOMINATES, GrowthOrder.SAME: GrowthOrder.SAME}
    assert o21 is flip[o12]
    assert (o12 is GrowthOrder.SAME) == (m1 == m2)
    if o12 is GrowthOrder.DOMINATES and ac.compare_growth(m2, m3) is GrowthOrder.DOMINATES:
        assert ac.compare_growth(m1, m3) is GrowthOrder.DOMINATES


@given(exprs(max_terms=2, exp=False), st.integers(12, 40))
def test_eval_at_dyadic_encloses_plain_evaluation(a, k):
    enc = ac.eval_at_dyadic(a, k)
    with mpmath.workdps(50):
        v = oracle.expr_function(a)(mpmath.ldexp(1, -k))
        assert enc.lo - abs(v) * 1e-25 <= v <= enc.hi + abs(v) * 1e-25
