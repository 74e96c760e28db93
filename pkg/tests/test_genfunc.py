from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epsnets import asymcore as ac
from epsnets import genfunc as gf
from epsnets import oracle
from epsnets import profiles as pf
from epsnets import starreal as sr
from epsnets.genfunc import GFAtom, GFElement

from conftest import moderate_exprs, negligible_exprs

E = ac.parse_expr
delta = gf.delta_model()
SIN = gf.parse_gf("atom(c=1, a=0, b=0, x0=0, profile=sin)")


def test_derivative_examples():
    d = gf.derivative(delta)
    (at,) = d.atoms
    assert (at.a, at.b, at.j) == (2, 1, 1) and at.profile.name == "bump"
    (s,) = gf.derivative(SIN).atoms
    assert (s.a, s.b, s.j) == (0, 0, 1)
    both = gf.derivative(delta + SIN)
    assert [a.j for a in both.atoms] == [1, 1]
    assert gf.derivative(gf.derivative(SIN)).atoms[0].j == 2


def test_derivative_budget():
    u = GFElement((GFAtom(1, 0, 1, 0, "gauss", j=3),))
    with pytest.raises(gf.DerivativeBudgetExceeded):
        gf.derivative(u, alpha_max=3)
    with pytest.raises(gf.DerivativeBudgetExceeded):
        gf.seminorm_growth(delta, 5, alpha_max=4)
    # periodic profiles cycle, so no budget is consumed
    assert gf.derivative(SIN, alpha_max=0).atoms[0].j == 1


def test_seminorm_delta_model():
    g = gf.seminorm_growth(delta, 2)
    s2 = pf.sup_bound("bump", 2)
    assert g.lo == ac.eps_pow(-3, s2.lower) and g.hi == ac.eps_pow(-3, s2.upper)
    # K_1 = {0} and bump'(0) = 0, so alpha = 0 carries p_1
    g1 = gf.seminorm_growth(delta, 1)
    lo, hi = pf.abs_value_bracket("bump", 0, Fraction(0))
    assert g1.lo == ac.eps_pow(-1, lo) and g1.hi == ac.eps_pow(-1, hi)
    assert float(lo) <= float(mpmath.exp(-1)) <= float(hi)
    # on a wider compact the derivative term dominates
    wide = gf.delta_model(gf.Domain(Fraction(-5), Fraction(5)))
    assert gf.seminorm_growth(wide, 2).hi.leading[1] == ac.eps_pow(-3).leading[1]


@pytest.mark.parametrize("m", [1, 2, 5])
def test_seminorm_sin(m):
    g = gf.seminorm_growth(SIN, m)
    assert g.lo == ac.ONE and g.hi == ac.ONE


def test_seminorm_exp_weighted_sin():
    u = gf.parse_gf("atom(c=exp(-1*eps^-1), a=0, b=1, x0=0, profile=sin)")
    g = gf.seminorm_growth(u, 2)
    assert g.lo == g.hi == E("exp(-1*eps^-1)*eps^-2")


def test_moderate_negligible_examples():
    assert gf.gf_is_moderate(delta).proved_true
    assert gf.gf_is_negligible(delta).proved_false
    u = gf.parse_gf("atom(c=exp(-1*eps^-1), a=0, b=5, x0=0, profile=sin)")
    assert gf.gf_is_negligible(u).proved_true
    for alpha in range(13):
        assert oracle.vanishes(E("exp(-1*eps^-1)") * ac.eps_pow(-5 * alpha))
    assert gf.gf_is_moderate(gf.parse_gf("atom(c=exp(eps^-1), profile=sin)")).proved_false


def test_cancellation_is_unknown_or_sound():
    # two atoms that cancel exactly merge to zero
    u = delta - delta
    assert gf.gf_is_negligible(u).proved_true
    v = gf.parse_gf("atom(c=1, a=1, b=1, x0=0, profile=bump) + atom(c=-1 + eps, a=1, b=1, x0=0, profile=bump)")
    assert gf.gf_is_negligible(v).proved_false


def test_ginf_uniform_examples():
    r = gf.ginf_uniform(delta, 2)
    assert r.proved_false and "unbounded" in r.reason
    r = gf.ginf_uniform(SIN, 3)
    assert r.proved_true and r.N == 0
    neg = gf.parse_gf("atom(c=exp(-1*eps^-1), a=3, b=2, x0=0, profile=bump)")
    assert gf.ginf_uniform(neg, 3).proved_true
    far = gf.parse_gf("atom(c=1, a=1, b=1, x0=7, profile=bump)")
    assert gf.ginf_uniform(far, 2).proved_true and gf.ginf_uniform(far, 8).proved_false


def test_ginf_pointwise_examples():
    assert gf.ginf_pointwise_at(delta, 1).proved_true
    assert gf.ginf_pointwise_at(delta, E("1/2*eps")).proved_false
    # rho itself sits on the support boundary, where every derivative vanishes
    assert gf.ginf_pointwise_at(delta, E("eps")).proved_true
    for x in ("-1", "1/2", "eps", "-1 + eps^3"):
        assert gf.ginf_pointwise_at(SIN, E(x)).proved_true
    with pytest.raises(gf.DomainViolation):
        gf.ginf_pointwise_at(delta, E("eps^-1"))
    with pytest.raises(gf.DomainViolation):
        gf.ginf_pointwise_at(gf.delta_model(gf.Domain(Fraction(-1), Fraction(1))), 1)


def test_ginf_pointwise_lower_bound_grows():
    # |d^alpha u(rho/2)| >= eps^(-1-alpha) |bump^(alpha)(1/2)|, nonzero for alpha > 0 here
    for alpha in range(1, 8):
        lo, _ = pf.abs_value_bracket("bump", alpha, Fraction(1, 2))
        assert lo > 0


def test_pointwise_uniform_examples():
    rep = gf.pointwise_uniform_check(delta, 2, [1, Fraction(1, 2), E("1/2*eps")])
    assert rep.uniform.proved_false and rep.coherent
    assert dict(rep.points)[str(sr.genreal(E("1/2*eps")))].proved_false
    rep = gf.pointwise_uniform_check(SIN, 2)
    assert rep.uniform.proved_true and all(r.proved_true for _, r in rep.points)
    neg = gf.parse_gf("atom(c=exp(-1*eps^-1), a=1, b=1, x0=0, profile=bump)")
    rep = gf.pointwise_uniform_check(neg, 2)
    assert rep.uniform.proved_true and rep.coherent
    assert gf.pointwise_uniform_check(delta, 3).coherent


def test_local_check_examples():
    rep = gf.ginf_local_check(delta, 0, 2)
    assert rep.local.proved_true and rep.global_.proved_false and rep.n is not None
    rep = gf.ginf_local_check(SIN, 0, 2)
    assert rep.local.proved_true and rep.global_.proved_true
    out = gf.parse_gf("atom(c=1, a=1, b=1, x0=9, profile=bump)")
    rep = gf.ginf_local_check(out, 9, 2)
    assert rep.local.proved_true


def test_parse_gf_round_trip():
    u = gf.parse_gf("atom(c=2*eps, a=1/2, b=-1, x0=1/3, profile=gauss, j=2) + domain(-1, inf)")
    (at,) = u.atoms
    assert (at.a, at.b, at.x0, at.j) == (Fraction(1, 2), -1, Fraction(1, 3), 2)
    assert u.domain == gf.Domain(Fraction(-1), None)
    assert gf.parse_gf(str(u)) == u
    with pytest.raises(SyntaxError):
        gf.parse_gf("atom(c=1, wobble=2)")
    with pytest.raises(gf.DomainViolation):
        gf.parse_gf("atom(x0=5) + domain(0, 1)")
    rep = gf.regularity_report(delta, 2)
    assert rep["ginf_uniform"]["verdict"]["status"] == "ProvedFalse"


# -- properties ---------------------------------------------------------------

@st.composite
def atoms(draw, coeff=None, b=None):
    c = draw(coeff if coeff is not None else st.sampled_from(["1", "-2", "1/3", "eps", "eps^-1", "3*eps^(1/2)"]))
    return GFAtom(
        ac.AsymptoticExpr.coerce(E(c)) if isinstance(c, str) else c,
        draw(st.integers(-2, 4).map(lambda n: Fraction(n, 2))),
        draw(b if b is not None else st.sampled_from([Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)])),
        draw(st.integers(-4, 4).map(lambda n: Fraction(n, 2))),
        draw(st.sampled_from(pf.PROFILES)),
        draw(st.integers(0, 2)),
    )


def elements(**kw):
    return st.lists(atoms(**kw), min_size=1, max_size=3).map(lambda xs: GFElement(tuple(xs)))


def _mp(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


def _numeric(u: GFElement, alpha: int, x, eps):
    tot = mpmath.mpf(0)
    for at in u.atoms:
        c = oracle.expr_function(at.c)(eps)
        t = (x - _mp(at.x0)) * eps ** (-at.b)
        k = at.j + alpha
        if at.profile.name == "sin":
            phi = [mpmath.sin, mpmath.cos, lambda y: -mpmath.sin(y), lambda y: -mpmath.cos(y)][k % 4](t)
        elif at.profile.name == "cos":
            phi = [mpmath.cos, lambda y: -mpmath.sin(y), lambda y: -mpmath.cos(y), mpmath.sin][k % 4](t)
        elif at.profile.name == "gauss":
            phi = sum(mpmath.mpf(a.numerator) / a.denominator * t**i for i, a in enumerate(pf.gauss_poly(k))) * mpmath.exp(-t * t)
        else:
            if abs(t) >= 1:
                phi = mpmath.mpf(0)
            else:
                s = 1 - t * t
                p = sum(mpmath.mpf(a.numerator) / a.denominator * t**i for i, a in enumerate(pf.bump_poly(k)))
                phi = p / s ** (2 * k) * mpmath.exp(-1 / s)
        tot += c * eps ** (-at.a - at.b * alpha) * phi
    return tot


@settings(max_examples=25)
@given(elements(), st.integers(1, 3), st.sampled_from([10, 14]))
def test_seminorm_upper_bracket_sound(u, m, k):
    mpmath.mp.dps = 40
    g = gf.seminorm_growth(u, m)
    eps = mpmath.mpf(2) ** -k
    upper = oracle.expr_function(g.hi)(eps)
    p, q = gf.SeminormSpec(m).K
    xs = [_mp(p + (q - p) * Fraction(i, 40)) for i in range(41)]
    for at in u.atoms:
        for s in (Fraction(-1, 2), Fraction(1, 5), Fraction(1, 2)):
            xs.append(_mp(at.x0) + _mp(s) * eps ** _mp(at.b) if at.b > 0 else _mp(at.x0))
    xs = [x for x in xs if _mp(p) <= x <= _mp(q)]
    for alpha in range(m + 1):
        for x in xs:
            assert abs(_numeric(u, alpha, _mp(x), eps)) <= upper * (1 + mpmath.mpf("1e-20"))


@settings(max_examples=25)
@given(atoms(b=st.just(Fraction(0))), st.integers(1, 3))
def test_seminorm_lower_bracket_sound_fixed_window(at, m):
    mpmath.mp.dps = 40
    u = GFElement((at,))
    g = gf.seminorm_growth(u, m)
    eps = mpmath.mpf(2) ** -20
    lower = oracle.expr_function(g.lo)(eps)
    p, q = gf.SeminormSpec(m).K
    xs = {p, q, (p + q) / 2} | ({at.x0} if p <= at.x0 <= q else set())
    tol = mpmath.mpf("1e-20")
    if at.profile.periodic:
        # peaks of sin and cos are irrational; a dense grid gets within 1e-3
        xs |= {p + (q - p) * Fraction(i, 2000) for i in range(2001)}
        tol = mpmath.mpf("1e-3")
    best = max(abs(_numeric(u, alpha, _mp(x), eps)) for alpha in range(m + 1) for x in xs)
    assert lower <= best * (1 + tol)


@given(elements(), st.integers(1, 3))
def test_seminorm_bracket_ordered(u, m):
    g = gf.seminorm_growth(u, m)
    assert ac.eventual_sign(g.hi - g.lo) >= 0
    assert ac.eventual_sign(g.lo) >= 0


@given(elements(), st.integers(1, 3))
def test_seminorm_monotone_in_m(u, m):
    a, b = gf.seminorm_growth(u, m), gf.seminorm_growth(u, m + 1)
    # p_m <= p_(m+1) eventually: the upper bracket of m+1 dominates the lower of m
    assert ac.eventual_sign(b.hi - a.lo) >= 0


@given(elements(), elements(coeff=negligible_exprs().filter(lambda e: not e.is_zero)), st.integers(1, 3))
def test_quotient_coherence(u, n, m):
    assert gf.gf_is_moderate(u + n).status == gf.gf_is_moderate(u).status
    assert gf.ginf_uniform(u + n, m).verdict.status == gf.ginf_uniform(u, m).verdict.status


@given(elements(), elements(coeff=negligible_exprs()))
def test_derivative_sharp_continuity(u, n):
    diff = gf.derivative(u + n) - gf.derivative(u)
    assert gf.gf_is_negligible(diff).proved_true
    assert gf.gf_is_negligible(gf.derivative(n)).proved_true


@given(elements(coeff=moderate_exprs()))
def test_moderate_iff_coefficients_moderate(u):
    assert gf.gf_is_moderate(u).proved_true
