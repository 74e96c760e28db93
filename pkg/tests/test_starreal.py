import threading
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsnets import asymcore as ac
from epsnets import internalsets as iset
from epsnets import oracle
from epsnets import starreal as sr
from epsnets.starreal import Bracketed, Order, Piecewise, Status, Symbolic, Verdict

from conftest import exprs, moderate_exprs
from _oracle_helpers import grid_agrees

E = ac.parse_expr
rho = sr.sym("eps")


# -- verdicts ----------------------------------------------------------------

def test_verdict_is_three_valued():
    t, f, u = Verdict.proved(True), Verdict.proved(False), Verdict.unknown()
    assert (t & u).status is Status.UNKNOWN
    assert (f & u).proved_false
    assert (t | u).proved_true
    assert (~t).proved_false
    with pytest.raises(TypeError):
        bool(u)
    ev = Verdict.evidence(True, 20)
    assert ev.stages == 20 and ev.provenance == "evidence(20)"


# -- comparison and classification --------------------------------------------

def test_eventual_compare_examples():
    assert sr.eventual_compare(rho, sr.sym("eps^2")).order is Order.GT
    big = Bracketed(E("eps^-1 - 1"), E("eps^-1"), True)
    c = sr.eventual_compare(big, sr.sym("log"))
    assert c.order is Order.GT and c.verdict.proved_true
    assert oracle.diverges(E("eps^-1 - 1") - ac.LOG)
    c = sr.eventual_compare(sr.bracket(0, 1), sr.sym(Fraction(1, 2)))
    assert c.order is None and c.verdict.status is Status.UNKNOWN


def test_classify_examples():
    c = sr.classify(rho)
    assert c.infinitesimal.proved_true and c.finite.proved_true and c.infinitely_large.proved_false
    assert sr.classify(sr.sym("eps^-1")).infinitely_large.proved_true
    big = Bracketed(E("eps^-1 - 1"), E("eps^-1"), True)
    assert sr.classify(big).infinitely_large.proved_true
    assert oracle.diverges(E("eps^-1 - 1"))


def test_approx_eq_examples():
    assert sr.approx_eq(rho, sr.sym("2*eps")).proved_true
    assert sr.approx_eq(1, sr.sym("1 + eps*log")).proved_true
    assert oracle.vanishes(E("eps*log"))
    assert sr.approx_eq(1, 2).proved_false


def test_archimedean_witness_examples():
    n = sr.archimedean_witness(5)
    assert (n.lo, n.hi, n.integral) == (ac.const(5), ac.const(6), True)
    assert sr.geq(n, 5).proved_true
    n = sr.archimedean_witness(sr.sym("eps^(-3/2)"))
    assert n.lo == E("eps^(-3/2)") and n.hi == E("eps^(-3/2) + 1")
    n = sr.archimedean_witness(sr.sym("exp(eps^-1)"))
    assert sr.classify(n).infinitely_large.proved_true
    assert oracle.diverges(n.lo)


def test_lemma_finite_witness_examples():
    m = sr.lemma_finite_witness(sr.sym("eps^-1"))
    assert m.integral and sr.eventually_less(m, sr.sym("eps^-1")).proved_true
    assert oracle.diverges(E("eps^-1") - m.hi)
    m = sr.lemma_finite_witness(sr.sym("log"))
    assert m == Bracketed(E("1/2*log - 1"), E("1/2*log"), True)
    assert sr.classify(m).infinitely_large.proved_true
    with pytest.raises(sr.NotApplicable):
        sr.lemma_finite_witness(7)


def test_reciprocal_only_for_nonzero_sign():
    assert sr.reciprocal(rho) == sr.sym("eps^-1")
    with pytest.raises(ac.DivisionByZeroNet):
        sr.reciprocal(sr.sym(0))


def test_text_round_trip():
    for text in ("sym(eps^2 + 3)", "bracket(eps^-1 - 1, eps^-1, int)", "bracket(0, 1)"):
        x = sr.parse_genreal(text)
        assert sr.parse_genreal(sr.format_genreal(x)) == x


# -- piecewise nets ------------------------------------------------------------

def test_idempotent_cycle():
    e = sr.idempotent()
    assert sr.eq(sr.mul(e, e), e).proved_true
    assert sr.eq(e, 0).proved_false and sr.eq(e, 1).proved_false
    assert sr.eventual_compare(e, sr.sym(Fraction(1, 2))).incomparable


def test_piecewise_stages_are_thread_safe():
    calls = []

    def stage(n):
        calls.append(n)
        return Fraction(1, 2 ** (n - 1)), ac.const(n)

    x = Piecewise(stage)
    threads = [threading.Thread(target=lambda: [x.stage(n) for n in range(1, 30)]) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(calls) == list(range(1, 30))


def test_stage_intervals_shrink():
    x = Piecewise.from_cycle(["eps", "2*eps"])
    etas = [x.stage(n).eta for n in range(1, 8)]
    assert all(b < a for a, b in zip(etas, etas[1:]))


# -- properties ------------------------------------------------------------------

@given(exprs(2), exprs(2), exprs(2))
def test_order_compatible_with_ring(a, b, c):
    A, B, C = Symbolic(a), Symbolic(b), Symbolic(c)
    if sr.leq(A, B).proved_true:
        assert sr.leq(sr.add(A, C), sr.add(B, C)).proved_true
    if sr.geq(A, 0).proved_true and sr.geq(B, 0).proved_true:
        assert sr.geq(sr.mul(A, B), 0).proved_true
    assert sr.leq(A, B).proved_true or sr.leq(B, A).proved_true


@given(exprs(2))
def test_classify_coherent(a):
    c = sr.classify(Symbolic(a))
    if c.infinitesimal.proved_true:
        assert c.finite.proved_true
    if c.infinitely_large.proved_true:
        assert c.finite.proved_false
    assert sum(v.proved_true for v in (c.finite, c.infinitely_large)) == 1


@given(moderate_exprs(2), moderate_exprs(2), moderate_exprs(2))
def test_approx_eq_equivalence_on_finite_nets(a, b, c):
    A, B, C = (Symbolic(x) for x in (a, b, c))
    if not all(sr.classify(x).finite.proved_true for x in (A, B, C)):
        return
    assert sr.approx_eq(A, A).proved_true
    assert sr.approx_eq(A, B).value == sr.approx_eq(B, A).value
    if sr.approx_eq(A, B).proved_true and sr.approx_eq(B, C).proved_true:
        assert sr.approx_eq(A, C).proved_true


@given(exprs(2))
def test_archimedean_witness_is_natural_and_large(a):
    n = sr.archimedean_witness(Symbolic(a))
    assert n.integral
    assert sr.geq(n, sr.gabs(Symbolic(a))).proved_true
    assert iset.nat_member(n).proved_true


@given(exprs(2), exprs(2))
def test_compare_agrees_with_grid(a, b):
    c = sr.eventual_compare(Symbolic(a), Symbolic(b))
    assert c.verdict.proved_true
    sign = {Order.LT: -1, Order.EQ: 0, Order.GT: 1}[c.order]
    if sign:
        assert grid_agrees(a - b, sign)


@given(exprs(2), st.integers(1, 5))
def test_bracket_contains_refinement(a, w):
    b = Bracketed(a, a + ac.const(w))
    assert sr.leq(b, a + ac.const(w)).proved_true
    assert sr.geq(b, a).proved_true
