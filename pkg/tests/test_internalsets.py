from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsnets import asymcore as ac
from epsnets import internalsets as iset
from epsnets import oracle
from epsnets import starreal as sr
from epsnets.internalsets import Constraint, FiniteListNet, IntervalNet, StarCatalog
from epsnets.starreal import Bracketed, Symbolic

from conftest import exprs, moderate_exprs

E = ac.parse_expr
rho = sr.sym("eps")


def test_member_examples():
    assert iset.member(rho, iset.star("UNIT")).proved_true
    assert iset.member(sr.sym("1 + eps"), IntervalNet(0, "1 + eps")).proved_true
    assert iset.member(rho, iset.star("RRnonzero")).proved_true
    assert iset.member(0, iset.star("RRnonzero")).proved_false


def test_nat_membership():
    assert iset.nat_member(0).proved_true
    assert iset.nat_member(sr.sym(Fraction(1, 2))).proved_false
    assert iset.nat_member(Bracketed(E("eps^-1 - 1"), E("eps^-1"), True)).proved_true
    assert iset.nat_member(rho).proved_false


def test_star_max_examples():
    assert iset.star_max(IntervalNet(0, "1 + eps")) == sr.sym("1 + eps")
    A = FiniteListNet((rho, sr.sym("eps*log"), sr.sym("eps^2")))
    assert iset.star_max(A) == sr.sym("eps*log")
    assert oracle.tail_sign(E("eps*log - eps")).sign == 1
    assert iset.star_max(FiniteListNet((sr.sym(3),))) == sr.sym(3)


def test_is_star_bounded_examples():
    r = iset.is_star_bounded(IntervalNet(0, "eps^-2"))
    assert r.proved_true and r.bound == sr.sym("eps^-2")
    assert iset.is_star_bounded(iset.star("RR")).verdict.proved_false
    r = iset.is_star_bounded(FiniteListNet((rho, sr.sym("eps^-1"))))
    assert r.proved_true and r.bound == sr.sym("eps^-1")
    assert iset.is_star_compact(IntervalNet(0, "eps^-2")).proved_true


def test_idp_filter_examples():
    out = iset.idp_filter(IntervalNet(-1, 1), "(>= x c)", {"c": rho})
    assert out == IntervalNet("eps", 1)
    A = FiniteListNet((rho, sr.sym(1), sr.sym("eps^-1")))
    assert iset.idp_filter(A, "(<= x 1)") == FiniteListNet((rho, sr.sym(1)))
    with pytest.raises(iset.EmptyResult):
        iset.idp_filter(IntervalNet(0, "eps"), "(>= x 1)")


def test_idp_filter_requires_certified_formula():
    with pytest.raises(iset.NotSupported):
        iset.idp_filter(FiniteListNet((rho,)), "(or (= x 0) (= x 1))")


def test_overspill_examples():
    for f in ("eps^-1", "log"):
        w = iset.overspill_witness(iset.at_most(f))
        assert w.element == Bracketed(E(f) - 1, E(f), True)
        assert w.membership.proved_true and w.size.infinitely_large.proved_true
        assert oracle.diverges(E(f) - 1)
    with pytest.raises(iset.HypothesisFails):
        iset.overspill_witness(iset.at_most(5))


def test_underspill_examples():
    # 3 + eps exceeds 3 for every eps > 0, so the least standard member is 4
    w = iset.underspill_witness(iset.at_least("3 + eps"))
    assert w.standard == 4 and w.membership.proved_true
    assert oracle.tail_sign(E("4 - (3 + eps)")).sign == 1
    assert oracle.tail_sign(E("3 - (3 + eps)")).sign == -1
    w = iset.underspill_witness(iset.at_least("eps*log"))
    assert w.standard == 1
    assert oracle.vanishes(E("eps*log"))
    with pytest.raises(iset.HypothesisFails):
        iset.underspill_witness(iset.at_least("eps^-1"))


def test_empty_sets_are_not_representable():
    with pytest.raises(iset.EmptyResult):
        IntervalNet(1, 0)
    with pytest.raises(iset.EmptyResult):
        iset.at_most("eps")


def _at_least_n(n):
    return Constraint(f"x >= {n}", lambda x, n=n: (x - n,)), Symbolic(ac.const(n + 1))


def test_qswitch_unbounded_constraints():
    x = iset.qswitch_diagonal(_at_least_n, stages=20)
    assert iset.qswitch_verify(x, _at_least_n, 20).value is True
    c = sr.classify(x, stages=20)
    assert c.infinitely_large.status is sr.Status.EVIDENCE and c.infinitely_large.value is True


def test_qswitch_single_stage():
    x = iset.qswitch_diagonal(_at_least_n, stages=1)
    st1 = x.stage(1)
    assert st1.expr == ac.const(2)
    assert st1.certificate.stage == 1


def test_qswitch_series_partial_sums():
    sums = [sum((ac.eps_pow(k) for k in range(1, n + 1)), ac.ZERO) for n in range(1, 30)]

    def fam(n):
        s = sums[n - 1]
        return Constraint(f"|x - S_{n}| <= eps^{n}", lambda x: (ac.eps_pow(n) - (x - s), ac.eps_pow(n) + (x - s))), Symbolic(sums[n])

    x = iset.qswitch_diagonal(fam, stages=12)
    assert iset.qswitch_verify(x, fam, 12).value is True


def test_qswitch_rejects_bad_witness():
    def fam(n):
        return Constraint("x <= 0", lambda x: (-x,)), Symbolic(ac.ONE)

    with pytest.raises(iset.ConstraintViolation):
        iset.qswitch_diagonal(fam, stages=2)


def test_externality_of_standard_naturals():
    ws = iset.externality_evidence()
    assert len(ws) == len(iset.default_candidates())
    for w in ws:
        assert w.reason in ("standard n not a member", "infinitely large member", "member outside *N")


def test_parse_set_forms():
    assert iset.parse_set("interval(0, eps)") == IntervalNet(0, "eps")
    assert iset.parse_set("star(closed(0, 2))") == StarCatalog("closed", 0, 2)
    assert iset.parse_set("nat>=(3 + eps)").shape == "AtLeast"
    with pytest.raises(SyntaxError):
        iset.parse_set("blob(1)")


# -- properties ------------------------------------------------------------------

nice = moderate_exprs(2)


@given(nice, nice, nice, nice, nice)
def test_monotone_membership(a, b, c, d, x):
    A = IntervalNet(*_ordered(a, b))
    B = IntervalNet(*_ordered(c, d))
    if iset.is_subset(A, B).proved_true and iset.member(Symbolic(x), A).proved_true:
        assert iset.member(Symbolic(x), B).proved_true


def _ordered(a, b):
    return (a, b) if ac.eventual_sign(b - a) >= 0 else (b, a)


CATALOG_PAIRS = [("RR", "UNIT"), ("RRpos", "RRnonzero"), ("UNIT", "UNIT"), (("closed", 0, 2), "UNIT"), (("closed", -1, 1), ("closed", 0, 3))]


def _cat(name):
    return iset.star(*name) if isinstance(name, tuple) else iset.star(name)


@given(st.sampled_from(CATALOG_PAIRS), nice)
def test_star_of_intersection(pair, x):
    A, B = (_cat(s) for s in pair)
    X = Symbolic(x)
    both = iset.member(X, A) & iset.member(X, B)
    assert iset.member(X, iset.intersect(A, B)).value == both.value


@given(st.lists(nice, min_size=1, max_size=5), st.sampled_from(["(<= x 1)", "(>= x 0)", "(= (* x x) x)"]))
def test_idp_filter_matches_brute_force(elems, P):
    from epsnets import evaluator as ev
    from epsnets import formlang as fl

    A = FiniteListNet(tuple(Symbolic(e) for e in elems))
    f = fl.parse(P, free=("x",))
    keep = tuple(e for e in A.elements if ev.eval_star(f, ev.Structure(), {"x": e}).proved_true)
    if not keep:
        with pytest.raises(iset.EmptyResult):
            iset.idp_filter(A, P)
        return
    assert iset.idp_filter(A, P).elements == keep


@given(exprs(2))
def test_spill_duality(f):
    if ac.limit_class(f).kind is not ac.LimitKind.INFINITE or ac.eventual_sign(f) < 0:
        return
    iset.overspill_witness(iset.at_most(f))
    with pytest.raises(iset.HypothesisFails):
        iset.underspill_witness(iset.at_least(f))
