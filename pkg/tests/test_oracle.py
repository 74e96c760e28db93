from fractions import Fraction

import mpmath
from hypothesis import given

from epsnets import asymcore as ac
from epsnets import oracle

from _oracle_helpers import grid_agrees
from conftest import exprs

E = ac.parse_expr


def test_grid_shape():
    assert list(oracle.grid(3, 5)) == [3, 4, 5]
    vals = oracle.sample(E("eps"), 3, 5)
    assert [float(v) for v in vals] == [1 / 8, 1 / 16, 1 / 32]


def test_expr_function_matches_hand_evaluation():
    f = oracle.expr_function(E("2*eps^(1/2)*log - exp(-1*eps^-1)"))
    eps = mpmath.mpf(1) / 1024
    want = 2 * mpmath.sqrt(eps) * mpmath.log(1024) - mpmath.exp(-1024)
    assert abs(f(eps) - want) < mpmath.mpf(10) ** -40


def test_tail_sign_reports():
    assert oracle.tail_sign(E("eps - eps^2")).sign == 1
    rep = oracle.tail_sign(E("log - 40"))
    assert not rep.stabilized and rep.sign is None
    assert oracle.contradicts(-1, E("eps")) and not oracle.contradicts(1, E("eps"))
    # an unstabilized tail never counts as a contradiction
    assert not oracle.contradicts(1, E("log - 40"))


def test_vanishes_and_diverges():
    assert oracle.vanishes(E("eps^3")) and not oracle.vanishes(E("1 + eps"))
    assert oracle.diverges(E("eps^-1")) and not oracle.diverges(E("eps"))
    assert oracle.vanishes(lambda e: 1 / mpmath.log(1 / e) ** 2)


def test_all_signs():
    assert oracle.all_signs([mpmath.mpf(-1), mpmath.mpf(0), mpmath.mpf(2)]) == {-1, 0, 1}


@given(exprs(), exprs())
def test_eventual_sign_agrees_with_grid(a, b):
    e = a - b
    s = ac.eventual_sign(e)
    if e.is_zero:
        assert int(s) == 0
    else:
        assert grid_agrees(e, int(s))


def test_threshold_is_sound_on_grid():
    e = E("eps - 2*eps^2")
    k = ac.sign_threshold(e)
    for j in range(k, k + 20):
        assert ac.sign_at(e, Fraction(1, 2**j)) is ac.Sign.POSITIVE
