from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from epsnets import asymcore as ac
from epsnets.asymcore import AsymptoticExpr, Monomial

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coeffs = st.builds(Fraction, st.integers(-5, 5).filter(bool), st.integers(1, 3))
halves = st.integers(-6, 6).map(lambda n: Fraction(n, 2))


@st.composite
def monomials(draw, exp=True, log=True, rates=(1,)):
    u = draw(st.sampled_from([0, 0, 0, -1, 1, -2])) if exp else 0
    r = draw(st.sampled_from(rates)) if u else 1
    k = draw(st.integers(0, 2)) if log else 0
    return Monomial(u=u, r=r, q=draw(halves), k=k)


@st.composite
def exprs(draw, max_terms=3, exp=True, log=True):
    n = draw(st.integers(0, max_terms))
    return AsymptoticExpr([(draw(coeffs), draw(monomials(exp, log))) for _ in range(n)])


def moderate_exprs(max_terms=3):
    return exprs(max_terms, exp=False)


@st.composite
def negligible_exprs(draw):
    return AsymptoticExpr([(draw(coeffs), Monomial(u=-draw(st.integers(1, 3)), r=1, q=draw(halves)))])


nonzero_exprs = exprs().filter(lambda e: not e.is_zero)
RHO = ac.EPS


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)
