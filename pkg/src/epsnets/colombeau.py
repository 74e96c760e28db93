"""The rho-topology on *R: moderate and negligible nets, the quotient R~,
valuation, the sharp ultrametric and internal sharp neighbourhoods.

Throughout, rho = eps.  The valuation of a net is

    v(a) = sup{ t : |a| <= rho^t for small eps },

+inf exactly on negligible nets and -inf exactly on non-moderate ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import asymcore as ac
from . import internalsets as iset
from . import starreal as sr
from .asymcore import AsymptoticExpr, Monomial, eventual_sign
from .internalsets import Constraint, IntervalNet
from .starreal import Bracketed, GenReal, Piecewise, Symbolic, Verdict


class NotSymbolic(TypeError):
    pass


class ClassViolation(ValueError):
    """Inputs are not in the declared moderate/negligible classes."""


class NotANeighbourhood(ValueError):
    pass


class ExponentsNotDivergent(ValueError):
    pass


# -- valuation ---------------------------------------------------------------

@dataclass(frozen=True, order=False)
class Valuation:
    """Rational, +inf (``kind = 1``) or -inf (``kind = -1``)."""

    kind: int
    value: Fraction | None = None

    @classmethod
    def of(cls, q) -> "Valuation":
        return cls(0, Fraction(q))

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    def _key(self):
        return (self.kind, self.value if self.kind == 0 else 0)

    def __lt__(self, other: "Valuation") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Valuation") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Valuation") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Valuation") -> bool:
        return self._key() >= other._key()

    def __add__(self, other: "Valuation") -> "Valuation":
        if self.kind and other.kind and self.kind != other.kind:
            raise ValueError("+inf + -inf is undefined")
        if self.kind or other.kind:
            return Valuation(self.kind or other.kind)
        return Valuation.of(self.value + other.value)

    def __str__(self) -> str:
        return {1: "+inf", -1: "-inf"}.get(self.kind) or str(self.value)

    def to_json(self):
        return str(self)


PLUS_INF = Valuation(1)
MINUS_INF = Valuation(-1)


def _expr(a) -> AsymptoticExpr:
    a = sr.genreal(a)
    if not isinstance(a, Symbolic):
        raise NotSymbolic("valuation is defined here for symbolic nets")
    return a.expr


def expr_valuation(e: AsymptoticExpr) -> Valuation:
    if e.is_zero:
        return PLUS_INF
    _, m = e.leading
    if m.u < 0:
        return PLUS_INF
    if m.u > 0:
        return MINUS_INF
    return Valuation.of(m.q)


def valuation(a) -> Valuation:
    return expr_valuation(_expr(a))


def _abs_bounds(a: GenReal) -> tuple[AsymptoticExpr, AsymptoticExpr]:
    return sr.abs_bounds(a)


def is_moderate(a) -> Verdict:
    a = sr.genreal(a)
    if isinstance(a, Symbolic):
        return Verdict.proved(expr_valuation(a.expr).kind != -1)
    if isinstance(a, Bracketed):
        lo, hi = _abs_bounds(a)
        if expr_valuation(hi).kind != -1:
            return Verdict.proved(True, "bracket")
        if expr_valuation(lo).kind == -1:
            return Verdict.proved(False, "bracket")
        return Verdict.unknown("bracket")
    if a.cycle is not None:
        return Verdict.proved(all(expr_valuation(v).kind != -1 for v in a.cycle))
    return Verdict.unknown("piecewise net without a cycle certificate")


def is_negligible(a) -> Verdict:
    a = sr.genreal(a)
    if isinstance(a, Symbolic):
        return Verdict.proved(expr_valuation(a.expr).kind == 1)
    if isinstance(a, Bracketed):
        lo, hi = _abs_bounds(a)
        if expr_valuation(hi).kind == 1:
            return Verdict.proved(True, "bracket")
        if expr_valuation(lo).kind != 1:
            return Verdict.proved(False, "bracket")
        return Verdict.unknown("bracket")
    if a.cycle is not None:
        return Verdict.proved(all(expr_valuation(v).kind == 1 for v in a.cycle))
    return Verdict.unknown("piecewise net without a cycle certificate")


def classification_report(a) -> dict:
    """JSON-ready {input, moderate, negligible, valuation, provenance}."""
    a = sr.genreal(a)
    mod, neg = is_moderate(a), is_negligible(a)
    try:
        v = str(valuation(a))
    except NotSymbolic:
        v = None
    return {
        "input": str(a),
        "moderate": mod.to_json(),
        "negligible": neg.to_json(),
        "valuation": v,
        "provenance": mod.provenance if mod.provenance == neg.provenance else "bracket",
    }


# -- R~ ----------------------------------------------------------------------

@dataclass(frozen=True)
class RTildeElem:
    representative: GenReal
    moderate: Verdict = Verdict.proved(True)

    @classmethod
    def of(cls, a) -> "RTildeElem":
        a = sr.genreal(a)
        m = is_moderate(a)
        if m.proved_false:
            raise ClassViolation(f"{a} is not moderate")
        return cls(a, m)

    def __str__(self) -> str:
        return f"[{self.representative}]~"


@dataclass(frozen=True)
class SharpDistance:
    """d = 2^-v; ``exponent`` is v (so +inf means distance 0)."""

    exponent: Valuation

    @property
    def is_zero(self) -> bool:
        return self.exponent.kind == 1

    def __float__(self) -> float:
        if self.exponent.kind == 1:
            return 0.0
        if self.exponent.kind == -1:
            return float("inf")
        return 2.0 ** float(-self.exponent.value)

    def __le__(self, other: "SharpDistance") -> bool:
        return self.exponent >= other.exponent

    def __lt__(self, other: "SharpDistance") -> bool:
        return self.exponent > other.exponent

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"2^-({self.exponent})"


def _rep(x) -> GenReal:
    return x.representative if isinstance(x, RTildeElem) else sr.genreal(x)


def sharp_dist(a, b) -> SharpDistance:
    return SharpDistance(valuation(sr.sub(_rep(a), _rep(b))))


def rtilde_eq(a, b) -> Verdict:
    """a ~= b in R~: the difference is negligible."""
    return is_negligible(sr.sub(_rep(a), _rep(b)))


def ball_member(x, m: int, center=0) -> Verdict:
    """|x - center| < rho^m for small eps."""
    d = sr.gabs(sr.sub(sr.genreal(x), sr.genreal(center)))
    return sr.eventually_less(d, Symbolic(ac.eps_pow(m)))


# -- product continuity ------------------------------------------------------

def product_continuity_check(a, b, d1, d2) -> Verdict:
    """(a + d1)(b + d2) ~= ab for moderate a, b and negligible d1, d2."""
    a, b, d1, d2 = (sr.genreal(x) for x in (a, b, d1, d2))
    for name, x in (("a", a), ("b", b)):
        if not is_moderate(x).proved_true:
            raise ClassViolation(f"{name} = {x} is not certified moderate")
    for name, x in (("delta1", d1), ("delta2", d2)):
        if not is_negligible(x).proved_true:
            raise ClassViolation(f"{name} = {x} is not certified negligible")
    return rtilde_eq(sr.mul(sr.add(a, d1), sr.add(b, d2)), sr.mul(a, b))


@dataclass(frozen=True)
class ContinuityFailure:
    a: GenReal
    delta: GenReal
    product: GenReal
    product_negligible: Verdict

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "delta": str(self.delta),
            "product": str(self.product),
            "product_negligible": self.product_negligible.to_json(),
        }


def nonmoderate_exhibit(a) -> ContinuityFailure:
    """For non-moderate a, a negligible delta with a*delta not negligible."""
    e = _expr(a)
    if expr_valuation(e).kind != -1:
        raise ClassViolation(f"{e} is moderate; multiplication by it preserves negligibility")
    _, m = e.leading
    delta = AsymptoticExpr([(1, Monomial(u=-m.u, r=m.r))])
    prod = e * delta
    return ContinuityFailure(Symbolic(e), Symbolic(delta), Symbolic(prod), is_negligible(Symbolic(prod)))


# -- sharp neighbourhoods ----------------------------------------------------

@dataclass(frozen=True)
class RTildeInternalSet:
    representative: IntervalNet


def _interval(A) -> IntervalNet:
    A = A.representative if isinstance(A, RTildeInternalSet) else A
    if isinstance(A, iset.StarCatalog) and A.as_interval() is not None:
        return A.as_interval()
    if not isinstance(A, IntervalNet):
        raise NotANeighbourhood(f"{A} is not an interval net")
    return A


def sharp_margin(A, B, m_max: int = 10_000) -> int:
    """Least M >= 1 such that rho^M is eventually below both margins of B
    around A; then every x with |x - a| < rho^M for some a in A lies in B."""
    A, B = _interval(A), _interval(B)
    for end in (A.lo, A.hi):
        if expr_valuation(end).kind == -1:
            raise NotANeighbourhood(f"A is not sharply bounded ({end} is not moderate)")
    margins = {"left": A.lo - B.lo, "right": B.hi - A.hi}
    for side, mg in margins.items():
        if eventual_sign(mg) < 0:
            raise NotANeighbourhood(f"B does not contain A on the {side}")
        if expr_valuation(mg).kind == 1:
            raise NotANeighbourhood(f"{side} margin {mg} is zero or negligible")
    M = 1
    while not all(eventual_sign(mg - ac.eps_pow(M)) > 0 for mg in margins.values()):
        M += 1
        if M > m_max:
            raise NotANeighbourhood("no margin exponent found")
    return M


def neighbourhood_samples(A, M: int, count: int = 100, seed: int = 0) -> list[tuple[GenReal, GenReal]]:
    """(a, x) pairs with a in A and |x - a| < rho^M, covering both endpoints."""
    A = _interval(A)
    rng = random.Random(seed)
    out = []
    width = A.hi - A.lo
    for i in range(count):
        theta = Fraction(rng.choice([0, 1])) if i % 4 == 0 else Fraction(rng.randint(0, 64), 64)
        a = A.lo + width * theta
        if i % 3 == 0 and theta == 0:
            a = a + ac.eps_pow(M + rng.randint(0, 3))
        tau = Fraction(rng.randint(-999, 999), 1000)
        x = a + ac.eps_pow(M) * tau
        out.append((Symbolic(a), Symbolic(x)))
    return out


def verify_neighbourhood(A, B, M: int, pairs) -> Verdict:
    """Each sampled pair: a in A, |x - a| < rho^M and x in B, all certified."""
    A, B = _interval(A), _interval(B)
    checks = []
    for a, x in pairs:
        checks.append(iset.member(a, A))
        checks.append(ball_member(x, M, center=a))
        checks.append(iset.member(x, B))
    return sr.all_of(checks)


# -- completeness demo -------------------------------------------------------

@dataclass(frozen=True)
class SeriesLimit:
    limit: RTildeElem
    partial_sums: tuple[AsymptoticExpr, ...]
    cauchy: Verdict
    tail: Verdict
    stages: int

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "partial_sums": [str(s) for s in self.partial_sums[:5]] + (["..."] if len(self.partial_sums) > 5 else []),
            "cauchy": self.cauchy.to_json(),
            "tail": self.tail.to_json(),
        }


def _check_exponents(exps: list[Fraction]) -> None:
    for i in range(len(exps) - 1):
        if exps[i + 1] <= exps[i]:
            raise ExponentsNotDivergent(f"exponents must increase strictly (e_{i + 2} = {exps[i + 1]} <= e_{i + 1} = {exps[i]})")
    steps = [b - a for a, b in zip(exps, exps[1:])]
    if len(steps) >= 4:
        half = len(steps) // 2
        first = sum(steps[:half]) / half
        second = sum(steps[half:]) / (len(steps) - half)
        if second < first / 2:
            raise ExponentsNotDivergent("exponent increments shrink: the sequence looks convergent")


def series_limit_demo(
    coeffs: Callable[[int], object],
    exponents: Callable[[int], object],
    stages: int = sr.DEFAULT_STAGES,
) -> SeriesLimit:
    """Limit in R~ of sum_k c_k rho^{e_k} via the diagonal construction.

    Constraint n reads |x - S_n| <= (|c_{n+1}| + 1) rho^{e_{n+1}}, which
    every later partial sum satisfies; the diagonal net then has
    v(u - S_n) >= e_{n+1} on the tail of every stage.
    """
    if stages < 1:
        raise ValueError("stages >= 1")
    c = [Fraction(coeffs(k)) for k in range(1, stages + 3)]
    e = [Fraction(exponents(k)) for k in range(1, stages + 3)]
    _check_exponents(e)
    sums: list[AsymptoticExpr] = []
    acc = ac.ZERO
    for ck, ek in zip(c, e):
        acc = acc + ac.eps_pow(ek, ck)
        sums.append(acc)

    def constraint(n: int) -> Constraint:
        bound = ac.eps_pow(e[n], abs(c[n]) + 1)
        s_n = sums[n - 1]
        return Constraint(f"|x - S_{n}| <= {bound}", lambda x: (bound - (x - s_n), bound + (x - s_n)))

    def family(n: int):
        if n > len(sums) - 1:
            raise IndexError("stage beyond the prepared partial sums")
        return constraint(n), Symbolic(sums[n - 1])

    u = iset.qswitch_diagonal(family, stages, label="series-limit")
    cauchy = sr.all_of(
        Verdict.proved(expr_valuation(sums[n] - sums[m]) >= Valuation.of(e[min(n, m) + 1]))
        for n in range(stages)
        for m in range(stages)
        if n != m
    )
    tail_sym = sr.all_of(
        Verdict.proved(expr_valuation(u.stage(m).expr - sums[n - 1]) >= Valuation.of(e[n]))
        for n in range(1, stages + 1)
        for m in range(n, stages + 1)
    )
    tail = tail_sym & iset.qswitch_verify(u, family, stages)
    return SeriesLimit(RTildeElem(u, Verdict.evidence(True, stages)), tuple(sums[:stages]), cauchy, tail, stages)
