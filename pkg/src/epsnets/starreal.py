"""Generalized real numbers: nets of reals identified when equal for small eps.

Three representations are supported:

* ``Symbolic`` - one exact ``AsymptoticExpr``; everything is decidable.
* ``Bracketed`` - an unspecified net known to lie between two symbolic
  nets for small eps, optionally integer-valued.  This is how elements of
  *N built by floor/ceiling constructions are represented.
* ``Piecewise`` - a lazily materialized net that follows ``expr_n`` on the
  stage ``(eta_{n+1}, eta_n]``.  Diagonal (quantifier-switching) witnesses
  and nontrivial idempotents live here.

Relations return a ``Verdict`` that records whether the answer is a proof,
bounded evidence, or unknown.
"""

from __future__ import annotations

import enum
import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from . import asymcore as ac
from ._text import call_form, split_top
from .asymcore import AsymptoticExpr, LimitKind, Sign, eventual_sign, limit_class

DEFAULT_STAGES = 20

SignFn = Callable[[AsymptoticExpr], Sign]


class NotApplicable(ValueError):
    """Precondition of a witness construction does not hold."""


class Undecided(ValueError):
    """An eventual sign needed to build a value could not be decided."""


class PiecewiseMismatch(ValueError):
    """Stagewise combination of piecewise nets with different schedules."""


# -- verdicts ----------------------------------------------------------------

class Status(enum.Enum):
    PROVED_TRUE = "ProvedTrue"
    PROVED_FALSE = "ProvedFalse"
    EVIDENCE = "Evidence"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    value: bool | None = None
    stages: int = 0
    provenance: str = "symbolic-proof"
    reason: str = ""

    @classmethod
    def proved(cls, value: bool, provenance: str = "symbolic-proof") -> "Verdict":
        return cls(Status.PROVED_TRUE if value else Status.PROVED_FALSE, bool(value), 0, provenance)

    @classmethod
    def evidence(cls, value: bool, stages: int) -> "Verdict":
        return cls(Status.EVIDENCE, bool(value), stages, f"evidence({stages})")

    @classmethod
    def unknown(cls, reason: str = "undecided", provenance: str = "bracket") -> "Verdict":
        return cls(Status.UNKNOWN, None, 0, provenance, reason)

    @property
    def is_proved(self) -> bool:
        return self.status in (Status.PROVED_TRUE, Status.PROVED_FALSE)

    @property
    def proved_true(self) -> bool:
        return self.status is Status.PROVED_TRUE

    @property
    def proved_false(self) -> bool:
        return self.status is Status.PROVED_FALSE

    def __invert__(self) -> "Verdict":
        if self.value is None:
            return self
        if self.status is Status.EVIDENCE:
            return Verdict.evidence(not self.value, self.stages)
        return Verdict.proved(not self.value, self.provenance)

    def __and__(self, other: "Verdict") -> "Verdict":
        return _combine(self, other, True)

    def __or__(self, other: "Verdict") -> "Verdict":
        return _combine(self, other, False)

    def __bool__(self) -> bool:
        raise TypeError("a Verdict is three-valued; test .proved_true / .value explicitly")

    def __str__(self) -> str:
        if self.status is Status.EVIDENCE:
            return f"Evidence({str(self.value).lower()}, {self.stages})"
        return self.status.value

    def to_json(self) -> dict:
        out = {"status": self.status.value, "provenance": self.provenance}
        if self.value is not None:
            out["value"] = self.value
        if self.status is Status.EVIDENCE:
            out["stages"] = self.stages
        if self.reason:
            out["reason"] = self.reason
        return out


def _merge_prov(a: Verdict, b: Verdict) -> str:
    return a.provenance if a.provenance == b.provenance else "bracket"


def _combine(a: Verdict, b: Verdict, conj: bool) -> Verdict:
    absorbing = Status.PROVED_FALSE if conj else Status.PROVED_TRUE
    for v in (a, b):
        if v.status is absorbing:
            return v
    if a.status is Status.UNKNOWN or b.status is Status.UNKNOWN:
        return Verdict.unknown(a.reason or b.reason)
    if a.is_proved and b.is_proved:
        return Verdict.proved(conj, _merge_prov(a, b))
    stages = min(v.stages for v in (a, b) if v.status is Status.EVIDENCE)
    value = (a.value and b.value) if conj else (a.value or b.value)
    return Verdict.evidence(value, stages)


def all_of(verdicts: Iterable[Verdict]) -> Verdict:
    out = Verdict.proved(True)
    for v in verdicts:
        out = out & v
        if out.proved_false:
            break
    return out


def any_of(verdicts: Iterable[Verdict]) -> Verdict:
    out = Verdict.proved(False)
    for v in verdicts:
        out = out | v
        if out.proved_true:
            break
    return out


class Order(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


@dataclass(frozen=True)
class Comparison:
    """Outcome of an eventual comparison.

    ``order`` is None when undecided, or when ``incomparable`` (the nets
    alternate, so none of <, =, > holds for small eps).
    """

    order: Order | None
    verdict: Verdict
    incomparable: bool = False

    def __str__(self) -> str:
        if self.incomparable:
            return f"Incomparable ({self.verdict})"
        if self.order is None:
            return str(self.verdict)
        return f"{self.order.value} ({self.verdict})"


@dataclass(frozen=True)
class SizeClass:
    infinitesimal: Verdict
    finite: Verdict
    infinitely_large: Verdict

    def to_json(self) -> dict:
        return {
            "infinitesimal": self.infinitesimal.to_json(),
            "finite": self.finite.to_json(),
            "infinitely_large": self.infinitely_large.to_json(),
        }


# -- values ------------------------------------------------------------------

class GenReal:
    """Base class for elements of *R."""

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return gabs(self)


@dataclass(frozen=True)
class Symbolic(GenReal):
    expr: AsymptoticExpr

    def __post_init__(self):
        object.__setattr__(self, "expr", AsymptoticExpr.coerce(self.expr))

    def __str__(self) -> str:
        return f"sym({self.expr})"

    __add__ = GenReal.__add__
    __mul__ = GenReal.__mul__


@dataclass(frozen=True)
class Bracketed(GenReal):
    lo: AsymptoticExpr
    hi: AsymptoticExpr
    integral: bool = False

    def __post_init__(self):
        lo, hi = AsymptoticExpr.coerce(self.lo), AsymptoticExpr.coerce(self.hi)
        if eventual_sign(hi - lo) is Sign.NEGATIVE:
            raise ValueError(f"empty bracket: {hi} < {lo} for small eps")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __str__(self) -> str:
        return f"bracket({self.lo}, {self.hi}{', int' if self.integral else ''})"


@dataclass(frozen=True)
class Stage:
    index: int
    eta: Fraction
    expr: AsymptoticExpr
    certificate: object = None


class Piecewise(GenReal):
    """Net equal to ``expr_n`` for eps in (eta_{n+1}, eta_n]; above eta_1 it follows expr_1.

    ``stage_fn(n)`` returns ``(eta_n, expr_n)`` or ``(eta_n, expr_n, certificate)``
    and is called lazily, in order, under a per-value lock.  ``cycle`` is a
    certificate that ``expr_n = cycle[(n - 1) % len(cycle)]`` for every n; with
    it, relations are decided exactly because every cycle value recurs for
    arbitrarily small eps.
    """

    _ids = itertools.count()

    def __init__(
        self,
        stage_fn: Callable[[int], tuple],
        *,
        cycle: Sequence[AsymptoticExpr] | None = None,
        schedule: Hashable | None = None,
        label: str = "piecewise",
    ):
        self._stage_fn = stage_fn
        self._stages: list[Stage] = []
        self._lock = threading.RLock()
        self.cycle = tuple(AsymptoticExpr.coerce(c) for c in cycle) if cycle is not None else None
        self.schedule = schedule if schedule is not None else ("anon", next(Piecewise._ids))
        self.label = label

    @classmethod
    def from_cycle(cls, values: Sequence, schedule: Hashable = ("dyadic",), label: str | None = None) -> "Piecewise":
        vals = tuple(AsymptoticExpr.coerce(v) for v in values)
        if not vals:
            raise ValueError("empty cycle")

        def stage(n: int):
            return Fraction(1, 2 ** (n - 1)), vals[(n - 1) % len(vals)]

        name = label or "cycle(" + ", ".join(str(v) for v in vals) + ")"
        return cls(stage, cycle=vals, schedule=schedule, label=name)

    def stage(self, n: int) -> Stage:
        if n < 1:
            raise IndexError("stages are numbered from 1")
        if n <= len(self._stages):
            return self._stages[n - 1]
        with self._lock:
            while len(self._stages) < n:
                i = len(self._stages) + 1
                out = self._stage_fn(i)
                eta, expr = Fraction(out[0]), AsymptoticExpr.coerce(out[1])
                cert = out[2] if len(out) > 2 else None
                if i == 1 and not 0 < eta <= 1:
                    raise ValueError("eta_1 must lie in (0, 1]")
                if self._stages and not 0 < eta < self._stages[-1].eta:
                    raise ValueError("thresholds must strictly decrease toward 0")
                self._stages.append(Stage(i, eta, expr, cert))
        return self._stages[n - 1]

    def stages(self, count: int) -> list[Stage]:
        self.stage(count)
        return list(self._stages[:count])

    @property
    def materialized(self) -> int:
        return len(self._stages)

    def interval(self, n: int) -> tuple[Fraction, Fraction]:
        """The stage interval (eta_{n+1}, eta_n] as (lower, upper)."""
        return self.stage(n + 1).eta, self.stage(n).eta

    def value_at(self, eps: Fraction) -> AsymptoticExpr:
        eps = Fraction(eps)
        if not 0 < eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        n = 1
        while self.stage(n + 1).eta >= eps:
            n += 1
        return self.stage(n).expr

    def map(self, fn: Callable[[AsymptoticExpr], AsymptoticExpr], label: str | None = None) -> "Piecewise":
        cyc = tuple(fn(v) for v in self.cycle) if self.cycle is not None else None

        def stage(n: int):
            s = self.stage(n)
            return s.eta, fn(s.expr)

        return Piecewise(stage, cycle=cyc, schedule=self.schedule, label=label or f"map({self.label})")

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Piecewise({self.label!r})"


def _coerce(x) -> GenReal:
    if isinstance(x, GenReal):
        return x
    if isinstance(x, (AsymptoticExpr, int, Fraction)) and not isinstance(x, bool):
        return Symbolic(AsymptoticExpr.coerce(x))
    if isinstance(x, str):
        return parse_genreal(x)
    raise TypeError(f"cannot interpret {x!r} as a generalized real")


genreal = _coerce


def sym(x) -> Symbolic:
    if isinstance(x, str):
        return Symbolic(ac.parse_expr(x))
    return Symbolic(AsymptoticExpr.coerce(x))


def bracket(lo, hi, integral: bool = False) -> GenReal:
    lo = ac.parse_expr(lo) if isinstance(lo, str) else AsymptoticExpr.coerce(lo)
    hi = ac.parse_expr(hi) if isinstance(hi, str) else AsymptoticExpr.coerce(hi)
    if lo == hi and not integral:
        return Symbolic(lo)
    return Bracketed(lo, hi, integral)


def idempotent(pattern: Sequence[int] = (0, 1)) -> Piecewise:
    """A 0/1-valued piecewise net; with both values present it is a nontrivial idempotent."""
    if any(p not in (0, 1) for p in pattern):
        raise ValueError("idempotent patterns take values in {0, 1}")
    return Piecewise.from_cycle(list(pattern))


def bounds(x: GenReal) -> tuple[AsymptoticExpr, AsymptoticExpr]:
    if isinstance(x, Symbolic):
        return x.expr, x.expr
    if isinstance(x, Bracketed):
        return x.lo, x.hi
    raise TypeError("bounds() needs a Symbolic or Bracketed value")


def is_exact(x: GenReal) -> bool:
    return isinstance(x, Symbolic) or (isinstance(x, Bracketed) and x.lo == x.hi)


def is_integral(x: GenReal) -> bool:
    if isinstance(x, Symbolic):
        return x.expr.is_constant and x.expr.constant_value.denominator == 1
    if isinstance(x, Bracketed):
        return x.integral
    return False


def _cmp(a: AsymptoticExpr, b: AsymptoticExpr, sign: SignFn) -> Sign:
    return sign(a - b)


def _emin(xs: Sequence[AsymptoticExpr], sign: SignFn) -> AsymptoticExpr:
    out = xs[0]
    for x in xs[1:]:
        if _cmp(x, out, sign) < 0:
            out = x
    return out


def _emax(xs: Sequence[AsymptoticExpr], sign: SignFn) -> AsymptoticExpr:
    out = xs[0]
    for x in xs[1:]:
        if _cmp(x, out, sign) > 0:
            out = x
    return out


def emax(xs: Sequence[AsymptoticExpr], sign: SignFn = eventual_sign) -> AsymptoticExpr:
    """Eventually-largest of symbolic nets (total order on the scale)."""
    return _emax(list(xs), sign)


def emin(xs: Sequence[AsymptoticExpr], sign: SignFn = eventual_sign) -> AsymptoticExpr:
    return _emin(list(xs), sign)


# -- arithmetic --------------------------------------------------------------

def _stagewise(a: GenReal, b: GenReal, fn: Callable[[GenReal, GenReal], GenReal]) -> Piecewise:
    if isinstance(a, Piecewise) and isinstance(b, Piecewise):
        if a.schedule != b.schedule:
            raise PiecewiseMismatch("piecewise nets on different stage schedules")
        if a.cycle is not None and b.cycle is not None:
            n = len(a.cycle) * len(b.cycle)
            cyc = tuple(_symbolic_expr(fn(Symbolic(a.cycle[i % len(a.cycle)]), Symbolic(b.cycle[i % len(b.cycle)]))) for i in range(n))
        else:
            cyc = None

        def stage(n: int):
            sa, sb = a.stage(n), b.stage(n)
            if sa.eta != sb.eta:
                raise PiecewiseMismatch("stage thresholds differ")
            return sa.eta, _symbolic_expr(fn(Symbolic(sa.expr), Symbolic(sb.expr)))

        return Piecewise(stage, cycle=cyc, schedule=a.schedule, label=f"({a.label} . {b.label})")
    if isinstance(a, Piecewise):
        return a.map(lambda e: _symbolic_expr(fn(Symbolic(e), b)), label=f"({a.label} . {b})")
    return b.map(lambda e: _symbolic_expr(fn(a, Symbolic(e))), label=f"({a} . {b.label})")


def _symbolic_expr(x: GenReal) -> AsymptoticExpr:
    if not isinstance(x, Symbolic):
        raise TypeError("stagewise operations on piecewise nets need symbolic partners")
    return x.expr


def add(a: GenReal, b: GenReal, sign: SignFn = eventual_sign) -> GenReal:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _stagewise(a, b, lambda x, y: add(x, y, sign))
    if isinstance(a, Symbolic) and isinstance(b, Symbolic):
        return Symbolic(a.expr + b.expr)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    return bracket(la + lb, ha + hb, is_integral(a) and is_integral(b))


def neg(a: GenReal, sign: SignFn = eventual_sign) -> GenReal:
    a = _coerce(a)
    if isinstance(a, Piecewise):
        return a.map(lambda e: -e, label=f"-{a.label}")
    if isinstance(a, Symbolic):
        return Symbolic(-a.expr)
    return bracket(-a.hi, -a.lo, a.integral)


def sub(a: GenReal, b: GenReal, sign: SignFn = eventual_sign) -> GenReal:
    return add(a, neg(b, sign), sign)


def mul(a: GenReal, b: GenReal, sign: SignFn = eventual_sign) -> GenReal:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _stagewise(a, b, lambda x, y: mul(x, y, sign))
    if isinstance(a, Symbolic) and isinstance(b, Symbolic):
        return Symbolic(a.expr * b.expr)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    prods = [la * lb, la * hb, ha * lb, ha * hb]
    return bracket(_emin(prods, sign), _emax(prods, sign), is_integral(a) and is_integral(b))


def gabs(a: GenReal, sign: SignFn = eventual_sign) -> GenReal:
    a = _coerce(a)
    if isinstance(a, Piecewise):
        return a.map(lambda e: -e if sign(e) < 0 else e, label=f"|{a.label}|")
    if isinstance(a, Symbolic):
        return Symbolic(-a.expr if sign(a.expr) < 0 else a.expr)
    lo, hi = a.lo, a.hi
    if sign(lo) >= 0:
        return a
    if sign(hi) <= 0:
        return bracket(-hi, -lo, a.integral)
    return bracket(ac.ZERO, _emax([-lo, hi], sign), a.integral)


def reciprocal(a: GenReal) -> GenReal:
    """1/a for symbolic nets that are eventually nonzero."""
    a = _coerce(a)
    if isinstance(a, Piecewise):
        if a.cycle is not None and all(eventual_sign(v) != Sign.ZERO for v in a.cycle):
            return a.map(lambda e: e.reciprocal(), label=f"1/{a.label}")
        raise NotApplicable("reciprocal of a piecewise net needs a nonzero cycle certificate")
    if not isinstance(a, Symbolic):
        raise NotApplicable("reciprocal is only provided for symbolic nets")
    if eventual_sign(a.expr) is Sign.ZERO:
        raise ac.DivisionByZeroNet("reciprocal of the zero net")
    return Symbolic(a.expr.reciprocal())


def abs_bounds(x: GenReal, sign: SignFn = eventual_sign) -> tuple[AsymptoticExpr, AsymptoticExpr]:
    """Symbolic (lower, upper) bounds for |x| (Symbolic/Bracketed)."""
    lo, hi = bounds(x)
    if sign(lo) >= 0:
        return lo, hi
    if sign(hi) <= 0:
        return -hi, -lo
    return ac.ZERO, _emax([-lo, hi], sign)


# -- relations ---------------------------------------------------------------

def _prov(*xs: GenReal) -> str:
    return "symbolic-proof" if all(isinstance(x, Symbolic) for x in xs) else "bracket"


def scenarios(values: Sequence[GenReal]) -> tuple[list[tuple[GenReal, ...]], bool] | None:
    """Joint symbolic instances of ``values`` over cycle-certified piecewise nets.

    Returns ``(instances, realized)``.  When ``realized`` is true every
    instance occurs on stages accumulating at 0, so a relation holds for
    small eps iff it holds in every instance.  Nets on different schedules
    give the full product with ``realized`` false.  None if some piecewise
    value has no cycle certificate.
    """
    values = list(values)
    groups: dict[Hashable, list[int]] = {}
    for i, v in enumerate(values):
        if isinstance(v, Piecewise):
            if v.cycle is None:
                return None
            groups.setdefault(v.schedule, []).append(i)
    if not groups:
        return [tuple(values)], True
    per_group = []
    for idx in groups.values():
        period = math.lcm(*(len(values[i].cycle) for i in idx))
        per_group.append([{i: Symbolic(values[i].cycle[t % len(values[i].cycle)]) for i in idx} for t in range(period)])
    out = []
    for combo in itertools.product(*per_group):
        merged = {k: v for part in combo for k, v in part.items()}
        out.append(tuple(merged.get(i, v) for i, v in enumerate(values)))
    return out, len(groups) == 1


def _pw_scenarios(a: GenReal, b: GenReal):
    return scenarios([a, b])


def _relation_over_scenarios(a, b, rel, stages: int) -> Verdict:
    sc = _pw_scenarios(a, b)
    if sc is not None:
        pairs, realized = sc
        results = [rel(x, y) for x, y in pairs]
        if all(r.proved_true for r in results):
            return Verdict.proved(True)
        if realized and any(r.proved_false for r in results):
            return Verdict.proved(False)
        if all(r.proved_false for r in results):
            return Verdict.proved(False)
        return Verdict.unknown("cycle")
    return _relation_by_stages(a, b, rel, stages)


def _relation_by_stages(a, b, rel, stages: int) -> Verdict:
    """Evidence: the relation on each materialized stage expression, restricted
    to the stage interval via certified sign thresholds."""
    pa = a if isinstance(a, Piecewise) else None
    pb = b if isinstance(b, Piecewise) else None
    ref = pa or pb
    if pa and pb and pa.schedule != pb.schedule:
        return Verdict.unknown("piecewise schedules differ")
    outcomes = []
    for n in range(1, stages + 1):
        lo, hi = ref.interval(n)
        xa = Symbolic(pa.stage(n).expr) if pa else a
        xb = Symbolic(pb.stage(n).expr) if pb else b
        outcomes.append(_stage_holds(xa, xb, rel, lo, hi))
    if any(o is None for o in outcomes):
        return Verdict.unknown("stage undecided")
    tail = outcomes[len(outcomes) // 2 :]
    return Verdict.evidence(all(tail), stages)


def _stage_holds(xa: GenReal, xb: GenReal, rel, lo: Fraction, hi: Fraction) -> bool | None:
    """Truth of rel on the whole stage interval [lo, hi] (None if undecided)."""

    def interval_sign(e: AsymptoticExpr) -> Sign:
        s = ac.sign_on_interval(e, lo, hi)
        if s is None:
            raise Undecided(str(e))
        return s

    try:
        v = rel(xa, xb, interval_sign)
    except Undecided:
        return None
    return v.value if v.is_proved else None


def leq(a, b, sign: SignFn = eventual_sign, stages: int = DEFAULT_STAGES) -> Verdict:
    """a <= b in *R, i.e. a_eps <= b_eps for small eps."""
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _relation_over_scenarios(a, b, lambda x, y, s=sign: leq(x, y, s), stages)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    if sign(lb - ha) >= 0:
        return Verdict.proved(True, _prov(a, b))
    if sign(la - hb) > 0:
        return Verdict.proved(False, _prov(a, b))
    return Verdict.unknown("bracket overlap")


def geq(a, b, sign: SignFn = eventual_sign, stages: int = DEFAULT_STAGES) -> Verdict:
    return leq(b, a, sign, stages)


def eventually_less(a, b, sign: SignFn = eventual_sign, stages: int = DEFAULT_STAGES) -> Verdict:
    """a_eps < b_eps for small eps."""
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _relation_over_scenarios(a, b, lambda x, y, s=sign: eventually_less(x, y, s), stages)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    if sign(lb - ha) > 0:
        return Verdict.proved(True, _prov(a, b))
    if sign(la - hb) >= 0:
        return Verdict.proved(False, _prov(a, b))
    return Verdict.unknown("bracket overlap")


def eq(a, b, sign: SignFn = eventual_sign, stages: int = DEFAULT_STAGES) -> Verdict:
    """a = b in *R (equal for small eps)."""
    a, b = _coerce(a), _coerce(b)
    if a is b:
        return Verdict.proved(True)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _relation_over_scenarios(a, b, lambda x, y, s=sign: eq(x, y, s), stages)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    if la == ha and lb == hb:
        return Verdict.proved(sign(la - lb) == Sign.ZERO, _prov(a, b))
    if sign(la - hb) > 0 or sign(lb - ha) > 0:
        return Verdict.proved(False, "bracket")
    return Verdict.unknown("bracket overlap")


def neq_star(a, b, sign: SignFn = eventual_sign, stages: int = DEFAULT_STAGES) -> Verdict:
    """The starred relation a (*!=) b: a_eps != b_eps for small eps."""
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _relation_over_scenarios(a, b, lambda x, y, s=sign: neq_star(x, y, s), stages)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    if la == ha and lb == hb:
        return Verdict.proved(sign(la - lb) != Sign.ZERO, _prov(a, b))
    if sign(la - hb) > 0 or sign(lb - ha) > 0:
        return Verdict.proved(True, "bracket")
    return Verdict.unknown("bracket overlap")


def eventual_compare(a, b, stages: int = DEFAULT_STAGES) -> Comparison:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Piecewise) or isinstance(b, Piecewise):
        return _pw_compare(a, b, stages)
    (la, ha), (lb, hb) = bounds(a), bounds(b)
    prov = _prov(a, b)
    if la == ha and lb == hb:
        s = eventual_sign(la - lb)
        return Comparison({Sign.NEGATIVE: Order.LT, Sign.ZERO: Order.EQ, Sign.POSITIVE: Order.GT}[s], Verdict.proved(True, prov))
    if eventual_sign(lb - ha) > 0:
        return Comparison(Order.LT, Verdict.proved(True, prov))
    if eventual_sign(la - hb) > 0:
        return Comparison(Order.GT, Verdict.proved(True, prov))
    return Comparison(None, Verdict.unknown("bracket overlap"))


def _pw_compare(a, b, stages: int) -> Comparison:
    sc = _pw_scenarios(a, b)
    if sc is not None:
        pairs, realized = sc
        orders = [eventual_compare(x, y, stages) for x, y in pairs]
        if any(o.order is None for o in orders):
            return Comparison(None, Verdict.unknown("cycle"))
        kinds = {o.order for o in orders}
        if len(kinds) == 1:
            return Comparison(kinds.pop(), Verdict.proved(True))
        if realized:
            return Comparison(None, Verdict.proved(True), incomparable=True)
        return Comparison(None, Verdict.unknown("cycle"))
    for order, rel in ((Order.LT, eventually_less), (Order.GT, lambda x, y, s=eventual_sign: eventually_less(y, x, s)), (Order.EQ, eq)):
        v = _relation_by_stages(a, b, rel, stages)
        if v.status is Status.EVIDENCE and v.value:
            return Comparison(order, v)
    return Comparison(None, Verdict.unknown("stages disagree"))


# -- size classification -----------------------------------------------------

def _limit_is(e: AsymptoticExpr, *kinds: LimitKind) -> bool:
    return limit_class(e).kind in kinds


def classify(a, stages: int = DEFAULT_STAGES) -> SizeClass:
    a = _coerce(a)
    if isinstance(a, Symbolic):
        kind = limit_class(a.expr).kind
        return SizeClass(
            Verdict.proved(kind is LimitKind.ZERO),
            Verdict.proved(kind is not LimitKind.INFINITE),
            Verdict.proved(kind is LimitKind.INFINITE),
        )
    if isinstance(a, Bracketed):
        alo, ahi = abs_bounds(a)
        if _limit_is(ahi, LimitKind.ZERO):
            infinitesimal = Verdict.proved(True, "bracket")
        elif not _limit_is(alo, LimitKind.ZERO):
            infinitesimal = Verdict.proved(False, "bracket")
        else:
            infinitesimal = Verdict.unknown("bracket")
        if not _limit_is(ahi, LimitKind.INFINITE):
            finite = Verdict.proved(True, "bracket")
        elif _limit_is(alo, LimitKind.INFINITE):
            finite = Verdict.proved(False, "bracket")
        else:
            finite = Verdict.unknown("bracket")
        return SizeClass(infinitesimal, finite, ~finite)
    if a.cycle is not None:
        parts = [classify(Symbolic(v)) for v in a.cycle]

        def every(attr):
            vs = [getattr(p, attr) for p in parts]
            if all(v.proved_true for v in vs):
                return Verdict.proved(True)
            return Verdict.proved(False)

        return SizeClass(every("infinitesimal"), every("finite"), every("infinitely_large"))
    return _classify_stages(a, stages)


def _classify_stages(a: Piecewise, stages: int) -> SizeClass:
    """Evidence from stages: property_n must hold on stages n..N (N = budget)."""

    def tail_property(test) -> bool | None:
        for n in range(1, stages + 1):
            for m in range(n, stages + 1):
                lo, hi = a.interval(m)
                ok = test(a.stage(m).expr, n, lo, hi)
                if ok is None:
                    return None
                if not ok:
                    return False
        return True

    def large(e, n, lo, hi):
        up = ac.sign_on_interval(e - n, lo, hi)
        down = ac.sign_on_interval(-e - n, lo, hi)
        if up is not None and up >= 0:
            return True
        if down is not None and down >= 0:
            return True
        return None if up is None or down is None else False

    def small(e, n, lo, hi):
        up = ac.sign_on_interval(Fraction(1, n) - e, lo, hi)
        down = ac.sign_on_interval(Fraction(1, n) + e, lo, hi)
        if up is None or down is None:
            return None
        return up >= 0 and down >= 0

    inf_large = tail_property(large)
    infinitesimal = tail_property(small)
    il = Verdict.evidence(inf_large, stages) if inf_large is not None else Verdict.unknown("stage undecided")
    im = Verdict.evidence(infinitesimal, stages) if infinitesimal is not None else Verdict.unknown("stage undecided")
    if infinitesimal:
        fin = Verdict.evidence(True, stages)
    elif inf_large:
        fin = Verdict.evidence(False, stages)
    else:
        fin = Verdict.unknown("stages")
    return SizeClass(im, fin, il)


def approx_eq(a, b, stages: int = DEFAULT_STAGES) -> Verdict:
    """a ~ b: the difference is infinitesimal."""
    return classify(sub(_coerce(a), _coerce(b)), stages).infinitesimal


# -- witnesses ---------------------------------------------------------------

def archimedean_witness(a) -> Bracketed:
    """n in *N with n >= |a|: the integer-valued net in [|a|, |a| + 1]."""
    a = _coerce(a)
    if isinstance(a, Piecewise):
        raise NotApplicable("archimedean_witness needs a Symbolic or Bracketed value")
    _, top = abs_bounds(a)
    return Bracketed(top, top + 1, True)


def lemma_finite_witness(a) -> Bracketed:
    """For unbounded a, an infinitely large m in *N with |a| > m."""
    a = _coerce(a)
    if isinstance(a, Piecewise):
        raise NotApplicable("lemma_finite_witness needs a Symbolic or Bracketed value")
    if not classify(a).finite.proved_false:
        raise NotApplicable(f"{a} is not certified unbounded")
    low, _ = abs_bounds(a)
    half = low * Fraction(1, 2)
    return Bracketed(half - 1, half, True)


# -- text syntax -------------------------------------------------------------

def parse_genreal(text: str) -> GenReal:
    """``sym(e)``, ``bracket(e1, e2[, int])``, ``cycle(e1, ...)`` or a bare expression."""
    form = call_form(text)
    if form is not None:
        name, inner = form
        if name == "sym":
            return sym(inner)
        if name == "bracket":
            args = split_top(inner)
            if len(args) not in (2, 3) or (len(args) == 3 and args[2] != "int"):
                raise SyntaxError(f"bracket(lo, hi[, int]) expected, got {text!r}")
            return bracket(ac.parse_expr(args[0]), ac.parse_expr(args[1]), len(args) == 3)
        if name == "cycle":
            return Piecewise.from_cycle([ac.parse_expr(x) for x in split_top(inner)])
    return sym(text)


def format_genreal(x: GenReal) -> str:
    return str(x)
