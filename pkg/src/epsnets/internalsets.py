"""Representable internal sets and constructive witnesses.

An internal set is given by a net of sets; ``x`` is a member when
``x_eps`` lies in ``A_eps`` for small eps.  Four shapes are representable:

* ``FiniteListNet`` - ``{a1_eps, ..., ak_eps}`` with fixed k;
* ``IntervalNet``   - ``[lo_eps, hi_eps]``;
* ``NatThresholdNet`` - ``{n in N : g_eps <= n <= f_eps}`` (either side optional);
* ``StarCatalog``   - the star of a standard catalog set.

N includes 0 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import asymcore as ac
from . import starreal as sr
from ._text import call_form, split_top
from .asymcore import AsymptoticExpr, LimitKind, Sign, ThresholdFailure, eventual_sign, limit_class
from .starreal import (
    Bracketed,
    GenReal,
    Piecewise,
    SizeClass,
    Symbolic,
    Verdict,
    all_of,
    any_of,
)

CATALOG = ("RR", "RRpos", "RRnonzero", "NN", "UNIT", "closed")


class NotRepresentable(ValueError):
    """The requested set or value has no representable description."""


class EmptyResult(ValueError):
    """The set would be empty for small eps (the empty set is not internal)."""


class Undecided(ValueError):
    """Some element verdict needed for the construction is Unknown."""


class NotSupported(ValueError):
    """Formula or set shape outside the supported fragment."""


class HypothesisFails(ValueError):
    """Precondition of a spilling principle does not hold."""


class ConstraintViolation(ValueError):
    """A diagonal-family witness does not satisfy its constraints."""


# -- set kinds ---------------------------------------------------------------

class InternalSet:
    """Base class for representable internal sets."""


@dataclass(frozen=True)
class FiniteListNet(InternalSet):
    elements: tuple[GenReal, ...]

    def __post_init__(self):
        elems = tuple(sr.genreal(e) for e in self.elements)
        if not elems:
            raise EmptyResult("the empty set is not internal")
        object.__setattr__(self, "elements", elems)

    def __str__(self) -> str:
        return "finset(" + ", ".join(_short(e) for e in self.elements) + ")"


@dataclass(frozen=True)
class IntervalNet(InternalSet):
    lo: AsymptoticExpr
    hi: AsymptoticExpr

    def __post_init__(self):
        lo, hi = AsymptoticExpr.coerce(self.lo), AsymptoticExpr.coerce(self.hi)
        if eventual_sign(hi - lo) is Sign.NEGATIVE:
            raise EmptyResult(f"interval({lo}, {hi}) is empty for small eps")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __str__(self) -> str:
        return f"interval({self.lo}, {self.hi})"


@dataclass(frozen=True)
class NatThresholdNet(InternalSet):
    """``{n in N : lower <= n <= upper}``; ``upper`` None means no upper bound."""

    lower: AsymptoticExpr | None = None
    upper: AsymptoticExpr | None = None

    def __post_init__(self):
        lower = None if self.lower is None else AsymptoticExpr.coerce(self.lower)
        upper = None if self.upper is None else AsymptoticExpr.coerce(self.upper)
        if lower is None and upper is None:
            raise ValueError("use StarCatalog('NN') for the whole of *N")
        if upper is not None and eventual_sign(upper - 1) < 0:
            raise EmptyResult(f"nat<=({upper}) needs the bound >= 1 for small eps")
        if upper is not None and lower is not None and eventual_sign(upper - lower - 1) < 0:
            raise EmptyResult("threshold window narrower than 1")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def shape(self) -> str:
        if self.lower is None:
            return "AtMost"
        return "AtLeast" if self.upper is None else "Between"

    def __str__(self) -> str:
        if self.lower is None:
            return f"nat<=({self.upper})"
        if self.upper is None:
            return f"nat>=({self.lower})"
        return f"nat[]({self.lower}, {self.upper})"


def at_most(f) -> NatThresholdNet:
    return NatThresholdNet(upper=AsymptoticExpr.coerce(f))


def at_least(g) -> NatThresholdNet:
    return NatThresholdNet(lower=AsymptoticExpr.coerce(g))


@dataclass(frozen=True)
class StarCatalog(InternalSet):
    name: str
    a: Fraction | None = None
    b: Fraction | None = None

    def __post_init__(self):
        if self.name not in CATALOG:
            raise NotRepresentable(f"{self.name!r} is not a catalog set")
        if self.name == "closed":
            if self.a is None or self.b is None:
                raise ValueError("closed needs endpoints")
            a, b = Fraction(self.a), Fraction(self.b)
            if a > b:
                raise EmptyResult(f"[{a}, {b}] is empty")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
        elif self.a is not None or self.b is not None:
            raise ValueError(f"{self.name} takes no endpoints")

    def as_interval(self) -> IntervalNet | None:
        if self.name == "UNIT":
            return IntervalNet(ac.ZERO, ac.ONE)
        if self.name == "closed":
            return IntervalNet(ac.const(self.a), ac.const(self.b))
        return None

    def __str__(self) -> str:
        if self.name == "closed":
            return f"star(closed({self.a}, {self.b}))"
        return f"star({self.name})"


def star(name: str, a=None, b=None) -> StarCatalog:
    return StarCatalog(name, a, b)


def _short(x: GenReal) -> str:
    s = str(x)
    return s[4:-1] if s.startswith("sym(") else s


# -- membership --------------------------------------------------------------

def nat_member(x, sign=eventual_sign, stages: int = sr.DEFAULT_STAGES) -> Verdict:
    """x in *N, i.e. x_eps is a natural number for small eps."""
    x = sr.genreal(x)
    if isinstance(x, Symbolic):
        e = x.expr
        if e.is_constant:
            c = e.constant_value
            return Verdict.proved(c.denominator == 1 and c >= 0)
        # a non-constant expression is continuous and eventually != its limit
        return Verdict.proved(False)
    if isinstance(x, Bracketed):
        if sign(x.hi) < 0:
            return Verdict.proved(False, "bracket")
        if x.integral:
            if sign(x.lo + 1) > 0:
                return Verdict.proved(True, "bracket")
            return Verdict.unknown("integral bracket may reach negative values")
        if x.lo == x.hi:
            return nat_member(Symbolic(x.lo))
        return Verdict.unknown("bracket without integrality")
    sc = sr.scenarios([x])
    if sc is not None:
        return _over_scenarios([nat_member(v[0]) for v in sc[0]], sc[1])
    checked = [nat_member(Symbolic(x.stage(n).expr)) for n in range(1, stages + 1)]
    if any(not v.is_proved for v in checked):
        return Verdict.unknown("stage undecided")
    tail = checked[len(checked) // 2 :]
    return Verdict.evidence(all(v.value for v in tail), stages)


def _over_scenarios(results: Sequence[Verdict], realized: bool) -> Verdict:
    if all(r.proved_true for r in results):
        return Verdict.proved(True)
    if all(r.proved_false for r in results) or (realized and any(r.proved_false for r in results)):
        return Verdict.proved(False)
    return Verdict.unknown("scenario undecided")


def member(x, A: InternalSet, sign=eventual_sign, stages: int = sr.DEFAULT_STAGES) -> Verdict:
    x = sr.genreal(x)
    if isinstance(A, FiniteListNet):
        sc = sr.scenarios([x, *A.elements])
        if sc is None:
            return any_of(sr.eq(x, e, sign, stages) for e in A.elements)
        inst, realized = sc
        return _over_scenarios([any_of(sr.eq(v[0], e, sign) for e in v[1:]) for v in inst], realized)
    if isinstance(A, IntervalNet):
        return sr.leq(Symbolic(A.lo), x, sign, stages) & sr.leq(x, Symbolic(A.hi), sign, stages)
    if isinstance(A, NatThresholdNet):
        out = nat_member(x, sign, stages)
        if A.lower is not None:
            out = out & sr.leq(Symbolic(A.lower), x, sign, stages)
        if A.upper is not None:
            out = out & sr.leq(x, Symbolic(A.upper), sign, stages)
        return out
    if isinstance(A, StarCatalog):
        if A.name == "RR":
            return Verdict.proved(True)
        if A.name == "RRpos":
            return sr.eventually_less(sr.sym(0), x, sign, stages)
        if A.name == "RRnonzero":
            return sr.neq_star(x, sr.sym(0), sign, stages)
        if A.name == "NN":
            return nat_member(x, sign, stages)
        return member(x, A.as_interval(), sign, stages)
    raise TypeError(f"not an internal set: {A!r}")


def is_subset(A: InternalSet, B: InternalSet) -> Verdict:
    """Containment for interval-shaped sets, decided by endpoint comparisons."""
    A2, B2 = _as_interval(A), _as_interval(B)
    if A2 is None or B2 is None:
        if isinstance(A, FiniteListNet):
            return all_of(member(e, B) for e in A.elements)
        if isinstance(B, StarCatalog) and B.name == "RR":
            return Verdict.proved(True)
        raise NotSupported("containment is decided for interval-shaped sets and finite lists")
    return sr.leq(Symbolic(B2.lo), Symbolic(A2.lo)) & sr.leq(Symbolic(A2.hi), Symbolic(B2.hi))


def _as_interval(A: InternalSet) -> IntervalNet | None:
    if isinstance(A, IntervalNet):
        return A
    if isinstance(A, StarCatalog):
        return A.as_interval()
    return None


def intersect(A: StarCatalog, B: StarCatalog) -> InternalSet:
    """*(A n B) for catalog pairs whose intersection is again representable."""
    if A.name == "RR":
        return B
    if B.name == "RR":
        return A
    if A == B:
        return A
    pair = {A.name, B.name}
    if pair == {"RRpos", "RRnonzero"}:
        return StarCatalog("RRpos")
    ia, ib = A.as_interval(), B.as_interval()
    if ia is not None and ib is not None:
        lo = max(ia.lo.constant_value, ib.lo.constant_value)
        hi = min(ia.hi.constant_value, ib.hi.constant_value)
        if lo > hi:
            raise EmptyResult("disjoint catalog intervals")
        if (lo, hi) == (0, 1):
            return StarCatalog("UNIT")
        return StarCatalog("closed", lo, hi)
    raise NotRepresentable(f"{A} n {B} is not in the catalog")


# -- max and boundedness -----------------------------------------------------

def star_max(A: InternalSet) -> GenReal:
    if isinstance(A, IntervalNet):
        return Symbolic(A.hi)
    if isinstance(A, StarCatalog) and A.as_interval() is not None:
        return Symbolic(A.as_interval().hi)
    if not isinstance(A, FiniteListNet):
        raise NotRepresentable(f"no *max description for {A}")
    best = A.elements[0]
    for e in A.elements[1:]:
        c = sr.eventual_compare(e, best)
        if c.order is None or not c.verdict.proved_true:
            raise NotRepresentable(f"undecided comparison between {e} and {best}")
        if c.order is sr.Order.GT:
            best = e
    return best


@dataclass(frozen=True)
class BoundResult:
    verdict: Verdict
    bound: GenReal | None = None

    @property
    def proved_true(self) -> bool:
        return self.verdict.proved_true


def _abs_top(x: GenReal) -> AsymptoticExpr:
    if isinstance(x, Piecewise):
        if x.cycle is None:
            raise Undecided("no bound for a piecewise net without a cycle certificate")
        return sr.emax([abs(v) for v in x.cycle])
    return sr.abs_bounds(x)[1]


def is_star_bounded(A: InternalSet) -> BoundResult:
    """(exists R in *R)(forall x in A)(|x| <= R), with R on success."""
    if isinstance(A, IntervalNet):
        return BoundResult(Verdict.proved(True), Symbolic(sr.emax([abs(A.lo), abs(A.hi)])))
    if isinstance(A, FiniteListNet):
        try:
            tops = [_abs_top(e) for e in A.elements]
        except Undecided:
            return BoundResult(Verdict.unknown("piecewise element"))
        return BoundResult(Verdict.proved(True), Symbolic(sr.emax(tops)))
    if isinstance(A, NatThresholdNet):
        if A.upper is None:
            return BoundResult(Verdict.proved(False))
        return BoundResult(Verdict.proved(True), Symbolic(A.upper))
    iv = A.as_interval()
    if iv is None:
        return BoundResult(Verdict.proved(False))
    return is_star_bounded(iv)


def is_star_closed(A: InternalSet) -> Verdict:
    if _as_interval(A) is None:
        raise NotSupported("*-closedness is exposed for interval sets only")
    return Verdict.proved(True)


def is_star_compact(A: InternalSet) -> Verdict:
    return is_star_closed(A) & is_star_bounded(A).verdict


# -- internal definition principle -------------------------------------------

def idp_filter(A: InternalSet, P, params: Mapping[str, object] | None = None, var: str = "x") -> InternalSet:
    """{x in A : P(x, params)} as a representable set.

    ``P`` is a formula (or its S-expression text) whose only free variable is
    ``var``; remaining identifiers are looked up in ``params``.
    """
    from . import evaluator, formlang

    if isinstance(P, str):
        P = formlang.parse(P, free=(var,))
    if formlang.certify(P).status is formlang.CertStatus.NOT_CERTIFIED:
        raise NotSupported("the defining formula must be certified transferable")
    structure = evaluator.Structure(dict(params or {}))
    if isinstance(A, FiniteListNet):
        kept = []
        for e in A.elements:
            v = evaluator.eval_star(P, structure, env={var: e})
            if v.proved_true:
                kept.append(e)
            elif not v.proved_false:
                raise Undecided(f"P({_short(e)}) is {v}")
        if not kept:
            raise EmptyResult("no element of the list satisfies the formula")
        return FiniteListNet(tuple(kept))
    iv = _as_interval(A)
    if iv is None:
        raise NotSupported(f"idp_filter supports finite lists and intervals, not {A}")
    lo, hi = iv.lo, iv.hi
    for atom in _conjuncts(P):
        lo, hi = _clip(atom, var, lo, hi, structure)
    if eventual_sign(hi - lo) < 0:
        raise EmptyResult(f"[{lo}, {hi}] is empty for small eps")
    return IntervalNet(lo, hi)


def _conjuncts(P):
    from . import formlang as fl

    if isinstance(P, fl.And):
        return _conjuncts(P.left) + _conjuncts(P.right)
    if isinstance(P, fl.Atom):
        return [P]
    raise NotSupported("on intervals only conjunctions of comparisons and catalog memberships are supported")


def _clip(atom, var, lo, hi, structure):
    from . import evaluator
    from . import formlang as fl

    def is_var(t):
        return isinstance(t, fl.Var) and t.name == var

    def value(t) -> AsymptoticExpr:
        v = evaluator.eval_term(t, structure, {})
        if isinstance(v, Symbolic):
            return v.expr
        raise NotSupported(f"comparison bound {v} is not symbolic")

    if atom.kind == "in" and is_var(atom.lhs):
        S = evaluator.eval_term(atom.rhs, structure, {})
        if isinstance(S, StarCatalog) and S.name == "RR":
            return lo, hi
        iv = _as_interval(S) if isinstance(S, InternalSet) else None
        if iv is None:
            raise NotSupported(f"membership in {S} does not preserve the interval shape")
        return sr.emax([lo, iv.lo]), sr.emin([hi, iv.hi])
    if atom.kind == "rel" and atom.rel in ("<=", ">="):
        left, right = (atom.lhs, atom.rhs) if atom.rel == "<=" else (atom.rhs, atom.lhs)
        if is_var(left) and var not in fl.term_vars(right):
            return lo, sr.emin([hi, value(right)])
        if is_var(right) and var not in fl.term_vars(left):
            return sr.emax([lo, value(left)]), hi
    raise NotSupported(f"atom {fl.to_sexp(atom)} is outside the interval fragment")


# -- spilling ----------------------------------------------------------------

@dataclass(frozen=True)
class SpillWitness:
    element: GenReal
    membership: Verdict
    size: SizeClass
    standard: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"element": str(self.element), "membership": self.membership.to_json(), "size": self.size.to_json()}
        if self.standard is not None:
            out["standard"] = self.standard
        if self.note:
            out["note"] = self.note
        return out


def overspill_witness(A: NatThresholdNet) -> SpillWitness:
    """An infinitely large member of {n in *N : n <= f} when f -> infinity.

    Every standard n is eventually <= f, so the set contains all of N and
    hence the infinite element omega = floor(f) in [f - 1, f]; the whole
    initial segment {n <= omega} lies inside the set.
    """
    if not isinstance(A, NatThresholdNet) or A.shape != "AtMost":
        raise NotSupported("overspill_witness expects nat<=(f)")
    f = A.upper
    if limit_class(f).kind is not LimitKind.INFINITE or eventual_sign(f) < 0:
        raise HypothesisFails(f"f = {f} does not tend to +infinity, so N is not contained in the set")
    omega = Bracketed(f - 1, f, True)
    segment = sr.leq(omega, Symbolic(f))
    return SpillWitness(omega, member(omega, A), sr.classify(omega), note=f"{{n <= omega}} subset: {segment}")


def underspill_witness(A: NatThresholdNet) -> SpillWitness:
    """A standard member of {n in *N : n >= g} when g stays finite.

    Returns the least standard N with N >= g for small eps.
    """
    if not isinstance(A, NatThresholdNet) or A.shape != "AtLeast":
        raise NotSupported("underspill_witness expects nat>=(g)")
    g = A.lower
    lc = limit_class(g)
    if lc.kind is LimitKind.INFINITE:
        raise HypothesisFails(f"g = {g} is unbounded, so the set has no finite element")
    c = lc.value if lc.kind is LimitKind.FINITE else Fraction(0)
    n = max(0, math.ceil(c))
    while eventual_sign(ac.const(n) - g) < 0:
        n += 1
    w = Symbolic(ac.const(n))
    return SpillWitness(w, member(w, A), sr.classify(w), standard=n)


# -- quantifier switching ----------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """A predicate on symbolic nets: every slack(x) must be >= 0."""

    label: str
    slacks: Callable[[AsymptoticExpr], Sequence[AsymptoticExpr]]

    def verdict(self, x: AsymptoticExpr, sign=eventual_sign) -> Verdict:
        return Verdict.proved(all(sign(s) >= 0 for s in self.slacks(x)))


@dataclass(frozen=True)
class StageCertificate:
    stage: int
    eta: Fraction
    thresholds: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {"stage": self.stage, "eta": str(self.eta), "dyadic_thresholds": list(self.thresholds)}


def _holds_below(c: Constraint, x: AsymptoticExpr) -> int | None:
    """Dyadic k with c(x) true on (0, 2^-k]; None when c(x) fails for small eps."""
    k = 1
    for s in c.slacks(x):
        sg = eventual_sign(s)
        if sg < 0:
            return None
        if sg > 0:
            k = max(k, ac.sign_threshold(s))
    return k


def qswitch_diagonal(
    family: Callable[[int], tuple[Constraint, object]],
    stages: int = sr.DEFAULT_STAGES,
    label: str = "diagonal",
) -> Piecewise:
    """Diagonal net for constraints that get stronger with n.

    ``family(n)`` returns ``(constraint_n, witness_n)`` where witness_n
    satisfies constraints 1..n for small eps.  The result follows witness_n
    on (eta_{n+1}, eta_n], where eta_n lies below the certified thresholds
    of constraints 1..n on witness_n, so constraint_n holds on (0, eta_n].
    The first ``stages`` stages are materialized and certified eagerly.
    """
    constraints: list[Constraint] = []
    etas: list[Fraction] = []

    def stage(n: int):
        while len(constraints) < n:
            constraints.append(family(len(constraints) + 1)[0])
        witness = sr.genreal(family(n)[1])
        if not isinstance(witness, Symbolic):
            raise NotSupported("diagonal witnesses must be symbolic")
        ks = []
        for i, c in enumerate(constraints[:n], start=1):
            try:
                k = _holds_below(c, witness.expr)
            except ThresholdFailure as exc:
                raise ThresholdFailure(f"stage {n}: {exc}") from exc
            if k is None:
                raise ConstraintViolation(f"witness_{n} = {witness.expr} violates constraint {i} ({c.label})")
            ks.append(k)
        eta = min([Fraction(1, 2 ** max(ks)), Fraction(1, 2**n)] + ([etas[-1] / 2] if etas else []))
        etas.append(eta)
        return eta, witness.expr, StageCertificate(n, eta, tuple(ks))

    x = Piecewise(stage, schedule=("qswitch", id(family), label), label=label)
    x.stage(max(1, stages) + 1)
    return x


def qswitch_verify(x: Piecewise, family: Callable[[int], tuple[Constraint, object]], stages: int) -> Verdict:
    """Independent re-check: constraint_n holds on every materialized stage
    interval below eta_n, decided by interval evaluation on each stage."""
    cons = [family(n)[0] for n in range(1, stages + 1)]
    for m in range(1, stages + 1):
        lo, hi = x.interval(m)
        e = x.stage(m).expr
        for n in range(1, m + 1):
            for s in cons[n - 1].slacks(e):
                sg = ac.sign_on_interval(s, lo, hi)
                if sg is None:
                    return Verdict.unknown(f"stage {m} undecided")
                if sg < 0:
                    return Verdict.evidence(False, stages)
    return Verdict.evidence(True, stages)


# -- externality -------------------------------------------------------------

@dataclass(frozen=True)
class ExternalityWitness:
    candidate: InternalSet
    witness: GenReal
    reason: str

    def to_json(self) -> dict:
        return {"candidate": str(self.candidate), "witness": str(self.witness), "reason": self.reason}


def default_candidates() -> list[InternalSet]:
    exprs = ["1", "5", "7/2", "eps^-1", "log", "eps^-1/2", "3 + eps", "2*log - 1", "exp(1*eps^-1)"]
    out: list[InternalSet] = []
    for t in exprs:
        e = ac.parse_expr(t)
        out.append(IntervalNet(ac.ZERO, e))
        out.append(at_most(e))
        out.append(IntervalNet(ac.ONE, e + 1))
    out += [FiniteListNet(tuple(sr.sym(i) for i in range(k))) for k in (1, 3, 6)]
    out += [StarCatalog("NN"), StarCatalog("UNIT"), StarCatalog("closed", 0, 9)]
    return out


def externality_evidence(candidates: Sequence[InternalSet] | None = None) -> list[ExternalityWitness]:
    """For each candidate set, an element separating it from the standard N.

    The witness is a standard n that is not a member, an infinitely large
    member, or a member outside *N.  Since the standard naturals are closed
    under n -> n + 1 and contain no infinite element, no representable set
    equals them.
    """
    out = []
    for A in candidates if candidates is not None else default_candidates():
        out.append(_separate(A))
    return out


def _separate(A: InternalSet) -> ExternalityWitness:
    top = is_star_bounded(A)
    if top.proved_true:
        bound = sr.abs_bounds(top.bound)[1]
        if limit_class(bound).kind is not LimitKind.INFINITE:
            n = 0
            while not member(n, A).proved_false:
                n += 1
            return ExternalityWitness(A, sr.sym(n), "standard n not a member")
        omega = Bracketed(bound - 1, bound, True)
        if member(omega, A).proved_true and sr.classify(omega).infinitely_large.proved_true:
            return ExternalityWitness(A, omega, "infinitely large member")
    else:
        # unbounded: *R, *N and the like contain omega = floor(1/eps)
        omega = Bracketed(ac.EPS.reciprocal() - 1, ac.EPS.reciprocal(), True)
        if member(omega, A).proved_true:
            return ExternalityWitness(A, omega, "infinitely large member")
    half = sr.sym(Fraction(1, 2))
    if member(half, A).proved_true:
        return ExternalityWitness(A, half, "member outside *N")
    raise Undecided(f"no separating element found for {A}")


# -- text syntax -------------------------------------------------------------

def parse_set(text: str) -> InternalSet:
    """``interval(e1, e2)``, ``finset(g, ...)``, ``nat<=(f)``, ``nat>=(g)``,
    ``nat[](g, f)``, ``star(NAME)`` or ``star(closed(a, b))``."""
    form = call_form(text)
    if form is None:
        raise SyntaxError(f"unrecognised set {text!r}")
    name, inner = form
    args = split_top(inner)
    if name == "interval" and len(args) == 2:
        return IntervalNet(ac.parse_expr(args[0]), ac.parse_expr(args[1]))
    if name == "finset":
        return FiniteListNet(tuple(sr.parse_genreal(a) for a in args))
    if name == "nat<=" and len(args) == 1:
        return at_most(ac.parse_expr(args[0]))
    if name == "nat>=" and len(args) == 1:
        return at_least(ac.parse_expr(args[0]))
    if name == "nat[]" and len(args) == 2:
        return NatThresholdNet(ac.parse_expr(args[0]), ac.parse_expr(args[1]))
    if name == "star" and len(args) == 1:
        sub = call_form(args[0])
        if sub is not None and sub[0] == "closed":
            a, b = split_top(sub[1])
            return StarCatalog("closed", _rational(a), _rational(b))
        return StarCatalog(args[0].strip())
    raise SyntaxError(f"unrecognised set {text!r}")


def _rational(text: str) -> Fraction:
    e = ac.parse_expr(text)
    if not e.is_constant:
        raise SyntaxError(f"{text!r} is not a rational constant")
    return e.constant_value
