"""Exact asymptotic scale for nets indexed by eps -> 0+.

Every net handled by the library reduces to a finite sum

    sum_i c_i * exp(u_i * eps^-r_i) * eps^q_i * log(1/eps)^k_i

with rational ``c, u, r, q`` and integer ``k >= 0``.  On this scale the
eventual sign of a net is decided by its leading term, which makes all
"for small eps" relations decidable.  Numerical evaluation (``eval_at``)
and certified sign thresholds (``sign_threshold``) use interval arithmetic
and never feed back into the symbolic decisions.
"""

from __future__ import annotations

import enum
import functools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from mpmath import mp
from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "OutOfScale",
    "DivisionByZeroNet",
    "ThresholdFailure",
    "Monomial",
    "AsymptoticExpr",
    "GrowthOrder",
    "Sign",
    "LimitKind",
    "LimitClass",
    "Enclosure",
    "EPS",
    "LOG",
    "ONE",
    "ZERO",
    "const",
    "eps_pow",
    "normalize",
    "parse_raw",
    "parse_expr",
    "compare_growth",
    "eventual_sign",
    "arith",
    "limit_class",
    "eval_at",
    "eval_at_dyadic",
    "sign_at",
    "sign_threshold",
]

RationalLike = Union[int, Fraction, str]


class OutOfScale(ValueError):
    """The requested construct has no exact representation on the scale."""


class DivisionByZeroNet(ZeroDivisionError):
    """Negative power of the zero net."""


class ThresholdFailure(RuntimeError):
    """No certified dyadic threshold was found within the search budget."""


def _q(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class GrowthOrder(enum.Enum):
    DOMINATES = "Dominates"
    SAME = "SameMonomial"
    DOMINATED_BY = "DominatedBy"


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


class LimitKind(enum.Enum):
    ZERO = "Zero"
    FINITE = "Finite"
    INFINITE = "Infinite"


@dataclass(frozen=True)
class LimitClass:
    kind: LimitKind
    value: Fraction | None = None

    def __str__(self) -> str:
        if self.kind is LimitKind.FINITE:
            return f"Finite({self.value})"
        return self.kind.value


@dataclass(frozen=True)
class Monomial:
    """exp(u*eps^-r) * eps^q * log(1/eps)^k, with (u, r) = (0, 1) when no exp factor."""

    u: Fraction = Fraction(0)
    r: Fraction = Fraction(1)
    q: Fraction = Fraction(0)
    k: int = 0

    def __post_init__(self) -> None:
        u, r, q = _q(self.u), _q(self.r), _q(self.q)
        if r <= 0:
            raise ValueError("exp rate r must be positive")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("log power k must be a nonnegative integer")
        if u == 0:
            r = Fraction(1)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", q)

    @property
    def is_one(self) -> bool:
        return self.u == 0 and self.q == 0 and self.k == 0

    def exp_part(self) -> dict[Fraction, Fraction]:
        return {self.r: self.u} if self.u != 0 else {}

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        if self.u != 0 and other.u != 0 and self.r != other.r:
            raise OutOfScale("product of exp factors with different rates")
        if self.u != 0 and other.u != 0:
            u, r = self.u + other.u, self.r
        elif self.u != 0:
            u, r = self.u, self.r
        else:
            u, r = other.u, other.r
        return Monomial(u, r, self.q + other.q, self.k + other.k)

    def reciprocal(self) -> "Monomial":
        if self.k != 0:
            raise OutOfScale("1/log(1/eps) is not on the scale")
        return Monomial(-self.u, self.r, -self.q, 0)

    def power(self, p: Fraction) -> "Monomial":
        p = _q(p)
        k = self.k * p
        if k.denominator != 1 or k < 0:
            raise OutOfScale("non-integer or negative power of log(1/eps)")
        return Monomial(self.u * p, self.r, self.q * p, int(k))

    def __str__(self) -> str:
        return _format_monomial(self) or "1"


def _exp_diff(m1: Monomial, m2: Monomial) -> dict[Fraction, Fraction]:
    d = dict(m1.exp_part())
    for r, u in m2.exp_part().items():
        d[r] = d.get(r, Fraction(0)) - u
    return {r: u for r, u in d.items() if u != 0}


def compare_growth(m1: Monomial, m2: Monomial) -> GrowthOrder:
    """Decide whether m1/m2 tends to infinity, is identically 1, or tends to 0."""
    d = _exp_diff(m1, m2)
    if d:
        top = max(d)
        return GrowthOrder.DOMINATES if d[top] > 0 else GrowthOrder.DOMINATED_BY
    if m1.q != m2.q:
        return GrowthOrder.DOMINATES if m1.q < m2.q else GrowthOrder.DOMINATED_BY
    if m1.k != m2.k:
        return GrowthOrder.DOMINATES if m1.k > m2.k else GrowthOrder.DOMINATED_BY
    return GrowthOrder.SAME


def _cmp_desc(a: Monomial, b: Monomial) -> int:
    g = compare_growth(a, b)
    if g is GrowthOrder.DOMINATES:
        return -1
    if g is GrowthOrder.DOMINATED_BY:
        return 1
    return 0


_desc_key = functools.cmp_to_key(_cmp_desc)


class AsymptoticExpr:
    """Canonical finite sum of scale monomials with nonzero rational coefficients.

    Terms are kept sorted by strictly decreasing growth; the empty sum is the
    zero net.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable[tuple[RationalLike, Monomial]] | Mapping[Monomial, RationalLike] = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for item in items:
            if isinstance(terms, Mapping):
                mon, c = item
            else:
                c, mon = item
            if not isinstance(mon, Monomial):
                raise TypeError("terms must pair coefficients with Monomial")
            acc[mon] = acc.get(mon, Fraction(0)) + _q(c)
        live = [(c, m) for m, c in acc.items() if c != 0]
        live.sort(key=lambda cm: _desc_key(cm[1]))
        self._terms: tuple[tuple[Fraction, Monomial], ...] = tuple(live)
        self._hash = hash(self._terms)

    # construction helpers -------------------------------------------------
    @classmethod
    def coerce(cls, x: "AsymptoticExpr | RationalLike | str") -> "AsymptoticExpr":
        if isinstance(x, AsymptoticExpr):
            return x
        if isinstance(x, str):
            return parse_expr(x)
        return const(x)

    @property
    def terms(self) -> tuple[tuple[Fraction, Monomial], ...]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def leading(self) -> tuple[Fraction, Monomial]:
        if not self._terms:
            raise ValueError("the zero net has no leading term")
        return self._terms[0]

    @property
    def is_constant(self) -> bool:
        return all(m.is_one for _, m in self._terms)

    @property
    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("expression depends on eps")
        return self._terms[0][0] if self._terms else Fraction(0)

    @property
    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return AsymptoticExpr([*self._terms, *other._terms])

    __radd__ = __add__

    def __neg__(self) -> "AsymptoticExpr":
        return AsymptoticExpr([(-c, m) for c, m in self._terms])

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return AsymptoticExpr([(c1 * c2, m1 * m2) for c1, m1 in self._terms for c2, m2 in other._terms])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def reciprocal(self) -> "AsymptoticExpr":
        if self.is_zero:
            raise DivisionByZeroNet("reciprocal of the zero net")
        if not self.is_single_term:
            raise OutOfScale("reciprocal of a multi-term sum is an infinite series")
        c, m = self._terms[0]
        return AsymptoticExpr([(1 / c, m.reciprocal())])

    def __pow__(self, n: int) -> "AsymptoticExpr":
        if not isinstance(n, int):
            return self.rational_power(_q(n))
        if n < 0:
            if self.is_zero:
                raise DivisionByZeroNet("negative power of the zero net")
            return self.reciprocal() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def rational_power(self, p: Fraction) -> "AsymptoticExpr":
        p = _q(p)
        if p.denominator == 1:
            return self ** int(p)
        if self.is_zero:
            if p > 0:
                return ZERO
            raise DivisionByZeroNet("negative power of the zero net")
        if not self.is_single_term:
            raise OutOfScale("fractional power of a multi-term sum")
        c, m = self._terms[0]
        return AsymptoticExpr([(_rational_root_power(c, p), m.power(p))])

    def __abs__(self) -> "AsymptoticExpr":
        return -self if eventual_sign(self) is Sign.NEGATIVE else self

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, AsymptoticExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"AsymptoticExpr({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (c, m) in enumerate(self._terms):
            body = _format_term(abs(c), m)
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)


def _coerce_or_none(x) -> AsymptoticExpr | None:
    if isinstance(x, AsymptoticExpr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return const(x)
    return None


def _int_root(n: int, d: int) -> int | None:
    if n < 0:
        return None
    lo, hi = 0, 1
    while hi**d <= n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**d <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**d == n else None


def _rational_root_power(c: Fraction, p: Fraction) -> Fraction:
    d = p.denominator
    sign = 1
    if c < 0:
        if d % 2 == 0:
            raise OutOfScale("even root of a negative coefficient")
        sign, c = -1, -c
    num, den = _int_root(c.numerator, d), _int_root(c.denominator, d)
    if num is None or den is None:
        raise OutOfScale(f"({c})^{p} is irrational")
    return (sign * Fraction(num, den)) ** p.numerator


def const(c: RationalLike) -> AsymptoticExpr:
    c = _q(c)
    return AsymptoticExpr([(c, Monomial())]) if c != 0 else AsymptoticExpr()


def eps_pow(q: RationalLike, coeff: RationalLike = 1, k: int = 0) -> AsymptoticExpr:
    return AsymptoticExpr([(_q(coeff), Monomial(q=_q(q), k=k))])


ZERO = AsymptoticExpr()
ONE = const(1)
EPS = eps_pow(1)
LOG = AsymptoticExpr([(1, Monomial(k=1))])


# -- printing ----------------------------------------------------------------

def _fmt_q(x: Fraction) -> str:
    return str(x)


def _format_monomial(m: Monomial) -> str:
    parts = []
    if m.u != 0:
        parts.append(f"exp({_fmt_q(m.u)}*eps^-{_fmt_q(m.r)})")
    if m.q != 0:
        parts.append("eps" if m.q == 1 else f"eps^{_fmt_q(m.q)}")
    if m.k != 0:
        parts.append("log" if m.k == 1 else f"log^{m.k}")
    return "*".join(parts)


def _format_term(c: Fraction, m: Monomial) -> str:
    mono = _format_monomial(m)
    if not mono:
        return _fmt_q(c)
    if c == 1:
        return mono
    return f"{_fmt_q(c)}*{mono}"


# -- raw expression trees and the text grammar -------------------------------

@dataclass(frozen=True)
class RawEps:
    pass


@dataclass(frozen=True)
class RawLog:
    pass


@dataclass(frozen=True)
class RawNum:
    value: Fraction


@dataclass(frozen=True)
class RawAdd:
    left: object
    right: object


@dataclass(frozen=True)
class RawSub:
    left: object
    right: object


@dataclass(frozen=True)
class RawMul:
    left: object
    right: object


@dataclass(frozen=True)
class RawNeg:
    arg: object


@dataclass(frozen=True)
class RawPow:
    base: object
    exponent: object


@dataclass(frozen=True)
class RawExp:
    arg: object


def normalize(raw) -> AsymptoticExpr:
    """Reduce a raw expression tree (or text) to canonical form."""
    if isinstance(raw, AsymptoticExpr):
        return raw
    if isinstance(raw, str):
        raw = parse_raw(raw)
    if isinstance(raw, (int, Fraction)):
        return const(raw)
    if isinstance(raw, RawEps):
        return EPS
    if isinstance(raw, RawLog):
        return LOG
    if isinstance(raw, RawNum):
        return const(raw.value)
    if isinstance(raw, RawAdd):
        return normalize(raw.left) + normalize(raw.right)
    if isinstance(raw, RawSub):
        return normalize(raw.left) - normalize(raw.right)
    if isinstance(raw, RawMul):
        return normalize(raw.left) * normalize(raw.right)
    if isinstance(raw, RawNeg):
        return -normalize(raw.arg)
    if isinstance(raw, RawPow):
        ex = normalize(raw.exponent)
        if not ex.is_constant:
            raise OutOfScale("exponent must be a rational constant")
        return normalize(raw.base).rational_power(ex.constant_value)
    if isinstance(raw, RawExp):
        arg = normalize(raw.arg)
        if arg.is_zero:
            return ONE
        if not arg.is_single_term:
            raise OutOfScale("exp of a sum is not a single scale monomial")
        c, m = arg.leading
        if m.u != 0 or m.k != 0 or m.q >= 0:
            raise OutOfScale(f"exp({arg}) is not on the scale")
        return AsymptoticExpr([(1, Monomial(u=c, r=-m.q))])
    raise OutOfScale(f"unsupported construct {raw!r}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*^()]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise SyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r} at column {pos + 1}")
            kind = m.lastgroup
            self.items.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise SyntaxError(f"unexpected end of expression in {self.text!r}")
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        tok = self.next()
        if tok[1] != value:
            raise SyntaxError(f"expected {value!r} at column {tok[2] + 1}, got {tok[1]!r}")


def parse_raw(text: str):
    """Parse the expression grammar into a raw tree."""
    toks = _Tokens(text)
    if toks.peek() is None:
        raise SyntaxError("empty expression")
    tree = _p_sum(toks)
    tok = toks.peek()
    if tok is not None:
        raise SyntaxError(f"trailing input {tok[1]!r} at column {tok[2] + 1}")
    return tree


def _p_sum(t: _Tokens):
    node = _p_product(t)
    while True:
        if t.accept("+"):
            node = RawAdd(node, _p_product(t))
        elif t.accept("-"):
            node = RawSub(node, _p_product(t))
        else:
            return node


def _p_product(t: _Tokens):
    node = _p_unary(t)
    while t.accept("*"):
        node = RawMul(node, _p_unary(t))
    return node


def _p_unary(t: _Tokens):
    if t.accept("-"):
        return RawNeg(_p_unary(t))
    if t.accept("+"):
        return _p_unary(t)
    return _p_power(t)


def _p_power(t: _Tokens):
    base = _p_atom(t)
    if t.accept("^"):
        neg = t.accept("-")
        if t.accept("("):
            ex = _p_sum(t)
            t.expect(")")
        else:
            kind, val, pos = t.next()
            if kind != "num":
                raise SyntaxError(f"exponent must be a rational at column {pos + 1}")
            ex = RawNum(Fraction(val))
        return RawPow(base, RawNeg(ex) if neg else ex)
    return base


def _p_atom(t: _Tokens):
    kind, val, pos = t.next()
    if kind == "num":
        return RawNum(Fraction(val))
    if kind == "name":
        if val in ("eps", "rho"):
            return RawEps()
        if val == "log":
            if t.accept("("):
                arg = _p_sum(t)
                t.expect(")")
                if normalize(arg) != EPS.reciprocal():
                    raise OutOfScale("log(...) is only available as log(1/eps) = log")
            return RawLog()
        if val == "exp":
            t.expect("(")
            arg = _p_sum(t)
            t.expect(")")
            return RawExp(arg)
        raise SyntaxError(f"unknown name {val!r} at column {pos + 1}")
    if val == "(":
        node = _p_sum(t)
        t.expect(")")
        return node
    raise SyntaxError(f"unexpected {val!r} at column {pos + 1}")


def parse_expr(text: str) -> AsymptoticExpr:
    return normalize(parse_raw(text))


# -- eventual decisions ------------------------------------------------------

def eventual_sign(a: AsymptoticExpr) -> Sign:
    if a.is_zero:
        return Sign.ZERO
    return Sign.POSITIVE if a.leading[0] > 0 else Sign.NEGATIVE


def arith(op: str, a: AsymptoticExpr, b: AsymptoticExpr | int | None = None) -> AsymptoticExpr:
    """Dispatch for the ring operations: add, mul, neg, abs, int_pow."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "abs":
        return abs(a)
    if op == "int_pow":
        if not isinstance(b, int):
            raise TypeError("int_pow needs an integer exponent")
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def limit_class(a: AsymptoticExpr) -> LimitClass:
    if a.is_zero:
        return LimitClass(LimitKind.ZERO)
    c, m = a.leading
    if m.is_one:
        return LimitClass(LimitKind.FINITE, c)
    if m.u > 0 or (m.u == 0 and (m.q < 0 or (m.q == 0 and m.k > 0))):
        return LimitClass(LimitKind.INFINITE)
    return LimitClass(LimitKind.ZERO)


# -- interval evaluation -----------------------------------------------------

_local = threading.local()


def _ctx(prec: int) -> MPIntervalContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class Enclosure:
    """Certified enclosure [lo, hi] of a real value (mpmath mpf endpoints)."""

    lo: object
    hi: object

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    @property
    def width(self):
        return self.hi - self.lo

    def __float__(self) -> float:
        return float(self.mid)

    def sign(self) -> Sign | None:
        if self.lo > 0:
            return Sign.POSITIVE
        if self.hi < 0:
            return Sign.NEGATIVE
        return None


def _iq(ctx, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


def _enclosure(v) -> Enclosure:
    lo, hi = v._mpi_
    return Enclosure(mp.make_mpf(lo), mp.make_mpf(hi))


def _log_monomial(ctx, m: Monomial, log_inv_eps):
    """Interval for log(m(eps)) given an interval for L = log(1/eps)."""
    val = -ctx.mpf(m.q.numerator) / m.q.denominator * log_inv_eps
    if m.u != 0:
        rate = ctx.exp(ctx.mpf(m.r.numerator) / m.r.denominator * log_inv_eps)
        val = val + ctx.mpf(m.u.numerator) / m.u.denominator * rate
    if m.k != 0:
        val = val + m.k * ctx.log(log_inv_eps)
    return val


def _eval_iv(ctx, a: AsymptoticExpr, log_inv_eps):
    total = ctx.mpf(0)
    for c, m in a.terms:
        total = total + ctx.mpf(c.numerator) / c.denominator * ctx.exp(_log_monomial(ctx, m, log_inv_eps))
    return total


def _log_inv(ctx, eps0):
    if isinstance(eps0, tuple) and eps0[0] == "dyadic":
        return eps0[1] * ctx.log(2)
    e = _q(eps0)
    if not 0 < e < 1:
        raise ValueError("eps0 must lie in (0, 1)")
    return ctx.log(ctx.mpf(e.denominator) / e.numerator)


def eval_at(a: AsymptoticExpr, eps0: RationalLike, prec: int = 113) -> Enclosure:
    """Interval evaluation of ``a`` at the rational point ``eps0``."""
    ctx = _ctx(prec)
    return _enclosure(_eval_iv(ctx, a, _log_inv(ctx, eps0)))


def eval_at_dyadic(a: AsymptoticExpr, k: int, prec: int = 113) -> Enclosure:
    """Interval evaluation at eps = 2^-k (k may be large; no rational blow-up)."""
    ctx = _ctx(prec)
    return _enclosure(_eval_iv(ctx, a, k * ctx.log(2)))


def sign_at(a: AsymptoticExpr, eps0: RationalLike | tuple, max_prec: int = 4096) -> Sign | None:
    """Certified sign of a(eps0); None if it cannot be separated from 0."""
    if a.is_zero:
        return Sign.ZERO
    prec = 113
    while prec <= max_prec:
        ctx = _ctx(prec)
        v = _eval_iv(ctx, a, _log_inv(ctx, eps0))
        if v.a > 0:
            return Sign.POSITIVE
        if v.b < 0:
            return Sign.NEGATIVE
        prec *= 2
    return None


def _ratio_monotone_ok(ctx, lead: Monomial, m: Monomial, L0) -> bool:
    """Sufficient check that m/lead is increasing in eps on (0, eps0], L0 = log(1/eps0).

    With g = m/lead, eps * d/d(eps) log g = sum_j (-u_j r_j) eps^-r_j + q - k/L.
    """
    expo = _exp_diff(m, lead)
    q = m.q - lead.q
    k = m.k - lead.k
    if not expo:
        if q > 0:
            return k <= 0 or (_iq(ctx, q) - k / L0).a > 0
        return q == 0 and k < 0
    lb = ctx.mpf(min(q, 0).numerator) / min(q, 0).denominator
    if k > 0:
        lb = lb - k / L0
    top = max(expo)
    if expo[top] >= 0:
        return False
    a_top = -expo[top] * top
    bracket = ctx.mpf(a_top.numerator) / a_top.denominator
    for r, u in expo.items():
        if r == top or u <= 0:
            continue
        b = u * r
        bracket = bracket - ctx.mpf(b.numerator) / b.denominator * ctx.exp(-_iq(ctx, top - r) * L0)
    if not bracket.a > 0:
        return False
    total = ctx.exp(_iq(ctx, top) * L0) * bracket + lb
    return total.a > 0


def _threshold_ok(ctx, a: AsymptoticExpr, k: int) -> bool:
    c0, lead = a.leading
    L0 = k * ctx.log(2)
    tail = ctx.mpf(0)
    for c, m in a.terms[1:]:
        if not _ratio_monotone_ok(ctx, lead, m, L0):
            return False
        g = ctx.exp(_log_monomial(ctx, m, L0) - _log_monomial(ctx, lead, L0))
        tail = tail + ctx.mpf(abs(c).numerator) / abs(c).denominator * g
    return tail.b < ctx.mpf(abs(c0).numerator) / abs(c0).denominator


@functools.lru_cache(maxsize=65536)
def sign_threshold(a: AsymptoticExpr, k_max: int = 1 << 22) -> int:
    """Smallest dyadic exponent k (found by search) such that sign(a(eps)) equals
    eventual_sign(a) for every eps in (0, 2^-k].

    The certificate: every ratio (tail monomial / leading monomial) is
    increasing on (0, 2^-k] and their weighted sum at 2^-k is below the
    leading coefficient.  Zero and single-term nets have k = 1.
    """
    if a.is_zero or a.is_single_term:
        return 1
    ctx = _ctx(160)
    k = 1
    while not _threshold_ok(ctx, a, k):
        k *= 2
        if k > k_max:
            raise ThresholdFailure(f"no certified threshold for {a} up to 2^-{k_max}")
    lo = k // 2
    hi = k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _threshold_ok(ctx, a, mid):
            hi = mid
        else:
            lo = mid
    return max(hi, 1)


def sign_on_interval(a: AsymptoticExpr, eps_lo: RationalLike, eps_hi: RationalLike) -> Sign | None:
    """Certified constant sign of a(eps) for eps in [eps_lo, eps_hi], or None."""
    if a.is_zero:
        return Sign.ZERO
    lo, hi = _q(eps_lo), _q(eps_hi)
    if not 0 < lo <= hi <= 1:
        raise ValueError("need 0 < eps_lo <= eps_hi <= 1")
    k = sign_threshold(a)
    if hi <= Fraction(1, 2**k):
        return eventual_sign(a)
    for prec in (113, 512):
        ctx = _ctx(prec)
        L = ctx.mpf([ctx.log(ctx.mpf(hi.denominator) / hi.numerator).a, ctx.log(ctx.mpf(lo.denominator) / lo.numerator).b])
        v = _eval_iv(ctx, a, L)
        if v.a > 0:
            return Sign.POSITIVE
        if v.b < 0:
            return Sign.NEGATIVE
    return None
