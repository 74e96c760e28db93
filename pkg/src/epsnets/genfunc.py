"""Scaled-mollifier generalized functions on an interval Omega.

An atom is the net of smooth functions

    x  |->  c(eps) * eps^-a * phi^(j)((x - x0) * eps^-b)

with phi one of sin, cos, bump, gauss.  Finite sums of atoms represent
elements of the Colombeau algebra G(Omega); the delta-model is
eps^-1 bump(x / eps).  Seminorms

    p_m(u) = sup_{x in K_m, alpha <= m} |d^alpha u(x)|,
    K_m = [max(lo, -m) + 1/m, min(hi, m) - 1/m],

are returned as certified brackets; G-infinity regularity is decided
structurally from the exponents a + b*alpha instead of by enumerating alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from . import asymcore as ac
from . import colombeau as col
from . import profiles as pf
from . import starreal as sr
from ._text import call_form, split_top
from .asymcore import AsymptoticExpr, LimitKind, Monomial, eventual_sign, limit_class
from .starreal import Bracketed, GenReal, Symbolic, Verdict

ALPHA_MAX = 12


class DerivativeBudgetExceeded(ValueError):
    pass


class DomainViolation(ValueError):
    pass


# -- data --------------------------------------------------------------------

@dataclass(frozen=True)
class MollifierProfile:
    name: str

    def __post_init__(self):
        if self.name not in pf.PROFILES:
            raise ValueError(f"unknown profile {self.name!r}; expected one of {pf.PROFILES}")

    @property
    def support_radius(self) -> Fraction | None:
        return pf.support_radius(self.name)

    @property
    def periodic(self) -> bool:
        return self.name in ("sin", "cos")

    def sup_bound(self, k: int) -> pf.SupBound:
        return pf.sup_bound(self.name, k)

    def derivative_sup_bounds(self, alpha_max: int = ALPHA_MAX) -> dict[int, tuple[Fraction, Fraction]]:
        return {k: (self.sup_bound(k).lower, self.sup_bound(k).upper) for k in range(alpha_max + 1)}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class GFAtom:
    c: AsymptoticExpr
    a: Fraction
    b: Fraction
    x0: Fraction
    profile: MollifierProfile
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c", AsymptoticExpr.coerce(self.c))
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "x0", Fraction(self.x0))
        if isinstance(self.profile, str):
            object.__setattr__(self, "profile", MollifierProfile(self.profile))
        if self.j < 0:
            raise ValueError("derivative order j must be >= 0")
        if self.profile.periodic and self.j >= 4:
            object.__setattr__(self, "j", self.j % 4)

    @property
    def key(self):
        return (self.a, self.b, self.x0, self.profile.name, self.j)

    def __str__(self) -> str:
        return f"atom(c={self.c}, a={self.a}, b={self.b}, x0={self.x0}, profile={self.profile}, j={self.j})"


@dataclass(frozen=True)
class Domain:
    """Open interval (lo, hi); None stands for -inf / +inf."""

    lo: Fraction | None = None
    hi: Fraction | None = None

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo >= self.hi:
            raise ValueError("empty domain")

    def contains(self, x: Fraction) -> bool:
        return (self.lo is None or x > self.lo) and (self.hi is None or x < self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"domain({lo}, {hi})"


REAL_LINE = Domain()


@dataclass(frozen=True)
class GFElement:
    atoms: tuple[GFAtom, ...]
    domain: Domain = REAL_LINE

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for at in self.atoms:
            if not self.domain.contains(at.x0):
                raise DomainViolation(f"atom centre {at.x0} outside {self.domain}")

    def __add__(self, other: "GFElement") -> "GFElement":
        if self.domain != other.domain:
            raise ValueError("domains differ")
        return GFElement(self.atoms + other.atoms, self.domain)

    def __neg__(self) -> "GFElement":
        return GFElement(tuple(replace(at, c=-at.c) for at in self.atoms), self.domain)

    def __sub__(self, other: "GFElement") -> "GFElement":
        return self + (-other)

    def merged(self) -> "GFElement":
        """Combine atoms with identical shape; drop zero coefficients."""
        acc: dict = {}
        for at in self.atoms:
            acc[at.key] = acc.get(at.key, ac.ZERO) + at.c
        atoms = []
        for at in self.atoms:
            if at.key in acc:
                c = acc.pop(at.key)
                if not c.is_zero:
                    atoms.append(replace(at, c=c))
        return GFElement(tuple(atoms), self.domain)

    def __str__(self) -> str:
        body = " + ".join(str(a) for a in self.atoms) or "0"
        return body if self.domain == REAL_LINE else f"{body} + {self.domain}"


def delta_model(domain: Domain = REAL_LINE) -> GFElement:
    """eps^-1 bump(x / eps)."""
    return GFElement((GFAtom(ac.ONE, 1, 1, 0, MollifierProfile("bump")),), domain)


@dataclass(frozen=True)
class SeminormSpec:
    m: int
    domain: Domain = REAL_LINE

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m >= 1")
        lo, hi = self.K
        if lo > hi:
            raise ValueError(f"K_{self.m} is empty for {self.domain}")

    @property
    def K(self) -> tuple[Fraction, Fraction]:
        m = Fraction(self.m)
        lo = -m if self.domain.lo is None else max(self.domain.lo, -m)
        hi = m if self.domain.hi is None else min(self.domain.hi, m)
        return lo + 1 / m, hi - 1 / m

    @property
    def orders(self) -> range:
        return range(self.m + 1)


# -- derivative --------------------------------------------------------------

def derivative(u: GFElement, alpha_max: int = ALPHA_MAX) -> GFElement:
    out = []
    for at in u.atoms:
        if not at.profile.periodic and at.j + 1 > alpha_max:
            raise DerivativeBudgetExceeded(f"profile derivative order {at.j + 1} exceeds alpha_max = {alpha_max}")
        out.append(replace(at, a=at.a + at.b, j=at.j + 1))
    return GFElement(tuple(out), u.domain)


# -- single-atom windows -----------------------------------------------------

_HALF_PI = None


def _pi_bracket() -> tuple[Fraction, Fraction]:
    global _HALF_PI
    if _HALF_PI is None:
        ctx = ac._ctx(160)
        enc = ac._enclosure(ctx.pi)
        _HALF_PI = (pf._dyadic_floor(enc.lo), pf._dyadic_ceil(enc.hi))
    return _HALF_PI


def _periodic_hits_peak(name: str, k: int, w1: Fraction, w2: Fraction) -> bool:
    """Does [w1, w2] certainly contain a point where |name^(k)| = 1?"""
    lo_pi, hi_pi = _pi_bracket()
    # |sin^(k)| = |sin| or |cos|; peaks of |sin| at pi/2 + n pi, of |cos| at n pi
    shift = Fraction(1, 2) if (name == "sin") == (k % 2 == 0) else Fraction(0)
    n_lo = math.floor(w1 / hi_pi - shift) - 1
    for n in range(n_lo, n_lo + 4 + math.ceil((w2 - w1) / lo_pi)):
        m = n + shift
        a, b = sorted((m * lo_pi, m * hi_pi))
        if w1 <= a and b <= w2:
            return True
    return False


def _fixed_window(profile: MollifierProfile, k: int, w1: Fraction, w2: Fraction) -> tuple[Fraction, Fraction]:
    """Bracket for sup over t in [w1, w2] of |phi^(k)(t)|."""
    sup = profile.sup_bound(k)
    if profile.periodic and _periodic_hits_peak(profile.name, k, w1, w2):
        return Fraction(1), Fraction(1)
    pts = {w1, w2, (w1 + w2) / 2}
    if w1 <= 0 <= w2:
        pts.add(Fraction(0))
    lower = max(pf.abs_value_bracket(profile.name, k, p)[0] for p in pts)
    r = profile.support_radius
    if r is not None and (w1 >= r or w2 <= -r):
        return Fraction(0), Fraction(0)
    return lower, sup.upper


@dataclass(frozen=True)
class _Window:
    lower: AsymptoticExpr
    upper: AsymptoticExpr


def _atom_window(at: GFAtom, k: int, K: tuple[Fraction, Fraction]) -> _Window:
    """Bracket for sup_{x in K} |phi^(k)((x - x0) eps^-b)|, valid for small eps."""
    p, q = K
    prof = at.profile
    sup = prof.sup_bound(k)
    const = ac.const
    if at.b == 0:
        lo, hi = _fixed_window(prof, k, p - at.x0, q - at.x0)
        return _Window(const(lo), const(hi))
    if at.b < 0:
        # the window shrinks to the single point 0 (x0 in K) or near it
        v0 = pf.abs_value_bracket(prof.name, k, Fraction(0))
        lower = v0[0] if p <= at.x0 <= q else v0[0] / 2
        return _Window(const(lower), const(sup.upper))
    if p <= at.x0 <= q and p < q:
        # the scaled window grows to cover the whole line (or a half-line;
        # |phi^(k)| is even for every profile here)
        return _Window(const(sup.lower), const(sup.upper))
    if p == q == at.x0:
        lo, hi = pf.abs_value_bracket(prof.name, k, Fraction(0))
        return _Window(const(lo), const(hi))
    if prof.periodic:
        if p < q:
            return _Window(ac.ONE, ac.ONE)
        return _Window(ac.ZERO, ac.ONE)
    if prof.name == "bump":
        return _Window(ac.ZERO, ac.ZERO)
    d = min(abs(p - at.x0), abs(q - at.x0))
    env = pf.gauss_envelope(k)
    decay = AsymptoticExpr([(env.upper, Monomial(u=-d * d / 2, r=2 * at.b))])
    return _Window(ac.ZERO, decay)


def _atom_factor(at: GFAtom, alpha: int) -> AsymptoticExpr:
    return abs(at.c) * ac.eps_pow(-(at.a + at.b * alpha))


def _alpha_bracket(u: GFElement, alpha: int, K) -> tuple[AsymptoticExpr, AsymptoticExpr]:
    parts = []
    for at in u.atoms:
        w = _atom_window(at, at.j + alpha, K)
        f = _atom_factor(at, alpha)
        parts.append((f * w.lower, f * w.upper))
    if not parts:
        return ac.ZERO, ac.ZERO
    upper = sum((hi for _, hi in parts), ac.ZERO)
    lower = ac.ZERO
    for i, (lo_i, _) in enumerate(parts):
        rest = sum((hi for n, (_, hi) in enumerate(parts) if n != i), ac.ZERO)
        cand = lo_i - rest
        if eventual_sign(cand) > 0 and eventual_sign(cand - lower) > 0:
            lower = cand
    return lower, upper


def seminorm_growth(u: GFElement, m: int, alpha_max: int = ALPHA_MAX) -> Bracketed:
    """Certified bracket [L, U] with L <= p_m(u) <= U for small eps."""
    sn = SeminormSpec(m, u.domain)
    if m > alpha_max:
        raise DerivativeBudgetExceeded(f"m = {m} exceeds alpha_max = {alpha_max}")
    u = u.merged()
    lows, highs = [], []
    for alpha in sn.orders:
        lo, hi = _alpha_bracket(u, alpha, sn.K)
        lows.append(lo)
        highs.append(hi)
    return Bracketed(sr.emax(lows), sr.emax(highs))


# -- moderateness ------------------------------------------------------------

def gf_is_moderate(u: GFElement, alpha_max: int = ALPHA_MAX) -> Verdict:
    u = u.merged()
    if all(col.expr_valuation(at.c).kind != -1 for at in u.atoms):
        return Verdict.proved(True)
    for m in range(1, alpha_max + 1):
        try:
            g = seminorm_growth(u, m, alpha_max)
        except (ValueError, IndexError):
            continue  # beyond the derivative catalog
        if col.expr_valuation(g.lo).kind == -1:
            return Verdict.proved(False, "bracket")
    return Verdict.unknown("possible cancellation between atoms")


def gf_is_negligible(u: GFElement, alpha_max: int = ALPHA_MAX) -> Verdict:
    u = u.merged()
    if all(col.expr_valuation(at.c).kind == 1 for at in u.atoms):
        return Verdict.proved(True)
    for m in range(1, alpha_max + 1):
        try:
            g = seminorm_growth(u, m, alpha_max)
        except (ValueError, IndexError):
            continue  # beyond the derivative catalog
        if col.expr_valuation(g.lo).kind != 1:
            return Verdict.proved(False, "bracket")
    return Verdict.unknown("possible cancellation between atoms")


# -- G-infinity --------------------------------------------------------------

@dataclass(frozen=True)
class Regularity:
    verdict: Verdict
    N: Fraction | None = None
    reason: str = ""
    singular: tuple[GFAtom, ...] = ()

    @property
    def proved_true(self) -> bool:
        return self.verdict.proved_true

    @property
    def proved_false(self) -> bool:
        return self.verdict.proved_false

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.to_json(), "reason": self.reason}
        if self.N is not None:
            out["N"] = str(self.N)
        if self.singular:
            out["singular_atoms"] = [str(a) for a in self.singular]
        return out


def _moderate_exponent(c: AsymptoticExpr) -> Fraction:
    v = col.expr_valuation(c)
    return Fraction(0) if v.kind == 1 else -v.value


def _regular_N(atoms: Sequence[GFAtom]) -> Fraction:
    """A growth exponent N valid for every alpha over the given regular atoms."""
    N = Fraction(0)
    for at in atoms:
        if col.expr_valuation(at.c).kind == 1 or at.b > 0:
            continue  # negligible per alpha, or eventually zero
        extra = 0 if at.profile.periodic else 1  # the profile constant S_k
        N = max(N, math.ceil(_moderate_exponent(at.c) + at.a) + extra)
    return N


def _regular_on_K(at: GFAtom, K) -> bool:
    p, q = K
    if col.expr_valuation(at.c).kind == 1 or at.b <= 0 and col.expr_valuation(at.c).kind != -1:
        return True
    if at.b > 0 and not at.profile.periodic and not (p <= at.x0 <= q):
        return True
    return False


def _decide_singular(singular: list[GFAtom], regular: list[GFAtom], reason: str) -> Regularity:
    if not singular:
        return Regularity(Verdict.proved(True), _regular_N(regular), reason or "every atom is regular")
    top_b = max(at.b for at in singular)
    top = [at for at in singular if at.b == top_b]
    if len(top) == 1 or len({at.x0 for at in top}) == len(top) and all(at.profile.name == "bump" for at in top):
        at = top[0]
        if col.expr_valuation(at.c).kind == -1:
            why = f"coefficient {at.c} is not moderate"
        else:
            why = f"growth exponent {at.a} + {at.b}*alpha is unbounded in alpha"
        return Regularity(Verdict.proved(False), None, why, tuple(singular))
    return Regularity(Verdict.unknown("singular atoms of equal scale may cancel"), None, "", tuple(singular))


def ginf_uniform(u: GFElement, m: int) -> Regularity:
    """Is there one N with sup_{K_m} |d^alpha u| <= rho^-N for every alpha?"""
    K = SeminormSpec(m, u.domain).K
    u = u.merged()
    singular = [at for at in u.atoms if not _regular_on_K(at, K)]
    regular = [at for at in u.atoms if _regular_on_K(at, K)]
    return _decide_singular(singular, regular, "")


def _in_compact(x: GenReal, dom: Domain) -> bool:
    if not isinstance(x, Symbolic):
        return False
    lc = limit_class(x.expr)
    if lc.kind is LimitKind.INFINITE:
        return False
    c = lc.value if lc.kind is LimitKind.FINITE else Fraction(0)
    return dom.contains(c)


def _point_status(at: GFAtom, x: AsymptoticExpr) -> tuple[bool, str]:
    """(regular, reason) for one atom at the point x."""
    v = col.expr_valuation(at.c)
    if v.kind == 1:
        return True, "negligible coefficient"
    if v.kind == -1:
        return False, f"coefficient {at.c} is not moderate"
    if at.b <= 0:
        return True, "scale exponent b <= 0"
    t = (x - at.x0) * ac.eps_pow(-at.b)
    lc = limit_class(t)
    name = at.profile.name
    if lc.kind is LimitKind.INFINITE:
        if name == "bump":
            return True, "argument leaves the bump support"
        if name == "gauss":
            return True, "gaussian tail is negligible for each alpha"
        return False, "oscillating profile at an unbounded argument reaches |phi^(k)| = 1 infinitely often"
    t_star = lc.value if lc.kind is LimitKind.FINITE else Fraction(0)
    if name == "bump":
        if abs(t_star) > 1:
            return True, "argument leaves the bump support"
        if abs(t_star) == 1:
            w = 1 - t * t
            if eventual_sign(w) <= 0:
                return True, "argument stays on or outside the support boundary"
            if col.expr_valuation(w).kind == 0 and col.expr_valuation(w).value > 0:
                return True, "argument approaches the support boundary at a power rate; exp(-1/(1 - t^2)) is negligible"
            raise _Undecided("argument approaches the support boundary too slowly to decide")
        return False, f"argument tends to the interior point {t_star}; the profile is analytic there and not a polynomial"
    if name == "gauss":
        return False, f"argument tends to {t_star}; consecutive Hermite polynomials share no root"
    return False, f"argument tends to {t_star}; sin and cos never vanish together"


class _Undecided(Exception):
    pass


def ginf_pointwise_at(u: GFElement, x) -> Regularity:
    """Is there N with |d^alpha u(x)| <= rho^-N for every alpha?"""
    x = sr.genreal(x)
    if not _in_compact(x, u.domain):
        raise DomainViolation(f"{x} is not in *K for a compact K inside {u.domain}")
    u = u.merged()
    singular, regular, reasons = [], [], []
    for at in u.atoms:
        try:
            ok, why = _point_status(at, x.expr)
        except _Undecided as exc:
            return Regularity(Verdict.unknown(str(exc)), None, str(exc))
        (regular if ok else singular).append(at)
        reasons.append(why)
    reg = _decide_singular(singular, regular, "; ".join(reasons))
    if reg.proved_false:
        return replace(reg, reason="; ".join(reasons))
    return reg


@dataclass(frozen=True)
class PointwiseUniformReport:
    uniform: Regularity
    points: tuple[tuple[str, Regularity], ...]
    incoherent: tuple[str, ...]

    @property
    def coherent(self) -> bool:
        return not self.incoherent

    def to_json(self) -> dict:
        return {
            "uniform": self.uniform.to_json(),
            "points": [{"x": x, **r.to_json()} for x, r in self.points],
            "incoherent": list(self.incoherent),
        }


def witness_points(u: GFElement, m: int) -> list[GenReal]:
    """Standard points of K_m plus x0 +- rho^b/2 for every singular atom."""
    K = SeminormSpec(m, u.domain).K
    p, q = K
    pts: list[GenReal] = [sr.sym(p), sr.sym(q), sr.sym((p + q) / 2)]
    for at in u.merged().atoms:
        if at.b > 0 and p <= at.x0 <= q:
            off = ac.eps_pow(at.b, Fraction(1, 2))
            pts.append(Symbolic(ac.const(at.x0) + (off if at.x0 < q else -off)))
    return pts


def pointwise_uniform_check(u: GFElement, m: int, testpoints: Sequence | None = None) -> PointwiseUniformReport:
    uni = ginf_uniform(u, m)
    pts = [sr.genreal(x) for x in testpoints] if testpoints is not None else witness_points(u, m)
    results = tuple((str(x), ginf_pointwise_at(u, x)) for x in pts)
    bad = []
    if uni.proved_true:
        bad += [f"uniform regular but irregular at {x}" for x, r in results if r.proved_false]
    if uni.proved_false and not any(r.proved_false for _, r in results):
        bad.append("uniform irregular but no test point exhibits it")
    return PointwiseUniformReport(uni, results, tuple(bad))


@dataclass(frozen=True)
class LocalReport:
    local: Verdict
    global_: Regularity
    n: int | None
    pieces: tuple[tuple[Fraction, Fraction], ...]
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "local": self.local.to_json(),
            "global": self.global_.to_json(),
            "n": self.n,
            "pieces": [[str(a), str(b)] for a, b in self.pieces],
            "reason": self.reason,
        }


def ginf_local_check(u: GFElement, x0, m: int) -> LocalReport:
    """Growth bound on K_m minus the open 1/n-neighbourhood of x0 (the sets A_n).

    Atoms centred at x0 whose profile decays (bump, gauss) become regular
    there: their argument has modulus >= eps^-b / n -> infinity.
    """
    x0 = Fraction(x0)
    K = SeminormSpec(m, u.domain).K
    p, q = K
    glob = ginf_uniform(u, m)
    u = u.merged()
    n = m
    while True:
        pieces = tuple((a, b) for a, b in ((p, min(q, x0 - Fraction(1, n))), (max(p, x0 + Fraction(1, n)), q)) if a <= b)
        if pieces or n > 10 * m:
            break
        n += 1
    if not pieces:
        return LocalReport(Verdict.proved(True), glob, None, (), "K_m lies inside every neighbourhood of x0")
    bad = []
    for at in u.atoms:
        if _regular_on_K(at, K):
            continue
        if at.x0 == x0 and not at.profile.periodic:
            continue
        if all(_regular_on_K(at, piece) for piece in pieces):
            continue
        bad.append(at)
    if bad:
        reg = _decide_singular(bad, [], "")
        return LocalReport(reg.verdict, glob, n, pieces, reg.reason)
    return LocalReport(Verdict.proved(True), glob, n, pieces, f"bound holds on A_{n} n K_{m}")


# -- text syntax -------------------------------------------------------------

def _q(text: str) -> Fraction:
    e = ac.parse_expr(text)
    if not e.is_constant:
        raise SyntaxError(f"{text!r} is not a rational constant")
    return e.constant_value


def parse_gf(text: str) -> GFElement:
    """``atom(c=..., a=..., b=..., x0=..., profile=..., j=...) + ... [+ domain(lo, hi)]``."""
    atoms, dom = [], REAL_LINE
    for piece in split_top(text, "+"):
        form = call_form(piece)
        if form is None:
            raise SyntaxError(f"expected atom(...) or domain(...), got {piece!r}")
        name, inner = form
        if name == "domain":
            lo, hi = split_top(inner)
            dom = Domain(None if lo.strip() == "-inf" else _q(lo), None if hi.strip() in ("inf", "+inf") else _q(hi))
            continue
        if name != "atom":
            raise SyntaxError(f"unknown piece {name!r}")
        kw = {}
        for arg in split_top(inner):
            key, _, val = arg.partition("=")
            kw[key.strip()] = val.strip()
        unknown = set(kw) - {"c", "a", "b", "x0", "profile", "j"}
        if unknown:
            raise SyntaxError(f"unknown atom fields {sorted(unknown)}")
        atoms.append(
            GFAtom(
                ac.parse_expr(kw.get("c", "1")),
                _q(kw.get("a", "0")),
                _q(kw.get("b", "0")),
                _q(kw.get("x0", "0")),
                MollifierProfile(kw.get("profile", "bump")),
                int(kw.get("j", "0")),
            )
        )
    return GFElement(tuple(atoms), dom)


def regularity_report(u: GFElement, m: int) -> dict:
    g = seminorm_growth(u, m)
    return {
        "element": str(u),
        "m": m,
        "K_m": [str(x) for x in SeminormSpec(m, u.domain).K],
        "seminorm": {"lower": str(g.lo), "upper": str(g.hi)},
        "moderate": gf_is_moderate(u).to_json(),
        "negligible": gf_is_negligible(u).to_json(),
        "ginf_uniform": ginf_uniform(u, m).to_json(),
    }
