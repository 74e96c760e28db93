"""Mollifier profiles and exact derivative formulas.

bump(t)  = exp(-1/(1 - t^2)) on (-1, 1), 0 elsewhere
gauss(t) = exp(-t^2)

With s = 1 - t^2, the k-th bump derivative is P_k(t) / s^(2k) * bump(t) where
P_0 = 1 and P_{k+1} = P_k' s^2 + 4k t s P_k - 2t P_k.  The k-th gauss
derivative is Q_k(t) * gauss(t) with Q_0 = 1 and Q_{k+1} = Q_k' - 2t Q_k.
Polynomials are lists of Fractions, lowest degree first.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import asymcore as ac

PROFILES = ("sin", "cos", "bump", "gauss")

Poly = tuple[Fraction, ...]


def _trim(p: list[Fraction]) -> Poly:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pmul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def pderiv(p: Poly) -> Poly:
    return _trim([i * p[i] for i in range(1, len(p))] or [Fraction(0)])


def pscale(p: Poly, c) -> Poly:
    return _trim([c * a for a in p])


T: Poly = (Fraction(0), Fraction(1))
S: Poly = (Fraction(1), Fraction(0), Fraction(-1))  # 1 - t^2


@functools.lru_cache(maxsize=None)
def bump_poly(k: int) -> Poly:
    if k == 0:
        return (Fraction(1),)
    p = bump_poly(k - 1)
    j = k - 1
    s2 = pmul(S, S)
    return padd(padd(pmul(pderiv(p), s2), pscale(pmul(pmul(T, S), p), 4 * j)), pscale(pmul(T, p), -2))


@functools.lru_cache(maxsize=None)
def gauss_poly(k: int) -> Poly:
    if k == 0:
        return (Fraction(1),)
    q = gauss_poly(k - 1)
    return padd(pderiv(q), pscale(pmul(T, q), -2))


def peval(ctx, p: Poly, t):
    acc = ctx.mpf(0)
    for a in reversed(p):
        acc = acc * t + ctx.mpf(a.numerator) / a.denominator
    return acc


def profile_value(name: str, k: int, t: Fraction, prec: int = 160):
    """Certified enclosure of the k-th derivative of the profile at rational t,
    as an mpmath interval."""
    ctx = ac._ctx(prec)
    ti = ctx.mpf(t.numerator) / t.denominator
    if name == "sin":
        return [ctx.sin, ctx.cos, lambda x: -ctx.sin(x), lambda x: -ctx.cos(x)][k % 4](ti)
    if name == "cos":
        return [ctx.cos, lambda x: -ctx.sin(x), lambda x: -ctx.cos(x), ctx.sin][k % 4](ti)
    if name == "gauss":
        return peval(ctx, gauss_poly(k), ti) * ctx.exp(-ti * ti)
    if name == "bump":
        if abs(t) >= 1:
            return ctx.mpf(0)
        s = 1 - ti * ti
        return peval(ctx, bump_poly(k), ti) / s ** (2 * k) * ctx.exp(-1 / s)
    raise ValueError(f"unknown profile {name!r}")


def _dyadic_floor(x, bits: int = 48) -> Fraction:
    m, e = x.man_exp
    f = Fraction(int(m)) * Fraction(2) ** int(e)
    scale = 2**bits
    return Fraction((f * scale).__floor__(), scale)


def _dyadic_ceil(x, bits: int = 48) -> Fraction:
    m, e = x.man_exp
    f = Fraction(int(m)) * Fraction(2) ** int(e)
    scale = 2**bits
    return Fraction(-((-f * scale).__floor__()), scale)


def abs_value_bracket(name: str, k: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """Rational (lower, upper) for |profile^(k)(t)|."""
    enc = ac._enclosure(profile_value(name, k, t))
    lo, hi = enc.lo, enc.hi
    if lo > 0:
        return _dyadic_floor(lo), _dyadic_ceil(hi)
    if hi < 0:
        return _dyadic_floor(-hi), _dyadic_ceil(-lo)
    return Fraction(0), _dyadic_ceil(max(-lo, hi))


@dataclass(frozen=True)
class SupBound:
    lower: Fraction
    upper: Fraction


@functools.lru_cache(maxsize=1)
def _table() -> dict:
    raw = json.loads((resources.files("epsnets") / "data" / "profiles.json").read_text(encoding="utf-8"))
    out = {}
    for name in ("bump", "gauss"):
        out[name] = [SupBound(Fraction(lo), Fraction(hi)) for lo, hi in raw[name]["sup"]]
    out["gauss_envelope"] = [SupBound(Fraction(lo), Fraction(hi)) for lo, hi in raw["gauss"]["envelope"]]
    out["max_order"] = raw["max_order"]
    return out


def max_order() -> int:
    return _table()["max_order"]


def sup_bound(name: str, k: int) -> SupBound:
    """Bracket for sup_t |profile^(k)(t)|."""
    if name in ("sin", "cos"):
        return SupBound(Fraction(1), Fraction(1))
    tab = _table()[name]
    if k >= len(tab):
        raise IndexError(f"{name} derivative order {k} beyond the catalog (max {len(tab) - 1})")
    return tab[k]


def gauss_envelope(k: int) -> SupBound:
    """Bracket for sup_t |gauss^(k)(t)| * exp(t^2 / 2)."""
    tab = _table()["gauss_envelope"]
    if k >= len(tab):
        raise IndexError(f"gauss envelope order {k} beyond the catalog")
    return tab[k]


def support_radius(name: str) -> Fraction | None:
    return Fraction(1) if name == "bump" else None
