"""Generate certified sup brackets for bump and gauss derivatives.

For each order k the supremum of |phi^(k)| is attained at a zero of
phi^(k+1) (the profiles vanish at infinity / at the support boundary).
Those zeros are the real roots of P_{k+1} (bump, restricted to (-1, 1)) or
Q_{k+1} (gauss).  sympy isolates every root in a rational interval of
width < 1e-40; interval arithmetic then encloses phi^(k) on each isolating
interval.  The bracket is [max lower |.|, max upper |.|], rounded outward
to a 2^-48 grid.

The gauss envelope sup |Q_k(t)| exp(-t^2/2) uses the roots of Q_k' - t Q_k.

Usage: python3 scripts/gen_profile_tables.py [MAX_ORDER]
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import sympy

from epsnets import asymcore as ac
from epsnets.profiles import _dyadic_ceil, _dyadic_floor, bump_poly, gauss_poly, padd, pderiv, pmul, pscale, T

OUT = Path(__file__).resolve().parent.parent / "src" / "epsnets" / "data" / "profiles.json"
t = sympy.Symbol("t")


def roots(poly, lo=None, hi=None):
    p = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(poly)), t)
    if p.is_zero or p.degree() == 0:
        return []
    out = []
    for (a, b), _mult in p.intervals(eps=sympy.Rational(1, 10**40)):
        a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
        if lo is not None and b <= lo or hi is not None and a >= hi:
            continue
        out.append((a, b))
    return out


def enclose(fn, a: Fraction, b: Fraction):
    ctx = ac._ctx(256)
    x = ctx.mpf([ctx.mpf(a.numerator) / a.denominator, ctx.mpf(b.numerator) / b.denominator])
    enc = ac._enclosure(fn(ctx, x))
    lo, hi = enc.lo, enc.hi
    if lo > 0:
        return lo, hi
    if hi < 0:
        return -hi, -lo
    return 0, max(-lo, hi)


def bracket(fn, isolating):
    best_lo, best_hi = None, None
    for a, b in isolating:
        lo, hi = enclose(fn, a, b)
        best_lo = lo if best_lo is None or lo > best_lo else best_lo
        best_hi = hi if best_hi is None or hi > best_hi else best_hi
    return [str(_dyadic_floor(best_lo)), str(_dyadic_ceil(best_hi))]


def peval(ctx, poly, x):
    acc = ctx.mpf(0)
    for c in reversed(poly):
        acc = acc * x + ctx.mpf(c.numerator) / c.denominator
    return acc


def bump_fn(k):
    p = bump_poly(k)

    def fn(ctx, x):
        s = 1 - x * x
        return peval(ctx, p, x) / s ** (2 * k) * ctx.exp(-1 / s)

    return fn


def gauss_fn(k, half=False):
    q = gauss_poly(k)

    def fn(ctx, x):
        return peval(ctx, q, x) * ctx.exp(-x * x / 2 if half else -x * x)

    return fn


def main(max_order: int) -> None:
    bump, gauss, env = [], [], []
    for k in range(max_order + 1):
        bump.append(bracket(bump_fn(k), roots(bump_poly(k + 1), Fraction(-1), Fraction(1))))
        gauss.append(bracket(gauss_fn(k), roots(gauss_poly(k + 1))))
        q = gauss_poly(k)
        env.append(bracket(gauss_fn(k, half=True), roots(padd(pderiv(q), pscale(pmul(T, q), -1)))))
        print(f"k={k}: bump {float(Fraction(bump[-1][1])):.6g}, gauss {float(Fraction(gauss[-1][1])):.6g}", file=sys.stderr)
    data = {
        "max_order": max_order,
        "method": "sympy root isolation (width < 1e-40) + mpmath interval enclosure, outward 2^-48 rounding",
        "bump": {"sup": bump},
        "gauss": {"sup": gauss, "envelope": env},
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 20)
