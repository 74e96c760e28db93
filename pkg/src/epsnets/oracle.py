"""Numeric sampling on the dyadic grid eps = 2^-k.

This is evidence, never proof: the symbolic layers do not consult it.  It
exists so that tests and the acceptance suite can check every proved
verdict against plain high-precision arithmetic on the tail of the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from mpmath import mp

from .asymcore import AsymptoticExpr

DEFAULT_GRID = (10, 60)
DEFAULT_TAIL = 10


def grid(k_min: int = DEFAULT_GRID[0], k_max: int = DEFAULT_GRID[1]) -> range:
    return range(k_min, k_max + 1)


def expr_function(a: AsymptoticExpr) -> Callable[[object], object]:
    """Plain mpmath evaluation of ``a`` at a given eps (an mpf)."""

    def f(eps):
        L = mp.log(1 / eps)
        total = mp.mpf(0)
        for c, m in a.terms:
            v = mp.mpf(c.numerator) / c.denominator
            if m.u != 0:
                v *= mp.exp(mp.mpf(m.u.numerator) / m.u.denominator * eps ** (-mp.mpf(m.r.numerator) / m.r.denominator))
            if m.q != 0:
                v *= eps ** (mp.mpf(m.q.numerator) / m.q.denominator)
            if m.k != 0:
                v *= L**m.k
            total += v
        return total

    return f


def sample(f: Callable | AsymptoticExpr, k_min: int = DEFAULT_GRID[0], k_max: int = DEFAULT_GRID[1], dps: int = 60) -> list:
    if isinstance(f, AsymptoticExpr):
        f = expr_function(f)
    with mp.workdps(dps):
        return [f(mp.ldexp(mp.mpf(1), -k)) for k in grid(k_min, k_max)]


def _sgn(v) -> int:
    return 1 if v > 0 else (-1 if v < 0 else 0)


@dataclass(frozen=True)
class TailReport:
    signs: tuple[int, ...]
    stabilized: bool
    sign: int | None


def tail_sign(f: Callable | AsymptoticExpr, k_min: int = DEFAULT_GRID[0], k_max: int = DEFAULT_GRID[1], tail: int = DEFAULT_TAIL) -> TailReport:
    """Sign on the last ``tail`` grid points, if they all agree."""
    signs = tuple(_sgn(v) for v in sample(f, k_min, k_max))
    last = signs[-tail:]
    ok = len(set(last)) == 1
    return TailReport(signs, ok, last[0] if ok else None)


def contradicts(claimed_sign: int, f: Callable | AsymptoticExpr, **kw) -> bool:
    """True when the stabilized grid tail has a sign different from ``claimed_sign``."""
    rep = tail_sign(f, **kw)
    return rep.stabilized and rep.sign != claimed_sign


def diverges(ratio: Callable | AsymptoticExpr, k_min: int = DEFAULT_GRID[0], k_max: int = DEFAULT_GRID[1], tail: int = DEFAULT_TAIL) -> bool:
    """Ratio increasing along the tail of the grid and above 1 at its end."""
    vals = sample(ratio, k_min, k_max)[-tail:]
    return all(b > a for a, b in zip(vals, vals[1:])) and vals[-1] > 1


def vanishes(f: Callable | AsymptoticExpr, k_min: int = DEFAULT_GRID[0], k_max: int = DEFAULT_GRID[1], tail: int = DEFAULT_TAIL) -> bool:
    """|f| decreasing along the tail and below 1 at its end."""
    vals = [abs(v) for v in sample(f, k_min, k_max)[-tail:]]
    return all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] < 1


def all_signs(values: Sequence) -> set[int]:
    return {_sgn(v) for v in values}
