"""Completeness in the sharp topology: the series sum of rho^k.

The limit is a piecewise net whose n-th stage is the partial sum S_n.
"""

from fractions import Fraction

from epsnets import colombeau as col

res = col.series_limit_demo(lambda k: 1, lambda k: k, stages=20)
print("Cauchy certificate:", res.cauchy.status.value)
print("tail check v(u - S_n) >= n + 1 for n <= 20:", res.tail.status.value)
for n in (1, 2, 3, 20):
    print(f"  S_{n} = {res.partial_sums[n - 1]}")

try:
    col.series_limit_demo(lambda k: 1, lambda k: 1 - Fraction(1, k), stages=10)
except col.ExponentsNotDivergent as exc:
    print("exponents 1 - 1/k:", exc)
