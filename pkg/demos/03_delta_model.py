"""The delta-model eps^-1 bump(x/eps) lies in G but not in G-infinity.

Its growth exponent 1 + alpha is unbounded in the derivative order, which
is visible uniformly on any compact containing 0 and pointwise at rho/2,
but disappears away from 0.
"""

from epsnets import genfunc as gf

d = gf.delta_model()
print("element:", d)
for m in (1, 2, 3):
    g = gf.seminorm_growth(d, m)
    print(f"  p_{m} in [{g.lo}, {g.hi}]")
print("moderate:          ", gf.gf_is_moderate(d).status.value)
print("negligible:        ", gf.gf_is_negligible(d).status.value)
r = gf.ginf_uniform(d, 2)
print("G-infinity on K_2: ", r.verdict.status.value, "-", r.reason)
for x in ("1", "1/2*eps", "eps"):
    p = gf.ginf_pointwise_at(d, x)
    print(f"regular at {x:<8}  ", p.verdict.status.value, "-", p.reason)
loc = gf.ginf_local_check(d, 0, 2)
print(f"away from 0 (n = {loc.n}):", loc.local.status.value, "-", loc.reason)
