"""Size classes, valuations and spill witnesses on symbolic nets."""

from epsnets import colombeau as col
from epsnets import internalsets as iset
from epsnets import starreal as sr

for text in ("eps", "eps^-1", "exp(-1*eps^-1)", "exp(eps^-1)", "3*eps^2 + eps^5", "eps^2*log"):
    x = sr.parse_genreal(text)
    size = sr.classify(x)
    print(
        f"{text:<18} infinitesimal={size.infinitesimal.status.value:<12}"
        f" moderate={col.is_moderate(x).status.value:<12} v={col.valuation(x)}"
    )

print()
print("sharp distance d(rho, 2 rho) =", col.sharp_dist("eps", "2*eps"))
print("sharp distance d(1, 1 + rho^3) =", col.sharp_dist(1, "1 + eps^3"))

print()
for f in ("eps^-1", "log", "eps^(-1/2)"):
    w = iset.overspill_witness(iset.at_most(f))
    print(f"overspill  N <= {f:<10} -> {w.element} (infinitely large: {w.size.infinitely_large.status.value})")
for g in ("3+eps", "eps*log"):
    w = iset.underspill_witness(iset.at_least(g))
    print(f"underspill N >= {g:<10} -> standard member {w.standard}")
try:
    iset.overspill_witness(iset.at_most("5"))
except iset.HypothesisFails as exc:
    print(f"overspill  N <= 5          -> rejected: {exc}")
