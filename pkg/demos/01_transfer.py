"""Transfer on the built-in corpus, and the disjunction that does not transfer.

Run with ``python3 demos/01_transfer.py``.
"""

from epsnets import evaluator as ev
from epsnets import suite

print("Certified sentences: the internal reading agrees with 'eventually in eps'.")
for r in ev.run_corpus()[:6]:
    print(f"  {r.certificate.status.value:<14} star={r.star_verdict.status.value:<12} eventual={r.eventual_verdict.status.value:<12} {r.sentence}")
print("  ...")

r = suite.or_counterexample_report()
print()
print("The idempotent e = [0, 1, 0, 1, ...] satisfies e*e = e, yet neither e = 0 nor e = 1.")
print(f"  sentence:    {r.sentence}")
print(f"  certificate: {r.certificate.status.value}({r.certificate.rule}) at {r.certificate.path}")
print(f"  star:        {r.star_verdict.status.value}")
print(f"  eventual:    {r.eventual_verdict.status.value}")
