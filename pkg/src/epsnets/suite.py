"""The acceptance gate: eleven checks over every layer of the library.

Each check returns a :class:`CriterionResult`.  Every proved sign claim made
along the way is logged, and the last check replays the log against the
dyadic-grid oracle.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import asymcore as ac
from . import colombeau as col
from . import evaluator as ev
from . import formlang as fl
from . import genfunc as gf
from . import internalsets as iset
from . import oracle
from . import starreal as sr
from .asymcore import AsymptoticExpr, Monomial, eventual_sign
from .starreal import Status, Symbolic


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class ClaimLog:
    """Proved eventual signs, keyed by expression, for the oracle replay."""

    claims: dict[AsymptoticExpr, int] = field(default_factory=dict)
    conflicts: list[str] = field(default_factory=list)

    def sign(self, e: AsymptoticExpr) -> int:
        s = eventual_sign(e)
        prev = self.claims.setdefault(e, s)
        if prev != s:
            self.conflicts.append(f"{e}: {prev} vs {s}")
        return s


@dataclass(frozen=True)
class SuiteConfig:
    grid: tuple[int, int] = oracle.DEFAULT_GRID
    stages: int = sr.DEFAULT_STAGES
    alpha_max: int = gf.ALPHA_MAX
    seed: int = 20240601
    ring_cases: int = 10_000
    oracle_sample: int | None = None


# -- random symbolic nets ----------------------------------------------------

def random_expr(rng: random.Random, terms: int = 3, allow_exp: bool = True, allow_log: bool = True) -> AsymptoticExpr:
    out = ac.ZERO
    for _ in range(rng.randint(1, terms)):
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2]))
        q = Fraction(rng.randint(-4, 4), 2)
        k = rng.choice([0, 0, 1]) if allow_log else 0
        u = rng.choice([0, 0, 0, 0, -1, 1]) if allow_exp else 0
        out = out + AsymptoticExpr([(c, Monomial(u=u, r=1, q=q, k=k))])
    return out


def random_moderate(rng: random.Random) -> AsymptoticExpr:
    e = random_expr(rng, allow_exp=False)
    return e if not e.is_zero else ac.ONE


def random_negligible(rng: random.Random) -> AsymptoticExpr:
    c = Fraction(rng.choice([-2, -1, 1, 2]))
    return AsymptoticExpr([(c, Monomial(u=-Fraction(rng.randint(1, 3)), r=1, q=Fraction(rng.randint(-6, 6), 2)))])


# -- the criteria ------------------------------------------------------------

def c1_corpus(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    t = time.perf_counter()
    reports = ev.run_corpus(stages=cfg.stages)
    dt = time.perf_counter() - t
    certified = [r for r in reports if r.certificate.status is not fl.CertStatus.NOT_CERTIFIED]
    agree = [r for r in certified if r.agrees is True]
    ok = len(certified) >= 20 and len(agree) == len(certified) == len(reports) and dt < 5
    return ok, f"{len(agree)}/{len(reports)} sentences certified and agreeing {'within' if dt < 5 else 'over'} 5s"


def or_counterexample_report(stages: int = sr.DEFAULT_STAGES) -> ev.TransferReport:
    path = Path(str(ev._corpus_dir())) / "or_counterexample.sexp"
    doc = fl.parse_document(path.read_text(encoding="utf-8"))
    return ev.transfer_check(doc.sentences[0], ev.Structure.from_document(doc), stages)


def c2_or_failure(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    r = or_counterexample_report(cfg.stages)
    c = r.certificate
    ok = (
        c.status is fl.CertStatus.NOT_CERTIFIED
        and c.rule == "F7"
        and r.star_verdict.status is Status.PROVED_FALSE
        and r.eventual_verdict.status is Status.PROVED_TRUE
    )
    return ok, f"certificate {c.status.value}({c.rule}) at {c.path}; star {r.star_verdict.status.value}, eventual {r.eventual_verdict.status.value}"


def c3_ring_laws(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    rng = random.Random(cfg.seed)
    fails, cases = [], 0
    while cases < cfg.ring_cases:
        a, b, c = (random_expr(rng, 2) for _ in range(3))
        law = cases % 5
        if law == 0:
            ok = a + b == b + a and a * b == b * a
        elif law == 1:
            ok = (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
        elif law == 2:
            ok = a * (b + c) == a * b + a * c
        elif law == 3:
            # a <= b implies a + c <= b + c
            ok = log.sign(b - a) < 0 or log.sign((b + c) - (a + c)) >= 0
        else:
            # 0 <= a and 0 <= b imply 0 <= ab; a <= b or b <= a
            sa, sb = log.sign(a), log.sign(b)
            ok = (sa < 0 or sb < 0 or log.sign(a * b) >= 0) and log.sign(b - a) in (-1, 0, 1)
        if not ok:
            fails.append(f"law {law}: a={a}, b={b}, c={c}")
        cases += 1
    return not fails, f"{cases} cases, {len(fails)} failures"


def c4_classification(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    rho = Symbolic(ac.EPS)
    checks = [
        ("rho infinitesimal", sr.classify(rho).infinitesimal, oracle.vanishes(ac.EPS)),
        ("1/rho infinitely large", sr.classify(Symbolic(ac.eps_pow(-1))).infinitely_large, oracle.diverges(ac.eps_pow(-1))),
        (
            "exp(-1/eps) negligible",
            col.is_negligible("exp(-1*eps^-1)"),
            all(oracle.vanishes(ac.parse_expr("exp(-1*eps^-1)") * ac.eps_pow(-m)) for m in range(0, 13)),
        ),
        (
            "exp(1/eps) not moderate",
            ~col.is_moderate("exp(eps^-1)"),
            all(oracle.diverges(ac.parse_expr("exp(eps^-1)") * ac.eps_pow(n)) for n in range(0, 21)),
        ),
    ]
    for m in range(1, 21):
        gap = ac.eps_pow(m) - ac.eps_pow(m + 1)
        checks.append((f"rho^{m} not negligible", ~col.is_negligible(Symbolic(ac.eps_pow(m))), not oracle.contradicts(1, gap)))
        log.sign(ac.eps_pow(m) - ac.eps_pow(m + 1))
    bad = [name for name, v, orc in checks if not (v.proved_true and orc)]
    for e in (ac.EPS, ac.eps_pow(-1), ac.parse_expr("exp(-1*eps^-1)") - ac.eps_pow(20), ac.parse_expr("exp(eps^-1)") - ac.eps_pow(-20)):
        log.sign(e)
    return not bad, f"{len(checks) - len(bad)}/{len(checks)} classification verdicts proved and oracle-confirmed" + (f"; failed: {bad}" if bad else "")


def c5_spills(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    bad = []
    for f in ("eps^-1", "log", "eps^(-1/2)"):
        w = iset.overspill_witness(iset.at_most(f))
        if not (w.membership.proved_true and w.size.infinitely_large.proved_true):
            bad.append(f"overspill {f}")
        log.sign(ac.parse_expr(f) - ac.const(2))
    for g in ("3+eps", "eps*log"):
        w = iset.underspill_witness(iset.at_least(g))
        if not (w.membership.proved_true and w.standard is not None and w.size.finite.proved_true):
            bad.append(f"underspill {g}")
        else:
            log.sign(ac.const(w.standard) - ac.parse_expr(g))
    for kind, A in (("over", iset.at_most("5")), ("over", iset.at_most("2+eps")), ("under", iset.at_least("eps^-1")), ("under", iset.at_least("log"))):
        fn = iset.overspill_witness if kind == "over" else iset.underspill_witness
        try:
            fn(A)
            bad.append(f"{kind}spill accepted {A}")
        except iset.HypothesisFails:
            pass
    return not bad, "3 overspill and 2 underspill witnesses, 4 hypothesis failures rejected" if not bad else f"failed: {bad}"


def c6_valuation(cfg: SuiteConfig, log: ClaimLog, cases: int = 3000) -> tuple[bool, str]:
    rng = random.Random(cfg.seed + 6)
    fails = 0
    v = col.expr_valuation
    for _ in range(cases):
        a, b, c = (random_expr(rng, 3) for _ in range(3))
        va, vb = v(a), v(b)
        vs = v(a + b)
        if not vs >= min(va, vb):
            fails += 1
        if va != vb and vs != min(va, vb):
            fails += 1
        try:
            if v(a * b) != va + vb:
                fails += 1
        except ValueError:
            pass  # +inf + -inf: the product of a negligible and a non-moderate net
        dab, dbc, dac = col.sharp_dist(Symbolic(a), Symbolic(b)), col.sharp_dist(Symbolic(b), Symbolic(c)), col.sharp_dist(Symbolic(a), Symbolic(c))
        if not (dac <= dab or dac <= dbc):
            fails += 1
    return fails == 0, f"{cases} random triples, {fails} failures"


def c7_product_continuity(cfg: SuiteConfig, log: ClaimLog, cases: int = 500) -> tuple[bool, str]:
    rng = random.Random(cfg.seed + 7)
    fails = 0
    for _ in range(cases):
        a, b = random_moderate(rng), random_moderate(rng)
        d1, d2 = random_negligible(rng), random_negligible(rng)
        if not col.product_continuity_check(a, b, d1, d2).proved_true:
            fails += 1
    ex = col.nonmoderate_exhibit("exp(eps^-1)")
    exhibit_ok = ex.product_negligible.proved_false and isinstance(ex.product, Symbolic) and ex.product.expr == ac.ONE
    return fails == 0 and exhibit_ok, f"{cases} moderate pairs, {fails} failures; exhibit a*delta = {ex.product}"


def c8_margin(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    A = iset.IntervalNet("0", "1")
    B = iset.IntervalNet("-1*eps^2", "1+eps^2")
    M = col.sharp_margin(A, B)
    pairs = col.neighbourhood_samples(A, M, count=100, seed=cfg.seed)
    v = col.verify_neighbourhood(A, B, M, pairs)
    for mg in (A.lo - B.lo, B.hi - A.hi):
        log.sign(mg - ac.eps_pow(M))
    return M == 3 and v.proved_true and len(pairs) == 100, f"M = {M}; 100 sampled pairs {v.status.value}"


def c9_series(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    t = time.perf_counter()
    res = col.series_limit_demo(lambda k: 1, lambda k: k, stages=20)
    dt = time.perf_counter() - t
    ok = res.cauchy.proved_true and res.tail.value is True and res.tail.status in (Status.PROVED_TRUE, Status.EVIDENCE) and dt < 5
    return ok, f"Cauchy {res.cauchy.status.value}, v(u - S_n) >= n+1 for n <= 20: {res.tail.status.value}, {'within' if dt < 5 else 'over'} 5s"


def c10_ginf(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    d = gf.delta_model()
    checks = {
        "moderate": gf.gf_is_moderate(d, cfg.alpha_max).proved_true,
        "uniform irregular": gf.ginf_uniform(d, 2).proved_false,
        "regular at 1": gf.ginf_pointwise_at(d, 1).proved_true,
        "irregular at rho/2": gf.ginf_pointwise_at(d, "1/2*eps").proved_false,
        "local regular": gf.ginf_local_check(d, 0, 2).local.proved_true,
        "pointwise/uniform coherent": gf.pointwise_uniform_check(d, 2).coherent,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, "delta-model: " + ", ".join(k for k in checks if k not in bad) + (f"; failed: {bad}" if bad else "")


def c11_oracle(cfg: SuiteConfig, log: ClaimLog) -> tuple[bool, str]:
    rng = random.Random(cfg.seed + 11)
    items = sorted(log.claims.items(), key=lambda kv: str(kv[0]))
    nonzero = [(e, s) for e, s in items if s != 0]
    zeros = [(e, s) for e, s in items if s == 0]
    sample = nonzero if cfg.oracle_sample is None or len(nonzero) <= cfg.oracle_sample else rng.sample(nonzero, cfg.oracle_sample)
    k_min, k_max = cfg.grid
    bad, beyond = [], 0
    for e, s in sample:
        if not oracle.contradicts(s, e, k_min=k_min, k_max=k_max):
            continue
        # a disagreeing tail only counts when the grid tail lies where the
        # sign is certified; otherwise the grid has not reached the regime
        if ac.sign_threshold(e) > k_max - oracle.DEFAULT_TAIL + 1:
            beyond += 1
        else:
            bad.append(str(e))
    bad += [str(e) for e, _ in zeros if not e.is_zero]
    bad += log.conflicts
    return not bad, (
        f"{len(sample) + len(zeros)} of {len(items)} logged sign claims replayed on eps = 2^-k, k = {k_min}..{k_max}; "
        f"{len(bad)} contradictions, {beyond} claims certified only beyond the grid"
    )


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "transfer corpus", c1_corpus),
    (2, "transfer failure exhibit", c2_or_failure),
    (3, "ring and order laws", c3_ring_laws),
    (4, "classification truths", c4_classification),
    (5, "spill witnesses", c5_spills),
    (6, "ultrametric valuation", c6_valuation),
    (7, "product rho-continuity", c7_product_continuity),
    (8, "sharp-neighbourhood margin", c8_margin),
    (9, "completeness demo", c9_series),
    (10, "G versus G-infinity", c10_ginf),
    (11, "oracle coherence", c11_oracle),
]


def run_criterion(number: int, cfg: SuiteConfig | None = None, log: ClaimLog | None = None) -> CriterionResult:
    cfg = cfg or SuiteConfig()
    log = log if log is not None else ClaimLog()
    _, name, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn(cfg, log)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(number, name, ok, detail, time.perf_counter() - t)


def run_all(cfg: SuiteConfig | None = None) -> list[CriterionResult]:
    cfg = cfg or SuiteConfig()
    log = ClaimLog()
    return [run_criterion(n, cfg, log) for n, _, _ in CRITERIA]
