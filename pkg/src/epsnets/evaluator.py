"""Evaluation of sentences under star semantics and eventual eps-semantics.

Star semantics treats every atom as a relation between whole nets, decided
for small eps, and combines atoms with three-valued logic.  Eventual
semantics evaluates the sentence eps by eps and asks whether it holds for
all small eps.  The two agree on transferable sentences; on sentences with
``or``/``not``/``implies`` they can differ once values oscillate between
stages.

Eventual evaluation runs twice.  The first pass collects every expression
whose sign the evaluation depends on; their certified sign thresholds give
a dyadic point eps* below which all of those signs are constant; the
second pass evaluates the sentence at eps* with interval arithmetic.  The
truth at eps* is then the truth on all of (0, eps*].
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Sequence

from . import asymcore as ac
from . import formlang as fl
from . import internalsets as iset
from . import starreal as sr
from .asymcore import AsymptoticExpr, Sign, eventual_sign
from .starreal import Bracketed, GenReal, Piecewise, Symbolic, Verdict

SCHEMA_VERSION = 1


class UnboundedQuantifier(ValueError):
    """A quantifier bound is not a finite representable set."""


class DomainViolation(ValueError):
    """A point lies outside every *K for compact K in the domain."""


class EvaluationError(ValueError):
    """A term could not be evaluated (unbound name, wrong arity, ...)."""


# -- structures --------------------------------------------------------------

@dataclass
class Structure:
    bindings: dict[str, object] = field(default_factory=dict)

    def lookup(self, name: str):
        if name in self.bindings:
            return self.bindings[name]
        if name in fl.CATALOG_SETS:
            return iset.StarCatalog(name)
        raise EvaluationError(f"unbound constant {name!r}")

    @classmethod
    def from_document(cls, doc: fl.Document, base: Mapping[str, object] | None = None) -> "Structure":
        out = dict(base or {})
        for b in doc.bindings:
            out[b.name] = parse_binding(b)
        return cls(out)

    @classmethod
    def from_text(cls, text: str) -> "Structure":
        doc = fl.parse_document(text)
        if doc.sentences:
            raise fl.FormulaSyntaxError("structure files contain only bind headers")
        return cls.from_document(doc)


def parse_binding(b: fl.Binding):
    if b.kind == "real":
        return sr.parse_genreal(b.value)
    if b.kind == "set":
        return iset.parse_set(b.value)
    from . import genfunc

    return genfunc.parse_gf(b.value)


# -- terms -------------------------------------------------------------------

def _real(v, what: str) -> GenReal:
    if isinstance(v, GenReal):
        return v
    raise EvaluationError(f"{what} expects a real, got {v}")


def _step(x: GenReal, sign) -> GenReal:
    x = _real(x, "step")
    if isinstance(x, Piecewise):
        return x.map(lambda e: ac.ONE if sign(e) >= 0 else ac.ZERO, label=f"step({x.label})")
    lo, hi = sr.bounds(x)
    if sign(lo) >= 0:
        return sr.sym(1)
    if sign(hi) < 0:
        return sr.sym(0)
    return sr.bracket(ac.ZERO, ac.ONE)


def apply_function(name: str, args: Sequence, sign=eventual_sign) -> object:
    if name == "finset":
        return iset.FiniteListNet(tuple(_real(a, "finset") for a in args))
    if name == "closed":
        a, b = (_real(x, "closed") for x in args)
        if not (isinstance(a, Symbolic) and isinstance(b, Symbolic)):
            raise EvaluationError("closed needs symbolic endpoints")
        if a.expr.is_constant and b.expr.is_constant:
            return iset.StarCatalog("closed", a.expr.constant_value, b.expr.constant_value)
        return iset.IntervalNet(a.expr, b.expr)
    want = fl.CATALOG_FUNCTIONS.get(name)
    if want is None:
        raise EvaluationError(f"unknown function {name!r}")
    if len(args) != want:
        raise EvaluationError(f"{name} takes {want} argument(s), got {len(args)}")
    xs = [_real(a, name) for a in args]
    if name == "+":
        return sr.add(xs[0], xs[1], sign)
    if name == "*":
        return sr.mul(xs[0], xs[1], sign)
    if name == "-":
        return sr.sub(xs[0], xs[1], sign)
    if name == "neg":
        return sr.neg(xs[0], sign)
    if name == "abs":
        return sr.gabs(xs[0], sign)
    if name == "sq":
        return sr.mul(xs[0], xs[0], sign)
    if name == "recip":
        return sr.reciprocal(xs[0])
    return _step(xs[0], sign)


def eval_term(t, s: Structure, env: Mapping[str, object], sign=eventual_sign):
    if isinstance(t, fl.Var):
        if t.name not in env:
            raise EvaluationError(f"variable {t.name!r} is unbound")
        return env[t.name]
    if isinstance(t, fl.Const):
        return s.lookup(t.name)
    if isinstance(t, fl.Lit):
        return Symbolic(t.value)
    if isinstance(t, fl.Tup):
        return tuple(eval_term(x, s, env, sign) for x in t.items)
    if isinstance(t, fl.App):
        arg = eval_term(t.arg, s, env, sign)
        args = arg if isinstance(t.arg, fl.Tup) else (arg,)
        return apply_function(t.fn, args, sign)
    raise TypeError(f"not a term: {t!r}")


def _elements(bound, what: str) -> tuple:
    if isinstance(bound, iset.FiniteListNet):
        return bound.elements
    if isinstance(bound, iset.NatThresholdNet) and bound.lower is None and bound.upper.is_constant:
        top = int(bound.upper.constant_value)
        return tuple(sr.sym(n) for n in range(0, top + 1))
    raise UnboundedQuantifier(f"{what} ranges over {bound}, which is not a finite representable set")


# -- star semantics ----------------------------------------------------------

def _atom(f: fl.Atom, s: Structure, env, sign, stages: int) -> Verdict:
    a = eval_term(f.lhs, s, env, sign)
    b = eval_term(f.rhs, s, env, sign)
    if f.kind == "in":
        if not isinstance(b, iset.InternalSet):
            raise EvaluationError(f"right side of 'in' is not a set: {b}")
        return iset.member(_real(a, "in"), b, sign, stages)
    if f.kind == "eq":
        if isinstance(a, tuple) or isinstance(b, tuple):
            if not (isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b)):
                return Verdict.proved(False)
            return sr.all_of(sr.eq(x, y, sign, stages) for x, y in zip(a, b))
        return sr.eq(_real(a, "="), _real(b, "="), sign, stages)
    a, b = _real(a, f.rel), _real(b, f.rel)
    if f.rel == "<=":
        return sr.leq(a, b, sign, stages)
    if f.rel == ">=":
        return sr.leq(b, a, sign, stages)
    if f.rel == "neq" and f.starred:
        return sr.neq_star(a, b, sign, stages)
    rel = s.bindings.get(f.rel)
    if callable(rel):
        return rel(a, b)
    raise EvaluationError(f"unknown relation {f.rel!r}")


def _involves_piecewise(values) -> bool:
    return any(isinstance(v, Piecewise) for v in values)


def eval_star(f, s: Structure, env: Mapping[str, object] | None = None, stages: int = sr.DEFAULT_STAGES) -> Verdict:
    """Three-valued evaluation with atoms read as relations between nets."""
    env = dict(env or {})
    return _star(f, s, env, stages)


def _star(f, s, env, stages) -> Verdict:
    if isinstance(f, fl.Atom):
        return _atom(f, s, env, eventual_sign, stages)
    if isinstance(f, fl.And):
        left = _star(f.left, s, env, stages)
        return left if left.proved_false else left & _star(f.right, s, env, stages)
    if isinstance(f, fl.Or):
        left = _star(f.left, s, env, stages)
        return left if left.proved_true else left | _star(f.right, s, env, stages)
    if isinstance(f, fl.Not):
        return ~_star(f.arg, s, env, stages)
    if isinstance(f, fl.Implies):
        left = _star(f.left, s, env, stages)
        return Verdict.proved(True) if left.proved_false else ~left | _star(f.right, s, env, stages)
    if isinstance(f, fl.GuardedForall):
        return _star(f.desugar(), s, env, stages)
    elems = _elements(eval_term(f.bound, s, env), f"{f.var}")
    results = []
    for e in elems:
        v = _star(f.body, s, {**env, f.var: e}, stages)
        results.append(v)
        if isinstance(f, fl.Forall) and v.proved_false:
            return v
        if isinstance(f, fl.Exists) and v.proved_true:
            return v
    if isinstance(f, fl.Forall):
        return sr.all_of(results)
    out = sr.any_of(results)
    if out.proved_false and len(elems) > 1 and _involves_piecewise(_values_in(s, env)):
        # the internal set also contains nets glued from its listed elements
        return Verdict.unknown("glued elements not enumerated")
    return out


def _values_in(s: Structure, env) -> list:
    out = []
    for v in list(s.bindings.values()) + list(env.values()):
        if isinstance(v, iset.FiniteListNet):
            out.extend(v.elements)
        elif isinstance(v, GenReal):
            out.append(v)
    return out


# -- eventual semantics ------------------------------------------------------

class _Recorder:
    """Sign oracle for the first pass: eventual signs, recording each query."""

    def __init__(self):
        self.exprs: dict[AsymptoticExpr, Sign] = {}

    def __call__(self, e: AsymptoticExpr) -> Sign:
        sg = self.exprs.get(e)
        if sg is None:
            sg = self.exprs[e] = eventual_sign(e)
        return sg


class _AtPoint:
    """Sign oracle for the second pass: interval sign at eps* = 2^-k."""

    def __init__(self, k: int):
        self.k = k
        self.missing: list[AsymptoticExpr] = []

    def __call__(self, e: AsymptoticExpr) -> Sign:
        if e.is_zero:
            return Sign.ZERO
        if ac.sign_threshold(e) > self.k:
            self.missing.append(e)
        sg = ac.sign_at(e, ("dyadic", self.k))
        if sg is None:
            raise sr.Undecided(f"sign of {e} at 2^-{self.k}")
        return sg


def _pointwise(f, s, env, sign, stages) -> Verdict:
    """Classical evaluation with a fixed sign oracle (two-valued unless a
    bracket leaves an atom open)."""
    if isinstance(f, fl.Atom):
        return _atom(f, s, env, sign, stages)
    if isinstance(f, fl.And):
        return _pointwise(f.left, s, env, sign, stages) & _pointwise(f.right, s, env, sign, stages)
    if isinstance(f, fl.Or):
        return _pointwise(f.left, s, env, sign, stages) | _pointwise(f.right, s, env, sign, stages)
    if isinstance(f, fl.Not):
        return ~_pointwise(f.arg, s, env, sign, stages)
    if isinstance(f, fl.Implies):
        return ~_pointwise(f.left, s, env, sign, stages) | _pointwise(f.right, s, env, sign, stages)
    if isinstance(f, fl.GuardedForall):
        return _pointwise(f.desugar(), s, env, sign, stages)
    elems = _elements(eval_term(f.bound, s, env, sign), f.var)
    parts = [_pointwise(f.body, s, {**env, f.var: e}, sign, stages) for e in elems]
    return sr.all_of(parts) if isinstance(f, fl.Forall) else sr.any_of(parts)


def _two_pass(f, s, env, stages) -> tuple[Verdict, int | None]:
    rec = _Recorder()
    first = _pointwise(f, s, env, rec, stages)
    exprs = set(rec.exprs)
    for _ in range(8):
        k = max((ac.sign_threshold(e) for e in exprs), default=1)
        at = _AtPoint(k)
        try:
            second = _pointwise(f, s, env, at, stages)
        except sr.Undecided:
            return Verdict.unknown("interval sign undecided"), k
        if not at.missing:
            if second.is_proved and first.is_proved and second.value != first.value:
                raise AssertionError("eventual passes disagree")  # certified thresholds make this impossible
            return second, k
        exprs.update(at.missing)
    return Verdict.unknown("threshold search did not settle"), None


def _collect_piecewise(s: Structure, env) -> list[Piecewise]:
    seen: dict[int, Piecewise] = {}
    for v in _values_in(s, env):
        if isinstance(v, Piecewise):
            seen.setdefault(id(v), v)
    return list(seen.values())


def _substitute(s: Structure, env, table: Mapping[int, GenReal]):
    def sub(v):
        if isinstance(v, Piecewise) and id(v) in table:
            return table[id(v)]
        if isinstance(v, iset.FiniteListNet):
            return iset.FiniteListNet(tuple(sub(e) for e in v.elements))
        return v

    return Structure({k: sub(v) for k, v in s.bindings.items()}), {k: sub(v) for k, v in env.items()}


def eval_eventual(f, s: Structure, env: Mapping[str, object] | None = None, stages: int = sr.DEFAULT_STAGES) -> Verdict:
    """Truth of the eps-indexed sentence for all small eps."""
    env = dict(env or {})
    pws = _collect_piecewise(s, env)
    if not pws:
        return _two_pass(f, s, env, stages)[0]
    sc = sr.scenarios(pws)
    if sc is not None:
        inst, realized = sc
        results = []
        for values in inst:
            s2, env2 = _substitute(s, env, {id(p): v for p, v in zip(pws, values)})
            results.append(_two_pass(f, s2, env2, stages)[0])
        if all(r.proved_true for r in results):
            return Verdict.proved(True)
        if realized and any(r.proved_false for r in results):
            return Verdict.proved(False)
        return Verdict.unknown("scenario undecided")
    return _eventual_by_stages(f, s, env, pws, stages)


def _eventual_by_stages(f, s, env, pws, stages) -> Verdict:
    schedules = {p.schedule for p in pws}
    if len(schedules) != 1:
        return Verdict.unknown("piecewise schedules differ")
    ref = pws[0]
    outcomes = []
    for n in range(1, stages + 1):
        lo, hi = ref.interval(n)
        s2, env2 = _substitute(s, env, {id(p): Symbolic(p.stage(n).expr) for p in pws})

        def interval_sign(e, lo=lo, hi=hi):
            sg = ac.sign_on_interval(e, lo, hi)
            if sg is None:
                raise sr.Undecided(str(e))
            return sg

        try:
            v = _pointwise(f, s2, env2, interval_sign, stages)
        except sr.Undecided:
            return Verdict.unknown("stage undecided")
        if not v.is_proved:
            return Verdict.unknown("stage undecided")
        outcomes.append(v.value)
    return Verdict.evidence(all(outcomes[len(outcomes) // 2 :]), stages)


# -- transfer harness --------------------------------------------------------

@dataclass(frozen=True)
class TransferReport:
    sentence: str
    certificate: fl.TransferCertificate
    star_verdict: Verdict
    eventual_verdict: Verdict
    agrees: bool | None

    def to_json(self) -> dict:
        return {
            "sentence": self.sentence,
            "certificate": self.certificate.to_json(),
            "star_verdict": self.star_verdict.to_json(),
            "eventual_verdict": self.eventual_verdict.to_json(),
            "agrees": "NotApplicable" if self.agrees is None else self.agrees,
        }


def transfer_check(f, s: Structure, stages: int = sr.DEFAULT_STAGES) -> TransferReport:
    cert = fl.certify(f)
    star_v = eval_star(f, s, stages=stages)
    ev_v = eval_eventual(f, s, stages=stages)
    agrees = star_v.value == ev_v.value if star_v.is_proved and ev_v.is_proved else None
    return TransferReport(fl.to_sexp(f), cert, star_v, ev_v, agrees)


# -- corpus ------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    formula_file: Path
    structure_file: Path | None


def _corpus_dir():
    return resources.files("epsnets") / "corpus"


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    """Read a corpus file: a JSON list of {"formula": ..., "structure": ...}."""
    if path is None:
        base = Path(str(_corpus_dir()))
        path = base / "corpus.json"
    path = Path(path)
    entries = json.loads(path.read_text(encoding="utf-8"))
    out = []
    for item in entries:
        if isinstance(item, (list, tuple)):
            item = {"formula": item[0], "structure": item[1] if len(item) > 1 else None}
        st = item.get("structure")
        out.append(CorpusEntry(path.parent / item["formula"], path.parent / st if st else None))
    return out


def _run_entry(entry: CorpusEntry, stages: int) -> list[TransferReport]:
    doc = fl.parse_document(entry.formula_file.read_text(encoding="utf-8"))
    base = Structure.from_text(entry.structure_file.read_text(encoding="utf-8")).bindings if entry.structure_file else {}
    s = Structure.from_document(doc, base)
    return [transfer_check(f, s, stages) for f in doc.sentences]


def run_corpus(path: str | Path | None = None, stages: int = sr.DEFAULT_STAGES, workers: int = 4) -> list[TransferReport]:
    entries = load_corpus(path)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda e: _run_entry(e, stages), entries))
    return [r for chunk in chunks for r in chunk]


# -- continuity evidence -----------------------------------------------------

@dataclass(frozen=True)
class StandardFunction:
    name: str
    fn: Callable[[GenReal], GenReal]
    lo: Fraction | None  # open domain (lo, hi); None = unbounded
    hi: Fraction | None


STANDARD_FUNCTIONS = {
    "sq": StandardFunction("sq", lambda x: sr.mul(x, x), None, None),
    "abs": StandardFunction("abs", sr.gabs, None, None),
    "neg": StandardFunction("neg", sr.neg, None, None),
    "cube": StandardFunction("cube", lambda x: sr.mul(x, sr.mul(x, x)), None, None),
    "recip": StandardFunction("recip", sr.reciprocal, Fraction(0), None),
    "step": StandardFunction("step", lambda x: _step(x, eventual_sign), None, None),
}


@dataclass(frozen=True)
class ContinuityReport:
    verdict: Verdict
    pairs: tuple[Verdict, ...]

    def to_json(self) -> dict:
        return {"verdict": self.verdict.to_json(), "pairs": [p.to_json() for p in self.pairs]}


def _in_compact(x: GenReal, lo: Fraction | None, hi: Fraction | None) -> bool:
    """x lies in *K for a compact K inside (lo, hi): its bracket stays a
    standard positive distance inside the domain."""
    if isinstance(x, Piecewise):
        return False
    for e in sr.bounds(x):
        lc = ac.limit_class(e)
        if lc.kind is ac.LimitKind.INFINITE:
            return False
        c = lc.value if lc.kind is ac.LimitKind.FINITE else Fraction(0)
        if (lo is not None and c <= lo) or (hi is not None and c >= hi):
            return False
    return True


def continuity_evidence(fname: str, pairs: Sequence[tuple]) -> ContinuityReport:
    """Check x ~ y  =>  f(x) ~ f(y) on infinitely close pairs inside the domain."""
    f = STANDARD_FUNCTIONS.get(fname)
    if f is None:
        raise EvaluationError(f"unknown standard function {fname!r}")
    out = []
    for x, y in pairs:
        x, y = sr.genreal(x), sr.genreal(y)
        if not (_in_compact(x, f.lo, f.hi) and _in_compact(y, f.lo, f.hi)):
            raise DomainViolation(f"({x}, {y}) is not inside *K for a compact K in the domain of {fname}")
        if not sr.approx_eq(x, y).proved_true:
            raise ValueError(f"{x} and {y} are not certified infinitely close")
        out.append(sr.approx_eq(f.fn(x), f.fn(y)))
    ok = all(v.proved_true for v in out)
    return ContinuityReport(Verdict.evidence(ok, len(out)), tuple(out))
