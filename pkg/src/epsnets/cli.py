"""Command-line entry point: ``epsnets <group> <command> ...``.

Exit status 0 on success, 1 when a proved verdict contradicts ``--expect``
(or an acceptance criterion fails), 2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from . import colombeau as col
from . import evaluator as ev
from . import formlang as fl
from . import genfunc as gf
from . import internalsets as iset
from . import oracle
from . import starreal as sr
from . import suite

SCHEMA_VERSION = ev.SCHEMA_VERSION
ENV_PREFIX = "EPSNETS_"


class UsageError(Exception):
    pass


class ExpectationFailed(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    oracle_grid: tuple[int, int] = oracle.DEFAULT_GRID
    stage_budget: int = sr.DEFAULT_STAGES
    alpha_max: int = gf.ALPHA_MAX
    output: str = "text"

    def __post_init__(self):
        k_min, k_max = self.oracle_grid
        if not k_min < k_max:
            raise UsageError("--grid needs k_min < k_max")
        if self.stage_budget < 1 or self.alpha_max < 1:
            raise UsageError("--stages and --alpha-max must be >= 1")

    def to_json(self) -> dict:
        d = asdict(self)
        d["oracle_grid"] = list(self.oracle_grid)
        return d


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"--grid expects k_min:k_max, got {text!r}") from None


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def config_from(args: argparse.Namespace) -> RunConfig:
    """Command-line flags win over EPSNETS_* variables, which win over defaults."""
    grid = args.grid or _env("GRID")
    stages = args.stages if args.stages is not None else _env("STAGES")
    alpha = args.alpha_max if args.alpha_max is not None else _env("ALPHA_MAX")
    as_json = args.json or (_env("JSON") or "").lower() in ("1", "true", "yes")
    try:
        return RunConfig(
            _grid(grid) if grid else oracle.DEFAULT_GRID,
            int(stages) if stages is not None else sr.DEFAULT_STAGES,
            int(alpha) if alpha is not None else gf.ALPHA_MAX,
            "json" if as_json else "text",
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def _expr(text: str) -> sr.GenReal:
    try:
        return sr.parse_genreal(text)
    except (SyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def num_classify(args, cfg: RunConfig):
    out = []
    for text in args.values:
        x = _expr(text)
        size = sr.classify(x, cfg.stage_budget)
        rep = col.classification_report(x)
        out.append({
            "input": sr.format_genreal(x),
            "negligible": rep["negligible"],
            "moderate": rep["moderate"],
            **size.to_json(),
            "valuation": rep["valuation"],
        })
    return out, None


def num_compare(args, cfg: RunConfig):
    a, b = _expr(args.a), _expr(args.b)
    c = sr.eventual_compare(a, b, cfg.stage_budget)
    res = {
        "a": sr.format_genreal(a),
        "b": sr.format_genreal(b),
        "order": "Incomparable" if c.incomparable else (c.order.value if c.order else None),
        "verdict": c.verdict.to_json(),
    }
    if isinstance(a, sr.Symbolic) and isinstance(b, sr.Symbolic):
        tail = oracle.tail_sign(a.expr - b.expr, *cfg.oracle_grid)
        res["oracle"] = {"stabilized": tail.stabilized, "sign": tail.sign}
    return res, [c.verdict]


def num_valuation(args, cfg: RunConfig):
    out = []
    for text in args.values:
        x = _expr(text)
        try:
            v = str(col.valuation(x))
        except col.NotSymbolic as exc:
            raise UsageError(str(exc)) from None
        out.append({"input": sr.format_genreal(x), "valuation": v, "distance_to_zero": str(col.SharpDistance(col.valuation(x)))})
    return out, None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _document(path: str) -> fl.Document:
    return fl.parse_document(_read(path))


def formula_parse(args, cfg: RunConfig):
    doc = _document(args.file)
    return [{"sexp": fl.to_sexp(f), "pretty": fl.pretty(f), "nodes": fl.node_count(f)} for f in doc.sentences], None


def formula_certify(args, cfg: RunConfig):
    doc = _document(args.file)
    out = []
    for f in doc.sentences:
        cert = fl.certify(f)
        out.append({
            "sentence": fl.to_sexp(f),
            "certificate": cert.to_json(),
            "side_conditions": [fl.to_sexp(g) for g in fl.side_conditions(f)],
        })
    return out, None


def _structure(args, doc: fl.Document) -> ev.Structure:
    base = ev.Structure.from_text(_read(args.structure)).bindings if getattr(args, "structure", None) else {}
    return ev.Structure.from_document(doc, base)


def formula_transfer(args, cfg: RunConfig):
    doc = _document(args.file)
    s = _structure(args, doc)
    reports = [ev.transfer_check(f, s, cfg.stage_budget) for f in doc.sentences]
    return [r.to_json() for r in reports], [r.eventual_verdict for r in reports]


def eval_transfer_check(args, cfg: RunConfig):
    path = None if args.corpus in (None, "builtin") else args.corpus
    try:
        reports = ev.run_corpus(path, cfg.stage_budget)
    except OSError as exc:
        raise UsageError(f"cannot read corpus: {exc}") from None
    failures = [r for r in reports if r.certificate.certified and r.agrees is False]
    if failures:
        raise ExpectationFailed(f"{len(failures)} certified sentences disagree: " + "; ".join(r.sentence for r in failures))
    return [r.to_json() for r in reports], None


def _set(text: str) -> iset.InternalSet:
    try:
        return iset.parse_set(text)
    except (SyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse set {text!r}: {exc}") from None


def set_member(args, cfg: RunConfig):
    x, A = _expr(args.x), _set(args.set)
    v = iset.member(x, A, stages=cfg.stage_budget)
    return {"x": sr.format_genreal(x), "set": str(A), "member": v.to_json()}, [v]


def set_max(args, cfg: RunConfig):
    A = _set(args.set)
    try:
        m = iset.star_max(A)
    except iset.NotRepresentable as exc:
        return {"set": str(A), "max": None, "reason": str(exc)}, None
    return {"set": str(A), "max": sr.format_genreal(m)}, None


def set_idp(args, cfg: RunConfig):
    A = _set(args.set)
    params = {}
    for item in args.param or ():
        name, _, value = item.partition("=")
        if not value:
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}")
        params[name] = _expr(value)
    try:
        B = iset.idp_filter(A, args.formula, params, var=args.var)
    except iset.EmptyResult as exc:
        return {"set": str(A), "formula": args.formula, "result": None, "reason": str(exc)}, None
    return {"set": str(A), "formula": args.formula, "result": str(B)}, None


def set_spill(args, cfg: RunConfig):
    A = _set(args.set)
    if not isinstance(A, iset.NatThresholdNet):
        raise UsageError("spill expects nat<=(f) or nat>=(g)")
    fn = iset.overspill_witness if A.shape == "AtMost" else iset.underspill_witness
    try:
        w = fn(A)
    except iset.HypothesisFails as exc:
        return {"set": str(A), "witness": None, "reason": str(exc)}, None
    return {"set": str(A), "kind": "overspill" if A.shape == "AtMost" else "underspill", **w.to_json()}, [w.membership]


def _gf(path: str) -> gf.GFElement:
    text = _read(path).strip()
    if text.startswith("(") or text.startswith(";"):
        doc = fl.parse_document(text)
        binds = [b for b in doc.bindings if b.kind == "gf"]
        if not binds:
            raise UsageError(f"{path} has no (bind NAME gf ...) header")
        text = binds[0].value
    try:
        return gf.parse_gf(text)
    except (SyntaxError, ValueError) as exc:
        raise UsageError(f"cannot parse generalized function in {path}: {exc}") from None


def gf_seminorm(args, cfg: RunConfig):
    u = _gf(args.file)
    g = gf.seminorm_growth(u, args.m, cfg.alpha_max)
    return {"element": str(u), "m": args.m, "K_m": [str(x) for x in gf.SeminormSpec(args.m, u.domain).K], "lower": str(g.lo), "upper": str(g.hi)}, None


def gf_moderate(args, cfg: RunConfig):
    u = _gf(args.file)
    mod, neg = gf.gf_is_moderate(u, cfg.alpha_max), gf.gf_is_negligible(u, cfg.alpha_max)
    return {"element": str(u), "moderate": mod.to_json(), "negligible": neg.to_json()}, [mod]


def gf_ginf(args, cfg: RunConfig):
    u = _gf(args.file)
    if args.at is not None:
        try:
            r = gf.ginf_pointwise_at(u, _expr(args.at))
        except gf.DomainViolation as exc:
            raise UsageError(str(exc)) from None
        return {"element": str(u), "at": args.at, **r.to_json()}, [r.verdict]
    r = gf.ginf_uniform(u, args.m)
    rep = gf.pointwise_uniform_check(u, args.m)
    return {"element": str(u), "m": args.m, **r.to_json(), "pointwise": rep.to_json()}, [r.verdict]


def gf_local(args, cfg: RunConfig):
    u = _gf(args.file)
    try:
        x0 = Fraction(args.x0)
    except ValueError:
        raise UsageError(f"--x0 expects a rational, got {args.x0!r}") from None
    rep = gf.ginf_local_check(u, x0, args.m)
    return {"element": str(u), "x0": args.x0, "m": args.m, **rep.to_json()}, [rep.local]


def suite_all(args, cfg: RunConfig):
    results = suite.run_all(suite.SuiteConfig(grid=cfg.oracle_grid, stages=cfg.stage_budget, alpha_max=cfg.alpha_max))
    failed = [r for r in results if not r.passed]
    payload = [{k: v for k, v in r.to_json().items() if k != "seconds"} for r in results]
    if cfg.output == "text":
        for r in results:
            print(r.line())
    if failed:
        raise ExpectationFailed(f"{len(failed)} acceptance criteria failed: " + ", ".join(str(r.number) for r in failed), payload)
    return payload, None


# -- parser ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", action="store_true", default=d if suppress else False, help="machine-readable output")
    p.add_argument("--grid", default=d, help="oracle grid k_min:k_max (eps = 2^-k)")
    p.add_argument("--stages", type=int, default=d, help="stage budget for piecewise nets")
    p.add_argument("--alpha-max", type=int, default=d, help="derivative budget for generalized functions")
    p.add_argument("--expect", default=d, choices=[s.value for s in sr.Status], help="exit 1 unless the main verdict has this status")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="epsnets", description="Generalized numbers and functions as nets indexed by small eps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(p, suppress=False)
    groups = p.add_subparsers(dest="group", required=True)

    def cmd(group, name, fn, help_):
        c = group.add_parser(name, help=help_)
        _common(c, suppress=True)
        c.set_defaults(fn=fn)
        return c

    num = groups.add_parser("num", help="generalized numbers").add_subparsers(dest="cmd", required=True)
    cmd(num, "classify", num_classify, "size classes and valuation").add_argument("values", nargs="+")
    c = cmd(num, "compare", num_compare, "eventual comparison of two numbers")
    c.add_argument("a")
    c.add_argument("b")
    cmd(num, "valuation", num_valuation, "valuation and sharp distance to 0").add_argument("values", nargs="+")

    form = groups.add_parser("formula", help="formulas and transfer certificates").add_subparsers(dest="cmd", required=True)
    cmd(form, "parse", formula_parse, "canonical and pretty forms").add_argument("file")
    cmd(form, "certify", formula_certify, "transferability certificates").add_argument("file")
    c = cmd(form, "transfer", formula_transfer, "star and eventual evaluation")
    c.add_argument("file")
    c.add_argument("--structure", help="file of (bind ...) headers")

    evg = groups.add_parser("eval", help="transfer corpus").add_subparsers(dest="cmd", required=True)
    cmd(evg, "transfer-check", eval_transfer_check, "run a corpus").add_argument("corpus", nargs="?", default="builtin")

    sets = groups.add_parser("set", help="internal sets").add_subparsers(dest="cmd", required=True)
    c = cmd(sets, "member", set_member, "membership verdict")
    c.add_argument("x")
    c.add_argument("set")
    cmd(sets, "max", set_max, "largest element").add_argument("set")
    c = cmd(sets, "idp", set_idp, "subset cut out by a formula")
    c.add_argument("set")
    c.add_argument("formula")
    c.add_argument("--var", default="x")
    c.add_argument("--param", action="append", help="NAME=VALUE")
    cmd(sets, "spill", set_spill, "overspill or underspill witness").add_argument("set")

    g = groups.add_parser("gf", help="generalized functions").add_subparsers(dest="cmd", required=True)
    c = cmd(g, "seminorm", gf_seminorm, "growth bracket of p_m")
    c.add_argument("file")
    c.add_argument("--m", type=int, default=1)
    cmd(g, "moderate", gf_moderate, "moderateness and negligibility").add_argument("file")
    c = cmd(g, "ginf", gf_ginf, "G-infinity regularity, uniform or at a point")
    c.add_argument("file")
    c.add_argument("--m", type=int, default=2)
    c.add_argument("--at")
    c = cmd(g, "local", gf_local, "regularity away from a point")
    c.add_argument("file")
    c.add_argument("--x0", default="0")
    c.add_argument("--m", type=int, default=2)

    st = groups.add_parser("suite", help="acceptance suite").add_subparsers(dest="cmd", required=True)
    cmd(st, "all", suite_all, "run every acceptance criterion")
    return p


# -- output ------------------------------------------------------------------

def _emit(cfg: RunConfig, command: str, result, error: str | None = None, stream=None) -> None:
    stream = stream or sys.stdout
    if cfg.output == "json":
        doc = {"schema_version": SCHEMA_VERSION, "version": __version__, "command": command, "config": cfg.to_json(), "result": result}
        if error:
            doc["error"] = error
        stream.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return
    if error:
        print(f"error: {error}", file=sys.stderr)
    if result is None or command == "suite all":
        return
    for item in result if isinstance(result, list) else [result]:
        stream.write(_text(item) + "\n")


def _text(item) -> str:
    if not isinstance(item, dict):
        return str(item)
    parts = []
    for k, v in item.items():
        if isinstance(v, dict) and "status" in v and "rule" in v:
            v = f"{v['status']}({v['rule']} at {v['path']})"
        elif isinstance(v, dict) and "status" in v:
            v = v["status"] + (f" [{v['provenance']}]" if "provenance" in v else "")
        elif isinstance(v, (dict, list)):
            v = json.dumps(v, ensure_ascii=False)
        parts.append(f"{k}: {v}")
    return "\n".join(parts) + "\n"


def _check_expect(expect: str | None, verdicts) -> None:
    if not expect or not verdicts:
        return
    for v in verdicts:
        if v.status.value != expect:
            raise ExpectationFailed(f"expected {expect}, got {v.status.value}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = f"{args.group} {args.cmd}"
    try:
        cfg = config_from(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result, verdicts = args.fn(args, cfg)
        _check_expect(args.expect, verdicts)
    except ExpectationFailed as exc:
        payload = exc.args[1] if len(exc.args) > 1 else None
        _emit(cfg, command, payload, str(exc.args[0]))
        return 1
    except (UsageError, fl.FormulaSyntaxError, SyntaxError) as exc:
        _emit(cfg, command, None, str(exc))
        return 2
    except (ValueError, TypeError) as exc:
        _emit(cfg, command, None, f"{type(exc).__name__}: {exc}")
        return 2
    _emit(cfg, command, result)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
