"""The formal language of terms and formulas, with transferability certificates.

Concrete syntax is S-expressions::

    (forall x (star RR) (= (+ x 0) x))
    (exists n NN (>= n (abs x)))
    (gforall n NN (<= m n) (<= m (+ n 1)))     ; guarded forall
    (forall (x y) A (= (* x y) (* y x)))       ; block sugar

Connectives ``and or not implies``; atoms ``=``, ``in``, ``<=``, ``>=`` and
``(rel NAME a b)``.  ``!=``, ``nleq`` and ``<`` are abbreviations built
with ``not``; ``(srel neq a b)`` is the starred relation a *!= b, which is a
genuine atom.  Identifiers not bound by a quantifier are constants;
``(star NAME)`` marks a starred constant.  Numeric literals are rationals;
``rho``/``eps`` denote the net eps; ``(num "expr")`` embeds any expression.

A file may start with ``(bind NAME KIND "VALUE")`` headers, KIND one of
``real``, ``set`` or ``gf``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Mapping

from . import asymcore as ac
from .asymcore import AsymptoticExpr


class ScopeError(ValueError):
    """Quantified variable not free in its body, or occurring in its bound."""


class NoStarCounterpart(ValueError):
    """A constant has no standard catalog counterpart to star."""


class FormulaSyntaxError(SyntaxError):
    def __init__(self, msg: str, pos: tuple[int, int] | None = None):
        where = f" at line {pos[0]}, column {pos[1]}" if pos else ""
        super().__init__(msg + where)
        self.pos = pos


Pos = tuple[int, int] | None

CATALOG_FUNCTIONS = {"+": 2, "*": 2, "-": 2, "neg": 1, "abs": 1, "sq": 1, "recip": 1, "step": 1}
SET_BUILDERS = ("finset", "closed")
CATALOG_SETS = ("RR", "RRpos", "RRnonzero", "NN", "UNIT")
RELATIONS = ("<=", ">=")
STARRED_ONLY_RELATIONS = ("neq",)


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    starred: bool = False
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Lit:
    value: AsymptoticExpr
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Tup:
    items: tuple
    pos: Pos = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("tuples have arity >= 2")


@dataclass(frozen=True)
class App:
    fn: str
    arg: object
    starred: bool = False
    pos: Pos = field(default=None, compare=False)


Term = Var | Const | Lit | Tup | App


@dataclass(frozen=True)
class Atom:
    kind: str  # "eq" | "in" | "rel"
    lhs: object
    rhs: object
    rel: str | None = None
    starred: bool = False
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class And:
    left: object
    right: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Or:
    left: object
    right: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Not:
    arg: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Implies:
    left: object
    right: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Exists:
    var: str
    bound: object
    body: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class Forall:
    var: str
    bound: object
    body: object
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class GuardedForall:
    var: str
    bound: object
    guard: object
    body: object
    pos: Pos = field(default=None, compare=False)

    def desugar(self) -> And:
        """[(exists x in t) P] & [(forall x in t)(P => Q)]."""
        return And(Exists(self.var, self.bound, self.guard), Forall(self.var, self.bound, Implies(self.guard, self.body)))


Formula = Atom | And | Or | Not | Implies | Exists | Forall | GuardedForall
TERM_TYPES = (Var, Const, Lit, Tup, App)
FORMULA_TYPES = (Atom, And, Or, Not, Implies, Exists, Forall, GuardedForall)

RULE_TAG = {Atom: "F1", And: "F2", Exists: "F3", Forall: "F4", Implies: "F5", Not: "F6", Or: "F7", GuardedForall: "F5'"}


def children(node) -> list[tuple[str, object]]:
    if isinstance(node, Atom):
        return [("lhs", node.lhs), ("rhs", node.rhs)]
    if isinstance(node, (And, Or, Implies)):
        return [("left", node.left), ("right", node.right)]
    if isinstance(node, Not):
        return [("arg", node.arg)]
    if isinstance(node, (Exists, Forall)):
        return [("bound", node.bound), ("body", node.body)]
    if isinstance(node, GuardedForall):
        return [("bound", node.bound), ("guard", node.guard), ("body", node.body)]
    if isinstance(node, Tup):
        return [(str(i), t) for i, t in enumerate(node.items)]
    if isinstance(node, App):
        return [("arg", node.arg)]
    return []


def walk(node, path: str = "root") -> Iterator[tuple[str, object]]:
    """Preorder traversal yielding (path, node)."""
    yield path, node
    for name, child in children(node):
        yield from walk(child, f"{path}.{name}")


def node_count(node) -> int:
    return sum(1 for _ in walk(node))


def term_vars(t) -> set[str]:
    return {n.name for _, n in walk(t) if isinstance(n, Var)}


def free_vars(f) -> set[str]:
    if isinstance(f, TERM_TYPES):
        return term_vars(f)
    if isinstance(f, Atom):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, (Exists, Forall)):
        return term_vars(f.bound) | (free_vars(f.body) - {f.var})
    if isinstance(f, GuardedForall):
        return term_vars(f.bound) | ((free_vars(f.guard) | free_vars(f.body)) - {f.var})
    return set().union(*(free_vars(c) for _, c in children(f)))


def constants(f) -> list[str]:
    seen: dict[str, None] = {}
    for _, n in walk(f):
        if isinstance(n, Const):
            seen.setdefault(n.name)
    return list(seen)


# -- reader ------------------------------------------------------------------

_TOKEN = re.compile(r'\s+|;[^\n]*|(?P<open>\()|(?P<close>\))|(?P<str>"[^"]*")|(?P<sym>[^\s()";]+)')


@dataclass
class SExp:
    items: list
    pos: Pos


@dataclass
class Sym:
    text: str
    pos: Pos
    quoted: bool = False


def read_sexps(text: str) -> list:
    stack: list[SExp] = [SExp([], None)]
    line, col0 = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", (line, pos - col0 + 1))
        where = (line, m.start() - col0 + 1)
        if m.group("open"):
            stack.append(SExp([], where))
        elif m.group("close"):
            if len(stack) == 1:
                raise FormulaSyntaxError("unbalanced ')'", where)
            done = stack.pop()
            stack[-1].items.append(done)
        elif m.group("str"):
            stack[-1].items.append(Sym(m.group("str")[1:-1], where, True))
        elif m.group("sym"):
            stack[-1].items.append(Sym(m.group("sym"), where))
        chunk = m.group(0)
        if "\n" in chunk:
            line += chunk.count("\n")
            col0 = m.start() + chunk.rfind("\n") + 1
        pos = m.end()
    if len(stack) != 1:
        raise FormulaSyntaxError("unbalanced '('", stack[-1].pos)
    return stack[0].items


_NUMBER = re.compile(r"^-?\d+(/\d+)?$")


class _Parser:
    def __init__(self, free: tuple[str, ...] = ()):
        self.scope: list[str] = list(free)

    # terms
    def term(self, s):
        if isinstance(s, Sym):
            if s.quoted:
                raise FormulaSyntaxError("string literal outside (num ...)", s.pos)
            if _NUMBER.match(s.text):
                return Lit(ac.const(Fraction(s.text)), s.pos)
            if s.text in ("rho", "eps"):
                return Lit(ac.EPS, s.pos)
            if s.text in self.scope:
                return Var(s.text, s.pos)
            return Const(s.text, False, s.pos)
        if not s.items:
            raise FormulaSyntaxError("empty term", s.pos)
        head = s.items[0]
        if not isinstance(head, Sym) or head.quoted:
            raise FormulaSyntaxError("term head must be a symbol", s.pos)
        h, args = head.text, s.items[1:]
        if h == "star":
            if len(args) != 1 or not isinstance(args[0], Sym):
                raise FormulaSyntaxError("(star NAME) expected", s.pos)
            return Const(args[0].text, True, s.pos)
        if h == "num":
            if len(args) != 1 or not isinstance(args[0], Sym):
                raise FormulaSyntaxError('(num "expr") expected', s.pos)
            try:
                return Lit(ac.parse_expr(args[0].text), s.pos)
            except SyntaxError as exc:
                raise FormulaSyntaxError(str(exc), s.pos) from None
        if h == "tuple":
            if len(args) < 2:
                raise FormulaSyntaxError("tuples need at least two components", s.pos)
            return Tup(tuple(self.term(a) for a in args), s.pos)
        starred = h.startswith("*") and len(h) > 1
        name = h[1:] if starred else h
        if not args:
            raise FormulaSyntaxError(f"({h}) has no argument", s.pos)
        arg = self.term(args[0]) if len(args) == 1 else Tup(tuple(self.term(a) for a in args), s.pos)
        return App(name, arg, starred, s.pos)

    # formulas
    def formula(self, s):
        if isinstance(s, Sym) or not s.items:
            raise FormulaSyntaxError("formula expected", s.pos)
        head = s.items[0]
        if not isinstance(head, Sym):
            raise FormulaSyntaxError("formula head must be a symbol", s.pos)
        h, args = head.text, s.items[1:]

        def arity(n):
            if len(args) != n:
                raise FormulaSyntaxError(f"({h} ...) takes {n} arguments, got {len(args)}", s.pos)

        if h in ("and", "or", "implies"):
            if h == "implies":
                arity(2)
            elif len(args) < 2:
                raise FormulaSyntaxError(f"({h} ...) takes at least 2 arguments", s.pos)
            parts = [self.formula(a) for a in args]
            cls = {"and": And, "or": Or, "implies": Implies}[h]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = cls(p, out, s.pos)
            return out
        if h == "not":
            arity(1)
            return Not(self.formula(args[0]), s.pos)
        if h in ("forall", "exists"):
            arity(3)
            return self.quantifier(h, args[0], args[1], None, args[2], s.pos)
        if h == "gforall":
            arity(4)
            return self.quantifier(h, args[0], args[1], args[2], args[3], s.pos)
        if h in ("=", "in"):
            arity(2)
            return Atom("eq" if h == "=" else "in", self.term(args[0]), self.term(args[1]), None, False, s.pos)
        if h.lstrip("*") in RELATIONS:
            arity(2)
            return Atom("rel", self.term(args[0]), self.term(args[1]), h.lstrip("*"), h.startswith("*"), s.pos)
        if h in ("rel", "srel"):
            arity(3)
            if not isinstance(args[0], Sym):
                raise FormulaSyntaxError(f"({h} NAME a b) expected", s.pos)
            return Atom("rel", self.term(args[1]), self.term(args[2]), args[0].text, h == "srel", s.pos)
        if h == "!=":
            arity(2)
            return Not(Atom("eq", self.term(args[0]), self.term(args[1]), None, False, s.pos), s.pos)
        if h == "nleq":
            arity(2)
            return Not(Atom("rel", self.term(args[0]), self.term(args[1]), "<=", False, s.pos), s.pos)
        if h == "<":
            arity(2)
            a, b = self.term(args[0]), self.term(args[1])
            return And(Atom("rel", a, b, "<=", False, s.pos), Not(Atom("eq", a, b, None, False, s.pos), s.pos), s.pos)
        raise FormulaSyntaxError(f"unknown formula head {h!r}", s.pos)

    def quantifier(self, h, v, bound_s, guard_s, body_s, pos):
        if isinstance(v, SExp):
            names = v.items
            if not names or not all(isinstance(n, Sym) for n in names):
                raise FormulaSyntaxError("quantifier block needs variable names", pos)
            if len(names) > 1:
                inner = SExp([Sym(h, pos), SExp(names[1:], pos), bound_s] + ([guard_s] if guard_s else []) + [body_s], pos)
                if guard_s is not None:
                    raise FormulaSyntaxError("gforall takes a single variable", pos)
                return self.quantifier(h, names[0], bound_s, None, inner, pos)
            v = names[0]
        if not isinstance(v, Sym) or v.quoted or _NUMBER.match(v.text):
            raise FormulaSyntaxError("quantified variable must be a name", pos)
        name = v.text
        bound = self.term(bound_s)
        if name in term_vars(bound) or any(isinstance(n, Const) and n.name == name for _, n in walk(bound)):
            raise ScopeError(f"variable {name!r} occurs in its own bound (line {pos[0]}, column {pos[1]})" if pos else f"variable {name!r} occurs in its own bound")
        self.scope.append(name)
        try:
            guard = self.formula(guard_s) if guard_s is not None else None
            body = self.formula(body_s)
        finally:
            self.scope.pop()
        used = free_vars(body) | (free_vars(guard) if guard is not None else set())
        if name not in used:
            where = f" (line {pos[0]}, column {pos[1]})" if pos else ""
            raise ScopeError(f"variable {name!r} is not free in the quantified formula{where}")
        if h == "gforall":
            return GuardedForall(name, bound, guard, body, pos)
        return (Forall if h == "forall" else Exists)(name, bound, body, pos)


def parse(text: str, free: tuple[str, ...] = ()):
    """Parse one formula, or a term if the text is not a formula."""
    forms = read_sexps(text)
    if len(forms) != 1:
        raise FormulaSyntaxError(f"expected one form, got {len(forms)}", forms[1].pos if len(forms) > 1 else None)
    p = _Parser(tuple(free))
    s = forms[0]
    if isinstance(s, SExp) and s.items and isinstance(s.items[0], Sym) and s.items[0].text in _FORMULA_HEADS:
        return p.formula(s)
    return p.term(s)


def parse_formula(text: str, free: tuple[str, ...] = ()):
    out = parse(text, free)
    if not isinstance(out, FORMULA_TYPES):
        raise FormulaSyntaxError("formula expected", getattr(out, "pos", None))
    return out


_FORMULA_HEADS = {"and", "or", "not", "implies", "forall", "exists", "gforall", "=", "in", "<=", ">=", "*<=", "*>=", "rel", "srel", "!=", "nleq", "<"}


@dataclass(frozen=True)
class Binding:
    name: str
    kind: str
    value: str


@dataclass
class Document:
    bindings: list[Binding]
    sentences: list


def parse_document(text: str) -> Document:
    binds, sentences = [], []
    for s in read_sexps(text):
        if isinstance(s, SExp) and s.items and isinstance(s.items[0], Sym) and s.items[0].text == "bind":
            if len(s.items) != 4 or not all(isinstance(x, Sym) for x in s.items[1:]):
                raise FormulaSyntaxError('(bind NAME KIND "VALUE") expected', s.pos)
            name, kind, value = (x.text for x in s.items[1:])
            if kind not in ("real", "set", "gf"):
                raise FormulaSyntaxError(f"unknown binding kind {kind!r}", s.pos)
            binds.append(Binding(name, kind, value))
        else:
            sentences.append(_Parser().formula(s))
    return Document(binds, sentences)


# -- printing ----------------------------------------------------------------

def to_sexp(node) -> str:
    """Canonical S-expression text; parse(to_sexp(f)) == f."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        return f"(star {node.name})" if node.starred else node.name
    if isinstance(node, Lit):
        e = node.value
        if e.is_constant:
            return str(e.constant_value)
        if e == ac.EPS:
            return "rho"
        return f'(num "{e}")'
    if isinstance(node, Tup):
        return "(tuple " + " ".join(to_sexp(t) for t in node.items) + ")"
    if isinstance(node, App):
        head = ("*" if node.starred else "") + node.fn
        args = node.arg.items if isinstance(node.arg, Tup) else (node.arg,)
        return f"({head} " + " ".join(to_sexp(a) for a in args) + ")"
    if isinstance(node, Atom):
        if node.kind == "eq":
            return f"(= {to_sexp(node.lhs)} {to_sexp(node.rhs)})"
        if node.kind == "in":
            return f"(in {to_sexp(node.lhs)} {to_sexp(node.rhs)})"
        if node.rel in RELATIONS:
            return f"({'*' if node.starred else ''}{node.rel} {to_sexp(node.lhs)} {to_sexp(node.rhs)})"
        return f"({'srel' if node.starred else 'rel'} {node.rel} {to_sexp(node.lhs)} {to_sexp(node.rhs)})"
    if isinstance(node, (And, Or, Implies)):
        op = {And: "and", Or: "or", Implies: "implies"}[type(node)]
        return f"({op} {to_sexp(node.left)} {to_sexp(node.right)})"
    if isinstance(node, Not):
        return f"(not {to_sexp(node.arg)})"
    if isinstance(node, (Exists, Forall)):
        q = "forall" if isinstance(node, Forall) else "exists"
        return f"({q} {node.var} {to_sexp(node.bound)} {to_sexp(node.body)})"
    if isinstance(node, GuardedForall):
        return f"(gforall {node.var} {to_sexp(node.bound)} {to_sexp(node.guard)} {to_sexp(node.body)})"
    raise TypeError(f"not an AST node: {node!r}")


_SET_SYMBOL = {"RR": "ℝ", "RRpos": "ℝ⁺", "RRnonzero": "ℝ∖{0}", "NN": "ℕ", "UNIT": "[0,1]"}


def pretty(node) -> str:
    """Mathematical rendering."""
    if isinstance(node, Const):
        base = _SET_SYMBOL.get(node.name, node.name)
        return ("*" + base) if node.starred else base
    if isinstance(node, (Var, Lit)):
        return to_sexp(node) if isinstance(node, Var) else (str(node.value) if node.value != ac.EPS else "ρ")
    if isinstance(node, Tup):
        return "(" + ", ".join(pretty(t) for t in node.items) + ")"
    if isinstance(node, App):
        star = "*" if node.starred else ""
        args = node.arg.items if isinstance(node.arg, Tup) else (node.arg,)
        if node.fn in ("+", "*", "-") and len(args) == 2:
            op = {"*": "·"}.get(node.fn, node.fn)
            return f"({pretty(args[0])} {star}{op} {pretty(args[1])})"
        if node.fn == "abs":
            return f"{star}|{pretty(args[0])}|"
        return f"{star}{node.fn}(" + ", ".join(pretty(a) for a in args) + ")"
    if isinstance(node, Atom):
        sym = {"eq": "=", "in": "∈"}.get(node.kind) or {"<=": "≤", ">=": "≥", "neq": "≠"}.get(node.rel, node.rel)
        star = "*" if node.starred else ""
        return f"{pretty(node.lhs)} {star}{sym} {pretty(node.rhs)}"
    if isinstance(node, And):
        return f"({pretty(node.left)} ∧ {pretty(node.right)})"
    if isinstance(node, Or):
        return f"({pretty(node.left)} ∨ {pretty(node.right)})"
    if isinstance(node, Implies):
        return f"({pretty(node.left)} ⟹ {pretty(node.right)})"
    if isinstance(node, Not):
        return f"¬{pretty(node.arg)}"
    if isinstance(node, Forall):
        return f"(∀{node.var}∈{pretty(node.bound)}) {pretty(node.body)}"
    if isinstance(node, Exists):
        return f"(∃{node.var}∈{pretty(node.bound)}) {pretty(node.body)}"
    if isinstance(node, GuardedForall):
        return f"(∀{node.var}∈{pretty(node.bound)} | {pretty(node.guard)}) {pretty(node.body)}"
    raise TypeError(f"not an AST node: {node!r}")


# -- certification -----------------------------------------------------------

class CertStatus(enum.Enum):
    CERTIFIED_F14 = "CertifiedF14"
    CERTIFIED_F5PRIME = "CertifiedF5prime"
    NOT_CERTIFIED = "NotCertified"


@dataclass(frozen=True)
class TransferCertificate:
    status: CertStatus
    path: str | None = None
    rule: str | None = None

    @property
    def certified(self) -> bool:
        return self.status is not CertStatus.NOT_CERTIFIED

    def __str__(self) -> str:
        if self.status is CertStatus.NOT_CERTIFIED:
            return f"NotCertified({self.rule} at {self.path})"
        return self.status.value

    def to_json(self) -> dict:
        out = {"status": self.status.value}
        if self.path is not None:
            out["path"], out["rule"] = self.path, self.rule
        return out


_BLOCKING = {Or: "F7", Not: "F6", Implies: "F5"}


def certify(f) -> TransferCertificate:
    """Purely syntactic: F1-F4 only, F1-F4 plus guarded foralls, or the
    first (preorder) or/not/implies node outside a guarded form."""
    guarded = False
    for path, node in walk(f):
        rule = _BLOCKING.get(type(node))
        if rule is not None:
            return TransferCertificate(CertStatus.NOT_CERTIFIED, path, rule)
        guarded = guarded or isinstance(node, GuardedForall)
    return TransferCertificate(CertStatus.CERTIFIED_F5PRIME if guarded else CertStatus.CERTIFIED_F14)


def side_conditions(f) -> list[Exists]:
    """The existential guard of every guarded forall, outer first."""
    return [Exists(n.var, n.bound, n.guard) for _, n in walk(f) if isinstance(n, GuardedForall)]


def desugar(f):
    """Replace every guarded forall by its conjunction schema."""
    if isinstance(f, GuardedForall):
        return desugar(f.desugar())
    if isinstance(f, (And, Or, Implies)):
        return type(f)(desugar(f.left), desugar(f.right), f.pos)
    if isinstance(f, Not):
        return Not(desugar(f.arg), f.pos)
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, f.bound, desugar(f.body), f.pos)
    return f


def rename_bound(f, mapping: Mapping[str, str]):
    """Rename bound variables (for invariance checks)."""

    def term(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name), t.pos)
        if isinstance(t, Tup):
            return Tup(tuple(term(x, env) for x in t.items), t.pos)
        if isinstance(t, App):
            return replace(t, arg=term(t.arg, env))
        return t

    def form(g, env):
        if isinstance(g, Atom):
            return replace(g, lhs=term(g.lhs, env), rhs=term(g.rhs, env))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(form(g.left, env), form(g.right, env), g.pos)
        if isinstance(g, Not):
            return Not(form(g.arg, env), g.pos)
        new = mapping.get(g.var, g.var)
        inner = {**env, g.var: new}
        if isinstance(g, GuardedForall):
            return GuardedForall(new, term(g.bound, env), form(g.guard, inner), form(g.body, inner), g.pos)
        return type(g)(new, term(g.bound, env), form(g.body, inner), g.pos)

    return form(f, {})


# -- star transform ----------------------------------------------------------

@dataclass(frozen=True)
class StarredFormula:
    formula: object
    substitution: tuple[tuple[str, str], ...]


def _has_star(name: str, bindings: Mapping[str, object]) -> bool:
    if name in CATALOG_SETS:
        return True
    obj = bindings.get(name)
    if obj is None:
        return False
    from .starreal import Symbolic

    if isinstance(obj, Symbolic):
        return obj.expr.is_constant
    from .internalsets import StarCatalog

    return isinstance(obj, StarCatalog)


def star_transform(f, bindings: Mapping[str, object] | None = None) -> StarredFormula:
    """Replace every standard constant c by *c (sets, functions, relations)."""
    if not certify(f).certified:
        raise ValueError(f"star_transform needs a certified formula, got {certify(f)}")
    bindings = bindings or {}
    subst: dict[str, str] = {}

    def term(t):
        if isinstance(t, Const):
            if t.starred:
                return t
            if not _has_star(t.name, bindings):
                raise NoStarCounterpart(f"constant {t.name!r} has no standard catalog counterpart")
            subst[t.name] = "*" + t.name
            return Const(t.name, True, t.pos)
        if isinstance(t, Tup):
            return Tup(tuple(term(x) for x in t.items), t.pos)
        if isinstance(t, App):
            if t.fn not in CATALOG_FUNCTIONS and t.fn not in SET_BUILDERS:
                raise NoStarCounterpart(f"function {t.fn!r} is not in the catalog")
            if t.fn in CATALOG_FUNCTIONS:
                subst[t.fn] = "*" + t.fn
            return App(t.fn, term(t.arg), t.fn in CATALOG_FUNCTIONS or t.starred, t.pos)
        return t

    def form(g):
        if isinstance(g, Atom):
            starred = g.starred
            if g.kind == "rel" and not g.starred:
                subst[g.rel] = "*" + g.rel
                starred = True
            return replace(g, lhs=term(g.lhs), rhs=term(g.rhs), starred=starred)
        if isinstance(g, (And, Or, Implies)):
            return type(g)(form(g.left), form(g.right), g.pos)
        if isinstance(g, Not):
            return Not(form(g.arg), g.pos)
        if isinstance(g, GuardedForall):
            return GuardedForall(g.var, term(g.bound), form(g.guard), form(g.body), g.pos)
        return type(g)(g.var, term(g.bound), form(g.body), g.pos)

    out = form(f)
    return StarredFormula(out, tuple(sorted(subst.items())))
