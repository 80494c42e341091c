"""First-order formulas over finite groups.

Grammar (whitespace is insignificant)::

    formula  := implies
    implies  := disj ('->' implies)?
    disj     := conj ('\\/' conj)*
    conj     := unary ('/\\' unary)*
    unary    := '~' unary | ('forall' | 'exists') vars body | atom
    vars     := IDENT (','? IDENT)*
    body     := '(' formula ')' | unary
    atom     := 'true' | 'false' | IDENT '(' term (',' term)* ')'   -- macro call
              | term '=' term | term '!=' term | '(' formula ')'
    term     := factor (('*' | '.') factor)*
    factor   := primary ('^' '-'? INT)*
    primary  := '1' | 'e' | IDENT | '[' term ',' term ']' | '(' term ')'

``[x, y]`` abbreviates x^-1 y^-1 x y.  Unicode connectives (the usual
quantifier, conjunction, disjunction, negation and arrow symbols) are
accepted as synonyms.  A macro is defined as ``name(x, y) := formula``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .errors import DEFAULT_FO_BUDGET, EvaluationError, FormulaSyntaxError, SearchInfeasible, budget
from .finite import FiniteGroup

# -- syntax tree ----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Comm:
    left: object
    right: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


def Inv(t):
    return Pow(t, -1)


@dataclass(frozen=True)
class Macro:
    name: str
    params: tuple
    body: object

    def __str__(self):
        return f"{self.name}({', '.join(self.params)}) := {to_text(self.body)}"


# -- tokenizer / parser -------------------------------------------------------------

_SYMBOLS = {"∀": "forall", "∃": "exists", "∧": "/\\", "∨": "\\/",
            "¬": "~", "→": "->", "≠": "!=", "·": "*", "⋅": "*"}
_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>:=|->|/\\|\\/|!=|\^|[\[\](),=*.~-])"
                    r"|(?P<uni>[∀∃∧∨¬→≠·⋅]))")
KEYWORDS = {"forall", "exists", "true", "false"}


def tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastgroup)
        kind, val = m.lastgroup, m.group(m.lastgroup)
        if kind == "uni":
            val = _SYMBOLS[val]
            kind = "ident" if val in ("forall", "exists") else "op"
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.peek()[2])

    def accept(self, val):
        if self.peek()[1] == val and self.peek()[0] != "end":
            self.i += 1
            return True
        return False

    def expect(self, val):
        if not self.accept(val):
            self.error(f"expected {val!r}, found {self.peek()[1] or 'end of input'!r}")

    def ident(self):
        kind, val, _ = self.peek()
        if kind != "ident" or val in KEYWORDS:
            self.error(f"expected identifier, found {val or 'end of input'!r}")
        self.i += 1
        return val

    # formulas
    def formula(self):
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disj(self):
        f = self.conj()
        while self.accept("\\/"):
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.accept("/\\"):
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.accept("~"):
            return Not(self.unary())
        kind, val, _ = self.peek()
        if kind == "ident" and val in ("forall", "exists"):
            self.i += 1
            names = [self.ident()]
            while True:
                if self.accept(","):
                    names.append(self.ident())
                elif self.peek()[0] == "ident" and self.peek()[1] not in KEYWORDS:
                    names.append(self.ident())
                else:
                    break
            if self.accept("("):
                body = self.formula()
                self.expect(")")
            else:
                body = self.unary()
            node = Forall if val == "forall" else Exists
            for name in reversed(names):
                body = node(name, body)
            return body
        return self.atom()

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "ident" and val == "true":
            self.i += 1
            return Top()
        if kind == "ident" and val == "false":
            self.i += 1
            return Bottom()
        if kind == "ident" and val not in KEYWORDS and self.peek(1)[1] == "(":
            self.i += 2
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            return Call(val, tuple(args))
        if val == "(":
            # a parenthesised term on the left of '=' or a parenthesised formula
            save = self.i
            try:
                return self.equation()
            except FormulaSyntaxError:
                self.i = save
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.equation()

    def equation(self):
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        self.error(f"expected '=' after term, found {self.peek()[1] or 'end of input'!r}")

    # terms
    def term(self):
        t = self.factor()
        while self.peek()[1] in ("*", "."):
            self.i += 1
            t = Mul(t, self.factor())
        return t

    def factor(self):
        t = self.primary()
        while self.accept("^"):
            neg = self.accept("-")
            kind, val, _ = self.peek()
            if kind != "int":
                self.error("expected integer exponent")
            self.i += 1
            t = Pow(t, -int(val) if neg else int(val))
        return t

    def primary(self):
        kind, val, _ = self.peek()
        if kind == "int":
            if val != "1":
                self.error("only the constant 1 is allowed")
            self.i += 1
            return One()
        if kind == "ident" and val not in KEYWORDS:
            self.i += 1
            return One() if val == "e" else Var(val)
        if self.accept("["):
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect("]")
            return Comm(a, b)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        self.error(f"expected term, found {val or 'end of input'!r}")


def parse(text):
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.error(f"unexpected {p.peek()[1]!r}")
    return f


def parse_term(text):
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "end":
        p.error(f"unexpected {p.peek()[1]!r}")
    return t


def parse_macro(text):
    """``name(x, y) := formula``."""
    p = _Parser(text)
    name = p.ident()
    p.expect("(")
    params = [p.ident()]
    while p.accept(","):
        params.append(p.ident())
    p.expect(")")
    p.expect(":=")
    body = p.formula()
    if p.peek()[0] != "end":
        p.error(f"unexpected {p.peek()[1]!r}")
    return Macro(name, tuple(params), body)


# -- printer ------------------------------------------------------------------------


def term_text(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, One):
        return "1"
    if isinstance(t, Mul):
        right = term_text(t.right)
        if isinstance(t.right, Mul):
            right = f"({right})"
        return f"{term_text(t.left)} * {right}"
    if isinstance(t, Pow):
        base = term_text(t.base)
        if isinstance(t.base, (Mul, Pow)):
            base = f"({base})"
        return f"{base}^{t.exp}"
    if isinstance(t, Comm):
        return f"[{term_text(t.left)}, {term_text(t.right)}]"
    raise TypeError(f"not a term: {t!r}")


_PREC = {Implies: 1, Or: 2, And: 3}


def to_text(f, prec=0):
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Eq):
        return f"{term_text(f.left)} = {term_text(f.right)}"
    if isinstance(f, Call):
        return f"{f.name}({', '.join(term_text(a) for a in f.args)})"
    if isinstance(f, Not):
        body = to_text(f.body, 4)
        if isinstance(f.body, Eq):
            body = f"({body})"
        return "~" + body
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"{kw} {f.var} ({to_text(f.body)})"
    p = _PREC[type(f)]
    op = {Implies: "->", Or: "\\/", And: "/\\"}[type(f)]
    if isinstance(f, Implies):
        s = f"{to_text(f.left, p + 1)} {op} {to_text(f.right, p)}"
    else:
        s = f"{to_text(f.left, p)} {op} {to_text(f.right, p + 1)}"
    return f"({s})" if p < prec or (p == prec and prec) else s


# -- free variables -----------------------------------------------------------------


def term_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, One):
        return set()
    if isinstance(t, Pow):
        return term_vars(t.base)
    return term_vars(t.left) | term_vars(t.right)


def free_vars(f, macros=None):
    if isinstance(f, (Top, Bottom)):
        return set()
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Call):
        out = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def quantifier_depth(f, macros=None, _seen=()):
    macros = macros or {}
    if isinstance(f, (Top, Bottom, Eq)):
        return 0
    if isinstance(f, Call):
        m = macros.get(f.name)
        if m is None or f.name in _seen:
            return 0
        return quantifier_depth(m.body, macros, _seen + (f.name,))
    if isinstance(f, Not):
        return quantifier_depth(f.body, macros, _seen)
    if isinstance(f, (Forall, Exists)):
        return 1 + quantifier_depth(f.body, macros, _seen)
    return max(quantifier_depth(f.left, macros, _seen), quantifier_depth(f.right, macros, _seen))


# -- models ----------------------------------------------------------------------


class FiniteModel:
    """A finite group structure plus named parameters (element indices)."""

    def __init__(self, group, params=None):
        self.group = group
        self.table = group.table
        self.inv = group.inv
        self.identity = group.identity
        self.size = group.order
        self.carrier = group.labels
        self.params = dict(params or {})

    @classmethod
    def from_table(cls, table, labels=None, params=None):
        return cls(FiniteGroup.from_table(np.asarray(table), labels=labels), params)

    @classmethod
    def from_group(cls, G, params=None):
        F = G if isinstance(G, FiniteGroup) else G.finite()
        resolved = {}
        for k, v in (params or {}).items():
            resolved[k] = v if isinstance(v, (int, np.integer)) else F.index(v)
        return cls(F, resolved)

    def with_params(self, **params):
        return FiniteModel(self.group, {**self.params, **params})


def _lookup(env, name):
    try:
        return env[name]
    except KeyError:
        raise EvaluationError(f"unbound variable {name!r}") from None


def eval_term(t, model, env):
    """Value of a term; env values may be ints or index arrays."""
    if isinstance(t, Var):
        return _lookup(env, t.name)
    if isinstance(t, One):
        return model.identity
    if isinstance(t, Mul):
        return model.table[eval_term(t.left, model, env), eval_term(t.right, model, env)]
    if isinstance(t, Pow):
        b = eval_term(t.base, model, env)
        if t.exp < 0:
            b = model.inv[b]
        out = np.full_like(np.asarray(b), model.identity) if np.ndim(b) else model.identity
        for _ in range(abs(t.exp)):
            out = model.table[out, b]
        return out
    if isinstance(t, Comm):
        a = eval_term(t.left, model, env)
        b = eval_term(t.right, model, env)
        T, inv = model.table, model.inv
        return T[T[T[inv[a], inv[b]], a], b]
    raise TypeError(f"not a term: {t!r}")


def _macro_env(m, args, model, env):
    if len(args) != len(m.params):
        raise EvaluationError(f"{m.name} expects {len(m.params)} arguments")
    vals = {p: eval_term(a, model, env) for p, a in zip(m.params, args)}
    # macro bodies see the parameters of the model but not the caller's variables
    return {**model.params, **vals}


def evaluate(f, model, assignment=None, macros=None):
    """Tarskian satisfaction by exhaustive quantification (the reference evaluator)."""
    macros = _macro_dict(macros)
    env = {**model.params, **(assignment or {})}
    missing = free_vars(f) - set(env)
    if missing:
        raise EvaluationError(f"unbound variables {sorted(missing)}")
    depth = quantifier_depth(f, macros)
    limit = budget(DEFAULT_FO_BUDGET)
    if model.size ** depth > limit:
        raise SearchInfeasible(f"{model.size}^{depth} quantifier steps exceed budget {limit}")
    return _eval(f, model, env, macros)


def _eval(f, model, env, macros):
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Eq):
        return int(eval_term(f.left, model, env)) == int(eval_term(f.right, model, env))
    if isinstance(f, Not):
        return not _eval(f.body, model, env, macros)
    if isinstance(f, And):
        return _eval(f.left, model, env, macros) and _eval(f.right, model, env, macros)
    if isinstance(f, Or):
        return _eval(f.left, model, env, macros) or _eval(f.right, model, env, macros)
    if isinstance(f, Implies):
        return (not _eval(f.left, model, env, macros)) or _eval(f.right, model, env, macros)
    if isinstance(f, Forall):
        return all(_eval(f.body, model, {**env, f.var: a}, macros) for a in range(model.size))
    if isinstance(f, Exists):
        return any(_eval(f.body, model, {**env, f.var: a}, macros) for a in range(model.size))
    if isinstance(f, Call):
        m = macros.get(f.name)
        if m is None:
            raise EvaluationError(f"unknown macro {f.name!r}")
        return _eval(m.body, model, _macro_env(m, f.args, model, env), macros)
    raise TypeError(f"not a formula: {f!r}")


def _macro_dict(macros):
    if macros is None:
        return {}
    if isinstance(macros, dict):
        return macros
    out = {}
    for m in macros:
        m = parse_macro(m) if isinstance(m, str) else m
        out[m.name] = m
    return out


# -- set solver -----------------------------------------------------------------------


class _Solver:
    """Evaluates a formula for every value of one variable at once.

    ``vec(f, env, x)`` returns a boolean array over the carrier (the truth
    value of f with x ranging over all elements), or a plain bool when x is
    None.  Existential blocks restrict each bound variable to the elements
    satisfying the conjuncts that mention only that variable, bind variables
    fixed by an equation, and then enumerate what is left.  Universal
    quantifiers go through the dual.  Macro results are memoised.
    """

    def __init__(self, model, macros, limit):
        self.model = model
        self.macros = macros
        self.limit = limit
        self.steps = 0
        self.memo = {}
        self.all = np.arange(model.size)

    def tick(self, k=1):
        self.steps += k
        if self.steps > self.limit:
            raise SearchInfeasible(f"more than {self.limit} evaluation steps")

    def vec(self, f, env, x):
        if x is not None and x not in free_vars(f):
            v = self.vec(f, env, None)
            return np.full(self.model.size, bool(v))
        if isinstance(f, Top):
            return True if x is None else np.ones(self.model.size, dtype=bool)
        if isinstance(f, Bottom):
            return False if x is None else np.zeros(self.model.size, dtype=bool)
        e = env if x is None else {**env, x: self.all}
        if isinstance(f, Eq):
            self.tick()
            r = eval_term(f.left, self.model, e) == eval_term(f.right, self.model, e)
            return bool(r) if x is None else np.broadcast_to(r, (self.model.size,)).copy()
        if isinstance(f, Not):
            v = self.vec(f.body, env, x)
            return (not v) if x is None else ~v
        if isinstance(f, And):
            a = self.vec(f.left, env, x)
            if x is None:
                return a and self.vec(f.right, env, x)
            if not a.any():
                return a
            return a & self.vec(f.right, env, x)
        if isinstance(f, Or):
            a = self.vec(f.left, env, x)
            if x is None:
                return a or self.vec(f.right, env, x)
            if a.all():
                return a
            return a | self.vec(f.right, env, x)
        if isinstance(f, Implies):
            return self.vec(Or(Not(f.left), f.right), env, x)
        if isinstance(f, Forall):
            v = self.vec(Exists(f.var, Not(f.body)), env, x)
            return (not v) if x is None else ~v
        if isinstance(f, Exists):
            return self.exists(f, env, x)
        if isinstance(f, Call):
            return self.call(f, env, x)
        raise TypeError(f"not a formula: {f!r}")

    def call(self, f, env, x):
        m = self.macros.get(f.name)
        if m is None:
            raise EvaluationError(f"unknown macro {f.name!r}")
        if len(f.args) != len(m.params):
            raise EvaluationError(f"{m.name} expects {len(m.params)} arguments")
        body_free = free_vars(m.body) - set(m.params)
        # which parameter (if any) carries the varying variable
        vary = [k for k, a in enumerate(f.args) if x is not None and x in term_vars(a)]
        e = env if x is None else {**env, x: self.all}
        fixed = {}
        for k, (p, a) in enumerate(zip(m.params, f.args)):
            if k not in vary:
                fixed[p] = int(eval_term(a, self.model, e))
        base = {name: _lookup(self.model.params, name) for name in body_free}
        if len(vary) == 0:
            key = (m.name, None, tuple(sorted(fixed.items())), tuple(sorted(base.items())))
            if key not in self.memo:
                self.memo[key] = bool(self.vec(m.body, {**base, **fixed}, None))
            v = self.memo[key]
            return v if x is None else np.full(self.model.size, v)
        if len(vary) == 1:
            k = vary[0]
            p = m.params[k]
            key = (m.name, p, tuple(sorted(fixed.items())), tuple(sorted(base.items())))
            if key not in self.memo:
                self.memo[key] = self.vec(m.body, {**base, **fixed}, p)
            table = self.memo[key]
            vals = eval_term(f.args[k], self.model, e)
            return table[np.broadcast_to(vals, (self.model.size,))]
        # several arguments vary with x: one pass per element
        out = np.zeros(self.model.size, dtype=bool)
        for a in range(self.model.size):
            self.tick()
            out[a] = self.call(f, {**env, x: a}, None)
        return out

    def exists(self, f, env, x):
        # collect the block exists v1 exists v2 ... body
        names, body = [], f
        while True:
            if isinstance(body, Not) and isinstance(body.body, Forall):
                body = Exists(body.body.var, Not(body.body.body))
            elif isinstance(body, Not) and isinstance(body.body, Not):
                body = body.body.body
            if not (isinstance(body, Exists) and body.var != x and body.var not in names):
                break
            names.append(body.var)
            body = body.body
        if x in names:
            x = None
        conj = _conjuncts(body)
        V = set(names)
        domains = {v: np.ones(self.model.size, dtype=bool) for v in names}
        x_only = []
        rest = []
        for c in conj:
            fv = free_vars(c) & (V | ({x} if x is not None else set()))
            if not fv:
                if not self.vec(c, env, None):
                    return False if x is None else np.zeros(self.model.size, dtype=bool)
            elif fv == {x}:
                x_only.append(c)
            elif len(fv) == 1 and x not in fv:
                (v,) = fv
                domains[v] &= self.vec(c, env, v)
            else:
                rest.append(c)
        if any(not d.any() for d in domains.values()):
            return False if x is None else np.zeros(self.model.size, dtype=bool)
        dom = {v: np.flatnonzero(d) for v, d in domains.items()}
        if x is None:
            result = self.search(rest, dict(env), names, dom, None)
        else:
            result = self.search(rest, dict(env), names, dom, x)
            for c in x_only:
                result = result & self.vec(c, env, x)
        return result

    def search(self, conj, env, names, dom, x):
        """Backtracking over the block variables; returns bool or a mask over x."""
        size = self.model.size
        block = set(names)
        outer = set(env)
        fvs = [free_vars(c) & block for c in conj]
        acc = [False if x is None else np.zeros(size, dtype=bool)]
        allowed = {v: set(dom[v].tolist()) for v in names}

        def fixing_equation(pending, have, free):
            # an equation v = t with t already computable fixes v
            for k in pending:
                c = conj[k]
                if not isinstance(c, Eq):
                    continue
                for lhs, rhs in ((c.left, c.right), (c.right, c.left)):
                    if isinstance(lhs, Var) and lhs.name in free:
                        need = term_vars(rhs)
                        if lhs.name not in need and x not in need and need <= (have | outer):
                            return lhs.name, rhs
            return None, None

        def rec(env, have, mask, pending):
            now = [k for k in pending if fvs[k] <= have]
            later = [k for k in pending if not fvs[k] <= have]
            cur = mask
            for k in now:
                v = self.vec(conj[k], env, x)
                if x is None:
                    if not v:
                        return False
                else:
                    cur = cur & v
                    if not cur.any():
                        return False
            free = [v for v in names if v not in have]
            if not free:
                if x is None:
                    acc[0] = True
                    return True
                acc[0] = acc[0] | cur
                return bool(acc[0].all())
            pick, rhs = fixing_equation(later, have, free)
            if pick is None and all(_plain(conj[k]) for k in later):
                grid = self.grid(conj, later, env, free, dom, x, cur)
                if grid is not None:
                    if x is None:
                        acc[0] = acc[0] or bool(grid)
                        return acc[0]
                    acc[0] = acc[0] | grid
                    return bool(acc[0].all())
            if pick is not None:
                val = int(eval_term(rhs, self.model, env))
                values = [val] if val in allowed[pick] else []
            else:
                pick = min(free, key=lambda v: len(dom[v]))
                values = dom[pick]
            for a in values:
                self.tick()
                if rec({**env, pick: int(a)}, have | {pick}, cur, later):
                    return True
            return False

        rec(env, set(), True if x is None else np.ones(size, dtype=bool), list(range(len(conj))))
        return acc[0]


    def grid(self, conj, ks, env, free, dom, x, cur, limit=2**22):
        """Evaluate quantifier-free conjuncts on the grid of all remaining values.

        Each free variable gets its own broadcast axis (x, if present, the last
        one); returns the mask over x (or a bool), or None when the grid is too big.
        """
        axes = list(free) + ([x] if x is not None else [])
        shape = [len(dom[v]) for v in free] + ([self.model.size] if x is not None else [])
        total = 1
        for d in shape:
            total *= d
        if total > limit:
            return None
        self.tick(total)
        e = dict(env)
        for k, v in enumerate(axes):
            vals = dom[v] if v != x else self.all
            sh = [1] * len(axes)
            sh[k] = len(vals)
            e[v] = np.asarray(vals).reshape(sh)
        out = np.ones(shape, dtype=bool)
        for k in ks:
            out &= _grid_eval(conj[k], self.model, e)
        red = tuple(range(len(free)))
        if x is None:
            return bool(out.any())
        return out.any(axis=red) & cur


def _plain(f):
    """Quantifier- and macro-free."""
    if isinstance(f, (Top, Bottom, Eq)):
        return True
    if isinstance(f, Not):
        return _plain(f.body)
    if isinstance(f, (And, Or, Implies)):
        return _plain(f.left) and _plain(f.right)
    return False


def _grid_eval(f, model, env):
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Eq):
        return eval_term(f.left, model, env) == eval_term(f.right, model, env)
    if isinstance(f, Not):
        return ~np.asarray(_grid_eval(f.body, model, env))
    if isinstance(f, And):
        return _grid_eval(f.left, model, env) & _grid_eval(f.right, model, env)
    if isinstance(f, Or):
        return _grid_eval(f.left, model, env) | _grid_eval(f.right, model, env)
    return ~np.asarray(_grid_eval(f.left, model, env)) | _grid_eval(f.right, model, env)


def _conjuncts(f):
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def define_set(f, model, var="x", params=None, macros=None, method="solver"):
    """All elements a with model |= f(a); returns sorted element indices.

    ``method="naive"`` runs the reference evaluator once per element.
    """
    macros = _macro_dict(macros)
    model = model.with_params(**(params or {})) if params else model
    missing = free_vars(f) - set(model.params) - {var}
    if missing:
        raise EvaluationError(f"unbound variables {sorted(missing)}")
    if method == "naive":
        return [a for a in range(model.size) if evaluate(f, model, {var: a}, macros)]
    s = _Solver(model, macros, budget(DEFAULT_FO_BUDGET))
    mask = s.vec(f, dict(model.params), var)
    if not isinstance(mask, np.ndarray):
        mask = np.full(model.size, bool(mask))
    return [int(a) for a in np.flatnonzero(mask)]


def holds(f, model, assignment=None, macros=None):
    """Truth value via the solver (same semantics as :func:`evaluate`)."""
    macros = _macro_dict(macros)
    env = {**model.params, **(assignment or {})}
    missing = free_vars(f) - set(env)
    if missing:
        raise EvaluationError(f"unbound variables {sorted(missing)}")
    return bool(_Solver(model, macros, budget(DEFAULT_FO_BUDGET)).vec(f, env, None))


# -- the definability formulas ----------------------------------------------------------


def definability_macros(n):
    """Macros phiZ, phiH{i}, phiH{i}_{j}, phiHH over parameters h1..hn."""
    out = [parse_macro("phiZ(x) := forall y ([x, y] = 1)")]
    for i in range(1, n + 1):
        out.append(parse_macro(f"phiH{i}(x) := [h{i}, x] = 1"))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for i, j in pairs:
        out.append(parse_macro(f"phiH{i}_{j}(x) := exists y (x = [h{i}, y] /\\ phiH{j}(y))"))
    ys = [f"y{i}_{j}" for i, j in pairs]
    conds = " /\\ ".join(f"phiH{i}_{j}(y{i}_{j})" for i, j in pairs)
    out.append(parse_macro(f"phiHH(x) := exists {' '.join(ys)} ({conds} /\\ x = {' * '.join(ys)})"))
    return {m.name: m for m in out}


CLASS2_SENTENCE = "forall x, y, z ([x, y] * z = z * [x, y])"


@dataclass
class DefinabilityReport:
    results: dict
    sets: dict

    @property
    def ok(self):
        return all(self.results.values())

    def to_json(self):
        return {"ok": self.ok, "results": dict(self.results)}


def check_definability_suite(H, basis, method="solver"):
    """Compare each formula's solution set with the brute-force subgroup."""
    model = FiniteModel.from_group(H)
    F = model.group
    idx = [b if isinstance(b, (int, np.integer)) else F.index(b) for b in basis]
    n = len(idx)
    model = model.with_params(**{f"h{i}": int(h) for i, h in enumerate(idx, 1)})
    macros = definability_macros(n)
    results, sets = {}, {}

    def cmp(label, formula, expected):
        got = define_set(parse(formula), model, macros=macros, method=method)
        sets[label] = (got, sorted(expected))
        results[label] = got == sorted(expected)

    cmp("Z", "phiZ(x)", F.center)
    Hi = [F.centralizer(h) for h in idx]
    for i in range(1, n + 1):
        cmp(f"H_{i}", f"phiH{i}(x)", Hi[i - 1])
    for i, j in itertools.combinations(range(1, n + 1), 2):
        cmp(f"H_{i}{j}", f"phiH{i}_{j}(x)", F.commutator_subgroup([idx[i - 1]], Hi[j - 1]))
    cmp("[H,H]", "phiHH(x)", F.commutator_subgroup())
    results["class-2"] = holds(parse(CLASS2_SENTENCE), model) == F.is_nilpotent_class2()
    results["class-2-holds"] = holds(parse(CLASS2_SENTENCE), model)
    return DefinabilityReport(results, sets)
