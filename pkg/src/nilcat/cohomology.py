"""2-cocycles between abelian groups and the central extensions they define.

Naming: ``cocycles`` are all normalised 2-cocycles, ``coboundaries`` are
those of the form psi(x+y) - psi(x) - psi(y), and ``symmetric`` cocycles
satisfy f(x, y) = f(y, x).  The source notation writes B^2 for cocycles and
Z^2 for coboundaries; identifiers here avoid that swap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import (
    DEFAULT_COBOUNDARY_BUDGET,
    InvalidNormalization,
    MustVerifyCocycle,
    NotEnumerable,
    SearchInfeasible,
    budget,
)
from .rings import ring_from_json

# -- abelian groups ---------------------------------------------------------


class AbGroup:
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def index(self, x):
        if not hasattr(self, "_index"):
            self._index = {e: i for i, e in enumerate(self.elements())}
        return self._index[x]

    def multiple(self, k, x):
        out = self.zero
        for _ in range(k):
            out = self.add(out, x)
        return out

    def element_order(self, x):
        k, y = 1, x
        while y != self.zero:
            y = self.add(y, x)
            k += 1
        return k

    def __eq__(self, other):
        return isinstance(other, AbGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class Additive(AbGroup):
    """The additive group R+ of a ring; elements are ring values."""

    def __init__(self, ring):
        self.ring = ring
        self.zero = ring.zero
        self.key = ("additive", ring.key)
        self.is_finite = ring.is_finite

    def add(self, a, b):
        return self.ring.add(a, b)

    def neg(self, a):
        return self.ring.neg(a)

    def elements(self):
        return iter(self.ring.elements())

    @property
    def order(self):
        return self.ring.order

    def random_element(self, rng, bound=10**6):
        return self.ring.random_element(rng, bound)

    def value_to_json(self, a):
        return self.ring.to_str(a)

    def value_from_json(self, v):
        return self.ring.from_str(str(v))

    def to_json(self):
        return {"kind": "additive", "ring": self.ring.to_json()}

    def __repr__(self):
        return f"{self.ring!r}+"


class DirectSum(AbGroup):
    """A direct sum of ``copies`` copies of R+; elements are tuples."""

    def __init__(self, ring, copies):
        self.ring = ring
        self.copies = copies
        self.zero = (ring.zero,) * copies
        self.key = ("sum", ring.key, copies)
        self.is_finite = ring.is_finite

    def add(self, a, b):
        return tuple(self.ring.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.ring.neg(x) for x in a)

    def elements(self):
        if not self.is_finite:
            raise NotEnumerable(f"{self} is infinite")
        return itertools.product(list(self.ring.elements()), repeat=self.copies)

    @property
    def order(self):
        return self.ring.order ** self.copies

    def random_element(self, rng, bound=10**6):
        return tuple(self.ring.random_element(rng, bound) for _ in range(self.copies))

    def value_to_json(self, a):
        return [self.ring.to_str(x) for x in a]

    def value_from_json(self, v):
        return tuple(self.ring.from_str(str(x)) for x in v)

    def to_json(self):
        return {"kind": "sum", "ring": self.ring.to_json(), "copies": self.copies}

    def __repr__(self):
        return f"({self.ring!r}+)^{self.copies}"


class TableAbGroup(AbGroup):
    """A finite abelian group given by its addition table on 0..k-1."""

    is_finite = True

    def __init__(self, add, zero=0):
        self._add = tuple(tuple(int(v) for v in row) for row in add)
        self.zero = int(zero)
        self.key = ("table", self._add, self.zero)
        k = len(self._add)
        for a, b in itertools.product(range(k), repeat=2):
            if self._add[a][b] != self._add[b][a]:
                raise ValueError("addition table is not commutative")
        for a, b, c in itertools.product(range(k), repeat=3):
            if self._add[self._add[a][b]][c] != self._add[a][self._add[b][c]]:
                raise ValueError("addition table is not associative")

    def add(self, a, b):
        return self._add[a][b]

    def neg(self, a):
        return self._add[a].index(self.zero)

    def elements(self):
        return iter(range(len(self._add)))

    @property
    def order(self):
        return len(self._add)

    def random_element(self, rng, bound=None):
        return rng.randrange(self.order)

    def value_to_json(self, a):
        return int(a)

    def value_from_json(self, v):
        return int(v)

    def to_json(self):
        return {"kind": "table", "add": [list(r) for r in self._add], "zero": self.zero}

    def __repr__(self):
        return f"TableAbGroup(order={self.order})"


def abgroup_from_json(desc):
    kind = desc["kind"]
    if kind == "additive":
        return Additive(ring_from_json(desc["ring"]))
    if kind == "sum":
        return DirectSum(ring_from_json(desc["ring"]), int(desc["copies"]))
    if kind == "table":
        return TableAbGroup(desc["add"], desc.get("zero", 0))
    raise ValueError(f"unknown abelian group kind {kind!r}")


# -- cocycles -----------------------------------------------------------------


@dataclass
class Check:
    """Outcome of an identity check; truthy iff no counterexample was found.

    ``exhaustive`` distinguishes a proof on a finite carrier from a
    sampled run, which only reports the absence of counterexamples.
    """

    ok: bool
    exhaustive: bool
    checked: int
    counterexample: object = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if not self.ok:
            return f"counterexample {self.counterexample}"
        if self.exhaustive:
            return f"holds (exhaustive, {self.checked} cases)"
        return f"no counterexample in {self.checked} samples"


class Cocycle2:
    """A function f: B x B -> A, candidate normalised 2-cocycle.

    ``verified_cocycle`` / ``verified_symmetric`` are True only after an
    exhaustive check or when the construction guarantees the identity.
    """

    def __init__(self, domain, codomain, func, name="f", key=None,
                 cocycle=False, symmetric=False):
        self.domain = domain
        self.codomain = codomain
        self._func = func
        self.name = name
        self.key = key if key is not None else ("fn", id(self))
        self.verified_cocycle = cocycle
        self.verified_symmetric = symmetric
        self.psi = None

    def __call__(self, x, y):
        return self._func(x, y)

    def __repr__(self):
        return f"Cocycle2({self.name}: {self.domain!r}^2 -> {self.codomain!r})"

    @classmethod
    def from_table(cls, domain, codomain, table, name="f"):
        """Table indexed by the canonical enumeration of the (finite) domain."""
        elems = list(domain.elements())
        lookup = {}
        for x, row in zip(elems, table):
            for y, v in zip(elems, row):
                lookup[x, y] = v
        key = ("table", domain.key, codomain.key, tuple(sorted(lookup.items())))
        return cls(domain, codomain, lambda x, y: lookup[x, y], name=name, key=key)

    def tabulate(self):
        elems = list(self.domain.elements())
        return [[self(x, y) for y in elems] for x in elems]

    def to_json(self):
        cod = self.codomain
        return {
            "domain": self.domain.to_json(),
            "codomain": cod.to_json(),
            "table": [[cod.value_to_json(v) for v in row] for row in self.tabulate()],
        }

    @classmethod
    def from_json(cls, obj, name="f"):
        dom = abgroup_from_json(obj["domain"])
        cod = abgroup_from_json(obj["codomain"])
        table = [[cod.value_from_json(v) for v in row] for row in obj["table"]]
        return cls.from_table(dom, cod, table, name=name)

    def _combine(self, other, op, name):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("cocycles have different domains or codomains")
        A = self.codomain
        f = Cocycle2(self.domain, A, lambda x, y: op(A, self(x, y), other(x, y)), name=name,
                     key=(name, self.key, other.key),
                     cocycle=self.verified_cocycle and other.verified_cocycle,
                     symmetric=self.verified_symmetric and other.verified_symmetric)
        return f

    def __add__(self, other):
        return self._combine(other, lambda A, a, b: A.add(a, b), f"({self.name}+{other.name})")

    def __sub__(self, other):
        return self._combine(other, lambda A, a, b: A.sub(a, b), f"({self.name}-{other.name})")

    def verify(self, samples=2000, seed=0):
        """Run both checks; set the flags when a check is exhaustive."""
        c = check_cocycle(self, samples=samples, seed=seed)
        s = check_symmetric(self, samples=samples, seed=seed)
        if c.exhaustive:
            self.verified_cocycle = c.ok
        if s.exhaustive:
            self.verified_symmetric = s.ok and c.ok
        return c, s


def _triples(B, k, samples, seed):
    if B.is_finite:
        elems = list(B.elements())
        return itertools.product(elems, repeat=k), True
    rng = random.Random(seed)
    return (tuple(B.random_element(rng, 1000) for _ in range(k)) for _ in range(samples)), False


def check_cocycle(f, samples=2000, seed=0):
    """Normalisation and the cocycle identity f(x+y,z) + f(x,y) = f(x,y+z) + f(y,z)."""
    B, A = f.domain, f.codomain
    it, exhaustive = _triples(B, 1, samples, seed)
    count = 0
    for (x,) in it:
        count += 1
        if f(B.zero, x) != A.zero or f(x, B.zero) != A.zero:
            return Check(False, exhaustive, count, ("normalisation", x))
    it, exhaustive = _triples(B, 3, samples, seed)
    for x, y, z in it:
        count += 1
        lhs = A.add(f(B.add(x, y), z), f(x, y))
        rhs = A.add(f(x, B.add(y, z)), f(y, z))
        if lhs != rhs:
            return Check(False, exhaustive, count, (x, y, z))
    return Check(True, exhaustive, count)


def check_symmetric(f, samples=2000, seed=0):
    B = f.domain
    it, exhaustive = _triples(B, 2, samples, seed)
    count = 0
    for x, y in it:
        count += 1
        if f(x, y) != f(y, x):
            return Check(False, exhaustive, count, (x, y))
    return Check(True, exhaustive, count)


def is_cocycle(f, samples=2000, seed=0):
    return check_cocycle(f, samples, seed)


def is_symmetric(f, samples=2000, seed=0):
    return check_symmetric(f, samples, seed)


def zero_cocycle(B, A):
    return Cocycle2(B, A, lambda x, y: A.zero, name="0", key=("zero", B.key, A.key),
                    cocycle=True, symmetric=True)


def coboundary_from(psi, B, A, name=None):
    """The coboundary (x, y) -> psi(x+y) - psi(x) - psi(y).

    ``psi`` is a callable or a mapping on B and must send 0 to 0.
    """
    fn = psi.__getitem__ if isinstance(psi, dict) else psi
    if fn(B.zero) != A.zero:
        raise InvalidNormalization("psi(0) must be 0")

    def f(x, y):
        return A.sub(A.sub(fn(B.add(x, y)), fn(x)), fn(y))

    key = None
    if isinstance(psi, dict):
        key = ("cob", B.key, A.key, tuple(sorted(psi.items())))
    out = Cocycle2(B, A, f, name=name or "d(psi)", key=key, cocycle=True, symmetric=True)
    out.psi = fn
    return out


class PolyCocycle(Cocycle2):
    """Scalar cocycle on R+ from the combinator language.

    f(x, y) = psi(x+y) - psi(x) - psi(y) + product * x * y, where
    psi(x) = sum_k psi_coeffs[k-1] * x^k has integer coefficients (so
    psi(0) = 0).  Both summands are symmetric cocycles by construction,
    which is what lets these be used over Z.
    """

    def __init__(self, ring, psi=(), product=0):
        self.ring = ring
        self.psi_coeffs = tuple(int(c) for c in psi)
        self.product = int(product)
        B = Additive(ring)
        super().__init__(B, B, self._eval, name=self._describe(),
                         key=("poly", ring.key, self.psi_coeffs, self.product),
                         cocycle=True, symmetric=True)
        self.psi = self._psi

    def _psi(self, x):
        R = self.ring
        out, power = R.zero, x
        for c in self.psi_coeffs:
            out = R.add(out, R.scale(c, power))
            power = R.mul(power, x)
        return out

    def _eval(self, x, y):
        R = self.ring
        v = R.sub(R.sub(self._psi(R.add(x, y)), self._psi(x)), self._psi(y))
        if self.product:
            v = R.add(v, R.scale(self.product, R.mul(x, y)))
        return v

    def _describe(self):
        parts = []
        if any(self.psi_coeffs):
            parts.append("d(" + "+".join(f"{c}x^{k}" for k, c in enumerate(self.psi_coeffs, 1) if c) + ")")
        if self.product:
            parts.append(f"{self.product}xy")
        return " + ".join(parts) or "0"

    def to_expr(self):
        return {"psi": [str(c) for c in self.psi_coeffs], "product": str(self.product)}


def carry_cocycle(ring):
    """The carry cocycle of Z/m: 1 when the residues of x and y overflow m."""
    m = ring.order
    B = Additive(ring)
    f = Cocycle2(B, B, lambda x, y: 1 if x + y >= m else 0, name="carry", key=("carry", ring.key))
    f.verify()
    return f


class VectorCocycle(Cocycle2):
    """R+ x R+ -> (R+)^K assembled from K scalar cocycles on R+."""

    def __init__(self, ring, components, name="f"):
        self.ring = ring
        self.components = tuple(components)
        B = Additive(ring)
        A = DirectSum(ring, len(self.components))
        comps = self.components
        super().__init__(B, A, lambda x, y: tuple(c(x, y) for c in comps), name=name,
                         key=("vec", ring.key, tuple(c.key for c in comps)),
                         cocycle=all(c.verified_cocycle for c in comps),
                         symmetric=all(c.verified_symmetric for c in comps))


# -- coboundary search --------------------------------------------------------


def _generating_tree(B):
    """Generators of a finite abelian group plus a spanning tree x = parent + gen."""
    elems = list(B.elements())
    by_order = sorted(elems, key=lambda e: -B.element_order(e))
    gens, span = [], {B.zero}
    parent = {}
    for cand in by_order:
        if cand in span:
            continue
        gens.append(cand)
        frontier = list(span)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = B.add(x, g)
                    if y not in span:
                        span.add(y)
                        new.append(y)
            frontier = new
        if len(span) == len(elems):
            break
    order = [B.zero]
    seen = {B.zero}
    for x in order:
        for k, g in enumerate(gens):
            y = B.add(x, g)
            if y not in seen:
                seen.add(y)
                parent[y] = (x, k)
                order.append(y)
    return gens, order, parent


def find_coboundary_witness(f, method="generators", limit=None):
    """A normalised psi with f = d(psi), or None; finite carriers only.

    ``method="generators"`` fixes psi on a generating set of B and
    propagates along psi(x+g) = psi(x) + psi(g) + f(x, g); every solution
    arises this way, so the search is exhaustive.  ``method="table"``
    enumerates psi on B minus {0} outright.
    """
    B, A = f.domain, f.codomain
    if not (B.is_finite and A.is_finite):
        raise NotEnumerable("coboundary search needs finite carriers")
    limit = budget(DEFAULT_COBOUNDARY_BUDGET) if limit is None else limit
    belems = list(B.elements())
    aelems = list(A.elements())
    pairs = [(x, y) for x in belems for y in belems]
    fvals = {p: f(*p) for p in pairs}

    def works(psi):
        return all(A.sub(A.sub(psi[B.add(x, y)], psi[x]), psi[y]) == fvals[x, y] for x, y in pairs)

    if method == "table":
        nonzero = [b for b in belems if b != B.zero]
        if len(aelems) ** len(nonzero) > limit:
            raise SearchInfeasible(f"{len(aelems)}^{len(nonzero)} candidates exceed budget {limit}")
        for values in itertools.product(aelems, repeat=len(nonzero)):
            psi = dict(zip(nonzero, values))
            psi[B.zero] = A.zero
            if works(psi):
                return psi
        return None

    gens, order, parent = _generating_tree(B)
    if len(aelems) ** len(gens) > limit:
        raise SearchInfeasible(f"{len(aelems)}^{len(gens)} candidates exceed budget {limit}")
    for values in itertools.product(aelems, repeat=len(gens)):
        psi = {B.zero: A.zero}
        for y in order[1:]:
            x, k = parent[y]
            psi[y] = A.add(A.add(psi[x], values[k]), fvals[x, gens[k]])
        if works(psi):
            return psi
    return None


def is_coboundary(f, method="generators", limit=None):
    return find_coboundary_witness(f, method=method, limit=limit) is not None


def extensions_equivalent(f, g, method="generators", limit=None):
    """E(f) and E(g) are equivalent iff f - g is a coboundary."""
    return is_coboundary(f - g, method=method, limit=limit)


# -- central extensions -------------------------------------------------------


class Extension:
    """E(f): the set B x A with (b1, a1)(b2, a2) = (b1 + b2, a1 + a2 + f(b1, b2))."""

    def __init__(self, A, B, f):
        self.A, self.B, self.f = A, B, f
        self.identity = (B.zero, A.zero)
        self.key = ("E", A.key, B.key, f.key)

    def mul(self, x, y):
        (b1, a1), (b2, a2) = x, y
        A, B = self.A, self.B
        return (B.add(b1, b2), A.add(A.add(a1, a2), self.f(b1, b2)))

    def inv(self, x):
        b, a = x
        A, B = self.A, self.B
        nb = B.neg(b)
        return (nb, A.sub(A.neg(a), self.f(b, nb)))

    def embed(self, a):
        return (self.B.zero, a)

    def elements(self):
        alist = list(self.A.elements())
        for b in self.B.elements():
            for a in alist:
                yield (b, a)

    @property
    def order(self):
        return self.A.order * self.B.order

    def finite(self):
        from .finite import FiniteGroup

        if not hasattr(self, "_finite"):
            self._finite = FiniteGroup.from_group(self)
        return self._finite

    def __repr__(self):
        return f"E({self.f.name})"


def extension_build(A, B, f):
    if f.domain != B or f.codomain != A:
        raise ValueError("cocycle must map B x B -> A")
    if not f.verified_cocycle:
        raise MustVerifyCocycle(f"{f!r} has not been verified as a cocycle")
    return Extension(A, B, f)


def coboundary_shift_map(E, E2, psi):
    """Index map E(f) -> E(f + d(psi)), (b, a) -> (b, a + psi(b))."""
    G, H = E.finite(), E2.finite()
    A = E.A
    return [H.index((b, A.add(a, psi(b)))) for b, a in G.labels]
