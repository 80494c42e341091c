"""The twisted groups N_{2,n}(R, f^1, ..., f^n).

Same carrier as N_{2,n}(R); the product picks up an extra central term
sum_k f^k(a_k, b_k) where each f^k: R+ x R+ -> (R+)^K is a symmetric
2-cocycle (K = n(n-1)/2 components, lexicographic pair order).
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .cohomology import (
    Additive,
    Cocycle2,
    DirectSum,
    PolyCocycle,
    VectorCocycle,
    carry_cocycle,
    zero_cocycle,
)
from .errors import MustVerifyCocycle
from .finite import CheckReport
from .n2n import Element, N2nGroup, lex_pairs
from .rings import ring_from_json


class CocycleFamily:
    """n symmetric cocycles R+ x R+ -> (R+)^K, validated on construction."""

    def __init__(self, ring, n, cocycles):
        self.ring = ring
        self.n = n
        self.K = n * (n - 1) // 2
        self.cocycles = tuple(cocycles)
        if len(self.cocycles) != n:
            raise ValueError(f"need {n} cocycles, got {len(self.cocycles)}")
        B, A = Additive(ring), DirectSum(ring, self.K)
        for i, f in enumerate(self.cocycles, 1):
            if f.domain != B or f.codomain != A:
                raise ValueError(f"f^{i} must map {B!r} x {B!r} -> {A!r}")
            if ring.is_finite:
                f.verify()
            if not (f.verified_cocycle and f.verified_symmetric):
                raise MustVerifyCocycle(f"f^{i} is not a verified symmetric cocycle")
        self.key = tuple(f.key for f in self.cocycles)

    @classmethod
    def zero(cls, ring, n):
        K = n * (n - 1) // 2
        B, A = Additive(ring), DirectSum(ring, K)
        return cls(ring, n, [zero_cocycle(B, A) for _ in range(n)])

    @classmethod
    def from_components(cls, ring, n, components):
        """``components[i][p]`` is a scalar cocycle on R+ (or None for zero)."""
        K = n * (n - 1) // 2
        B = Additive(ring)
        cocycles = []
        for i, comps in enumerate(components, 1):
            comps = list(comps) + [None] * (K - len(comps))
            comps = [zero_cocycle(B, B) if c is None else c for c in comps]
            cocycles.append(VectorCocycle(ring, comps, name=f"f^{i}"))
        return cls(ring, n, cocycles)

    def __call__(self, i, a, b):
        """f^i(a, b) for 1-based i."""
        return self.cocycles[i - 1](a, b)

    @property
    def is_zero(self):
        if not self.ring.is_finite:
            return all(f.key[0] == "zero" for f in self.cocycles)
        return not self.tables().any()

    def tables(self):
        """Array T[k, p, a, b] = component p of f^(k+1)(a, b); finite rings only."""
        if not hasattr(self, "_tables"):
            elems = list(self.ring.elements())
            m = len(elems)
            T = np.zeros((self.n, self.K, m, m), dtype=np.int64)
            for k, f in enumerate(self.cocycles):
                for a, b in itertools.product(elems, repeat=2):
                    T[k, :, a, b] = f(a, b)
            self._tables = T
        return self._tables

    def transport(self, mu, target_ring):
        """The family pushed through a ring isomorphism ``mu`` (a dict R -> S)."""
        inv = {v: k for k, v in mu.items()}
        B, A = Additive(target_ring), DirectSum(target_ring, self.K)
        out = []
        for i, f in enumerate(self.cocycles, 1):
            table = [[tuple(mu[v] for v in f(inv[x], inv[y])) for y in B.elements()] for x in B.elements()]
            out.append(Cocycle2.from_table(B, A, table, name=f"mu f^{i}"))
        return CocycleFamily(target_ring, self.n, out)

    def to_json(self):
        out = []
        for f in self.cocycles:
            comps = getattr(f, "components", None)
            if comps is None:
                out.append({"table": f.to_json()["table"]})
                continue
            entry = []
            for c in comps:
                if c.key[0] in ("zero", "carry"):
                    entry.append({"kind": c.key[0]})
                elif isinstance(c, PolyCocycle):
                    entry.append(c.to_expr())
                else:
                    entry.append({"table": c.to_json()["table"]})
            out.append({"components": entry})
        return out


def family_from_json(ring, n, entries):
    K = n * (n - 1) // 2
    B, A = Additive(ring), DirectSum(ring, K)
    cocycles = []
    for i, entry in enumerate(entries, 1):
        if "table" in entry:
            table = [[A.value_from_json(v) for v in row] for row in entry["table"]]
            cocycles.append(Cocycle2.from_table(B, A, table, name=f"f^{i}"))
            continue
        comps = []
        for c in entry["components"]:
            if "table" in c:
                t = [[B.value_from_json(v) for v in row] for row in c["table"]]
                comps.append(Cocycle2.from_table(B, B, t))
            elif c.get("kind") == "carry":
                comps.append(carry_cocycle(ring))
            elif c.get("kind") == "zero":
                comps.append(zero_cocycle(B, B))
            else:
                comps.append(PolyCocycle(ring, [int(x) for x in c.get("psi", [])], int(c.get("product", 0))))
        if len(comps) > K:
            raise ValueError(f"f^{i} has {len(comps)} components, expected at most {K}")
        comps += [zero_cocycle(B, B) for _ in range(K - len(comps))]
        cocycles.append(VectorCocycle(ring, comps, name=f"f^{i}"))
    return CocycleFamily(ring, n, cocycles)


class QnGroup(N2nGroup):
    """N_{2,n}(R, f^1..f^n) with the twisted product."""

    def __init__(self, ring, n, family=None):
        super().__init__(ring, n)
        if family is None:
            family = CocycleFamily.zero(ring, n)
        if family.n != n or family.ring != ring:
            raise ValueError("cocycle family does not match the group")
        self.family = family

    @property
    def key(self):
        return ("QN", self.ring.key, self.n, self.family.key)

    def __repr__(self):
        return f"QN_2,{self.n}({self.ring!r})"

    def _twist(self, a, b):
        R = self.ring
        total = [R.zero] * self.K
        for k, f in enumerate(self.family.cocycles):
            if a[k] == R.zero or b[k] == R.zero:
                continue  # normalised cocycles vanish here
            v = f(a[k], b[k])
            total = [R.add(t, c) for t, c in zip(total, v)]
        return total

    def _twist_vec(self, Ax, Ay):
        add, _, _ = self.ring.tables
        T = self.family.tables()
        out = None
        for k in range(self.n):
            # T[k][:, a, b] -> (K, N, N) -> (N, N, K)
            v = np.moveaxis(T[k][:, Ax[..., k], Ay[..., k]], 0, -1)
            out = v if out is None else add[out, v]
        return out

    def inv(self, x):
        """Closed form: alphas negate, central part solved from the product formula."""
        self._check(x)
        R = self.ring
        a = x.alphas
        na = tuple(R.neg(v) for v in a)
        tw = self._twist(a, na)
        gam = tuple(R.sub(R.sub(R.mul(a[i - 1], a[j - 1]), c), t)
                    for (i, j), c, t in zip(self.pairs, x.gammas, tw))
        return Element(self, na, gam)


def qn_mul(x, y):
    return x.group.mul(x, y)


def qn_inv(x):
    return x.group.inv(x)


def qn_commutator(x, y):
    return x.group.commutator(x, y)


def product_part(ring, n):
    """The bilinear cocycle (a, b) -> (a_i b_j)_{i<j} on (R+)^n."""
    pairs = lex_pairs(n)
    B, A = DirectSum(ring, n), DirectSum(ring, len(pairs))
    return Cocycle2(B, A, lambda a, b: tuple(ring.mul(a[i - 1], b[j - 1]) for i, j in pairs),
                    name="prod", key=("prod", ring.key, n), cocycle=True)


def induced_big_cocycle(family):
    """f_ij(a, b) = a_i b_j + sum_k f^k_ij(a_k, b_k) on (R+)^n with values in (R+)^K.

    A cocycle by construction: the bilinear part is one, and each summand is
    a cocycle pulled back along the k-th coordinate projection.
    """
    ring, n = family.ring, family.n
    prod = product_part(ring, n)
    A = prod.codomain

    def f(a, b):
        v = prod(a, b)
        for k, g in enumerate(family.cocycles):
            v = A.add(v, g(a[k], b[k]))
        return v

    return Cocycle2(prod.domain, A, f, name="big", key=("big", family.key), cocycle=True)


def extension_to_group_map(E, G):
    """Index map from E(big cocycle) to the QN group: ((a), (c)) -> ((a), (c))."""
    HE, HG = E.finite(), G.finite()
    return [HG.index(G.element(b, a)) for b, a in HE.labels]


def check_relations(G, samples=500, seed=0):
    """Relations (a)-(d) of the generators-and-relations presentation.

    Exhaustive over all ring elements for finite rings, otherwise over
    ``samples`` random pairs (alpha, beta) per relation instance.
    """
    R, n = G.ring, G.n
    family = getattr(G, "family", None)
    if R.is_finite:
        scalars = list(itertools.product(list(R.elements()), repeat=2))
    else:
        rng = random.Random(seed)
        scalars = [(R.random_element(rng, 100), R.random_element(rng, 100)) for _ in range(samples)]
    rep = CheckReport(f"relations {G!r}")
    e = G.identity
    bad = {k: [] for k in "abcd"}
    for al, be in scalars:
        for i, j in G.pairs:
            lhs = G.commutator_word(G.gen(i, al), G.gen(j, be))
            if lhs != G.central_gen(i, j, R.mul(al, be)):
                bad["a"].append((i, j, al, be))
        for k, l in G.pairs:
            z = G.central_gen(k, l, be)
            for i in range(1, n + 1):
                if G.commutator_word(G.gen(i, al), z) != e:
                    bad["b"].append((i, (k, l), al, be))
            for r, s in G.pairs:
                if G.commutator_word(G.central_gen(r, s, al), z) != e:
                    bad["b"].append(((r, s), (k, l), al, be))
        for i in range(1, n + 1):
            lhs = G.mul(G.gen(i, al), G.gen(i, be))
            rhs = G.gen(i, R.add(al, be))
            vals = family(i, al, be) if family is not None else (R.zero,) * G.K
            for (p, q), v in zip(G.pairs, vals):
                rhs = G.mul(rhs, G.central_gen(p, q, v))
            if lhs != rhs:
                bad["c"].append((i, al, be))
        for i, j in G.pairs:
            if G.mul(G.central_gen(i, j, al), G.central_gen(i, j, be)) != G.central_gen(i, j, R.add(al, be)):
                bad["d"].append((i, j, al, be))
    for k in "abcd":
        rep.record(k, not bad[k], bad[k][:5])
    rep.exhaustive = R.is_finite
    return rep


def group_from_json(obj):
    """``{"ring": ..., "n": 2, "family": [...]}``; no family means N_{2,n}(R)."""
    ring = ring_from_json(obj["ring"])
    n = int(obj["n"])
    if obj.get("family"):
        return QnGroup(ring, n, family_from_json(ring, n, obj["family"]))
    return N2nGroup(ring, n)


def group_to_json(G):
    out = {"ring": G.ring.to_json(), "n": G.n}
    if isinstance(G, QnGroup):
        out["family"] = G.family.to_json()
    return out
