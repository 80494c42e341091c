"""Finite groups as Cayley tables, with the brute-force subgroup machinery.

Everything here works on element indices ``0..N-1``.  Structured groups
(N2n / QN / central extensions) are turned into a :class:`FiniteGroup` with
:meth:`FiniteGroup.from_group`; raw multiplication tables come in through
:meth:`FiniteGroup.from_table`, which validates the group axioms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidMap


@dataclass
class CheckReport:
    """Named pass/fail conditions with optional details for failures."""

    name: str
    results: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def record(self, condition, ok, detail=None):
        self.results[condition] = bool(ok)
        if not ok and detail is not None:
            self.details[condition] = detail

    @property
    def ok(self):
        return all(self.results.values())

    @property
    def failed(self):
        return [k for k, v in self.results.items() if not v]

    def to_json(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "results": dict(self.results),
            "details": {k: str(v) for k, v in self.details.items()},
        }


class FiniteGroup:
    def __init__(self, table, labels=None, name="group"):
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        N = self.table.shape[0]
        if self.table.shape != (N, N):
            raise ValueError("multiplication table must be square")
        self.order = N
        self.labels = list(labels) if labels is not None else list(range(N))
        self.name = name
        self._index = None
        ar = np.arange(N)
        ids = np.flatnonzero((self.table == ar[None, :]).all(axis=1))
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = int(ids[0])
        hits = self.table == self.identity
        if not (hits.sum(axis=1) == 1).all():
            raise ValueError("table does not have unique right inverses")
        self.inv = hits.argmax(axis=1)

    @classmethod
    def from_table(cls, table, labels=None, name="group"):
        G = cls(table, labels=labels, name=name)
        report = G.check_axioms()
        if not report.ok:
            raise ValueError(f"table is not a group: failed {report.failed}")
        return G

    @classmethod
    def from_group(cls, G, name=None):
        """Tabulate a structured finite group (anything with elements() and mul)."""
        if hasattr(G, "cayley_table"):
            table, labels = G.cayley_table()
        else:
            labels = list(G.elements())
            index = {x: i for i, x in enumerate(labels)}
            table = np.array([[index[G.mul(x, y)] for y in labels] for x in labels], dtype=np.int64)
        return cls(table, labels=labels, name=name or repr(G))

    # -- basics -----------------------------------------------------------

    def index(self, label):
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.labels)}
        return self._index[label]

    def mul(self, a, b):
        return int(self.table[a, b])

    def word(self, *elems):
        out = self.identity
        for e in elems:
            out = self.table[out, e]
        return int(out)

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[t[self.inv[a], self.inv[b]], a], b])

    @cached_property
    def comm_table(self):
        t, inv = self.table, self.inv
        return t[t[t[inv[:, None], inv[None, :]], np.arange(self.order)[:, None]], np.arange(self.order)[None, :]]

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x, a]
            k += 1
        return k

    def check_axioms(self):
        """Closure, associativity (all triples), identity and inverses."""
        rep = CheckReport("group-axioms")
        t, N = self.table, self.order
        rep.record("closure", t.min() >= 0 and t.max() < N)
        assoc = True
        bad = None
        for a in range(N):
            # (a b) c  vs  a (b c) for all b, c
            left = t[t[a]]  # row b -> t[ab, c]
            right = t[a][t]  # t[a, bc]
            if not np.array_equal(left, right):
                assoc = False
                b, c = np.argwhere(left != right)[0]
                bad = (a, int(b), int(c))
                break
        rep.record("associativity", assoc, bad)
        e = self.identity
        rep.record("identity", (t[e] == np.arange(N)).all() and (t[:, e] == np.arange(N)).all())
        ar = np.arange(N)
        rep.record("inverse", (t[ar, self.inv] == e).all() and (t[self.inv, ar] == e).all())
        return rep

    # -- subgroups ----------------------------------------------------------

    def generated(self, gens):
        """Subgroup generated by ``gens`` as a sorted tuple of indices."""
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        gens = sorted(set(int(g) for g in gens))
        frontier = [self.identity]
        while frontier:
            new = self.table[np.array(frontier)[:, None], np.array(gens or [self.identity])[None, :]].ravel()
            new = np.unique(new[~seen[new]])
            seen[new] = True
            frontier = list(new)
        return tuple(int(i) for i in np.flatnonzero(seen))

    @cached_property
    def center(self):
        t = self.table
        return tuple(int(i) for i in np.flatnonzero((t == t.T).all(axis=1)))

    def centralizer(self, a):
        t = self.table
        return tuple(int(i) for i in np.flatnonzero(t[a, :] == t[:, a]))

    def commutator_values(self, S=None, T=None):
        """The set {[s, t] : s in S, t in T} (defaults: whole group)."""
        C = self.comm_table
        S = np.arange(self.order) if S is None else np.asarray(S)
        T = np.arange(self.order) if T is None else np.asarray(T)
        return tuple(int(i) for i in np.unique(C[S[:, None], T[None, :]]))

    def commutator_subgroup(self, S=None, T=None):
        """[S, T]: the subgroup generated by commutators."""
        return self.generated(self.commutator_values(S, T))

    def is_abelian(self, S=None):
        S = np.arange(self.order) if S is None else np.asarray(S)
        sub = self.table[S[:, None], S[None, :]]
        return bool((sub == sub.T).all())

    def is_subgroup(self, S):
        S = np.asarray(sorted(S))
        if self.identity not in S:
            return False
        prods = self.table[S[:, None], S[None, :]]
        return bool(np.isin(prods, S).all() and np.isin(self.inv[S], S).all())

    @cached_property
    def center_quotient(self):
        return Quotient(self, self.center)

    def is_nilpotent_class2(self):
        """Whether [[x, y], z] = 1 for all x, y, z.

        Equivalent to every commutator value commuting with every element,
        which is what is evaluated (one row per distinct commutator).
        """
        vals = np.array(self.commutator_values())
        C = self.comm_table
        return bool((C[vals] == self.identity).all())

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


class Quotient:
    """Cosets of a normal subgroup; coset ids are assigned in order of first appearance."""

    def __init__(self, G, K):
        self.group = G
        self.K = tuple(K)
        K = np.asarray(self.K)
        coset = -np.ones(G.order, dtype=np.int64)
        reps = []
        for a in range(G.order):
            if coset[a] < 0:
                coset[G.table[a, K]] = len(reps)
                reps.append(a)
        self.coset_of = coset
        self.reps = np.array(reps, dtype=np.int64)
        self.order = len(reps)
        r = self.reps
        self.table = coset[G.table[r[:, None], r[None, :]]]
        self.zero = int(coset[G.identity])

    def cosets_of(self, S):
        return tuple(sorted(set(int(c) for c in self.coset_of[np.asarray(S)])))


# -- basis conditions -------------------------------------------------------


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def basis_report(H, basis, max_products=10**6):
    """Check the five structural conditions for a candidate basis (h_1..h_n).

    ``basis`` lists element indices of ``H``.  H_i is the centralizer of h_i
    and H_ij is [h_i, H_j]; the remaining statements of condition (1) are
    checked against that.  Condition (5) is checked by counting: the
    product maps (H_n/Z x ... x H_1/Z) -> H/Z and prod H_ij -> Z must be
    bijections.
    """
    rep = CheckReport("basis")
    n = len(basis)
    basis = [int(h) for h in basis]
    rep.record("distinct-nontrivial", len(set(basis)) == n and H.identity not in basis, basis)
    Z = H.center
    Zset = set(Z)
    Hi = [H.centralizer(h) for h in basis]
    Hij = {}
    cond1 = True
    bad1 = []
    for i, j in _pairs(n):
        a = H.commutator_subgroup([basis[i]], Hi[j])
        b = H.commutator_subgroup(Hi[i], [basis[j]])
        c = H.commutator_subgroup(Hi[i], Hi[j])
        Hij[i, j] = a
        if not (a == b == c):
            cond1 = False
            bad1.append((i + 1, j + 1))
    rep.record("1", cond1, bad1)
    bad2 = [(i + 1, j + 1) for i, j in _pairs(n) if set(Hi[i]) & set(Hi[j]) != Zset]
    rep.record("2", not bad2, bad2)
    bad3 = [i + 1 for i in range(n) if not H.is_abelian(Hi[i])]
    rep.record("3", not bad3, bad3)
    rep.record("4", set(H.commutator_subgroup()) <= Zset)

    Q = Quotient(H, Z)
    coset_lists = [sorted(Q.cosets_of(S)) for S in Hi]
    total = 1
    for cl in coset_lists:
        total *= len(cl)
    ok5a = False
    if total <= max_products:
        seen = set()
        ok5a = True
        # u_n ... u_1 with u_i ranging over coset representatives of H_i / Z
        for combo in itertools.product(*reversed(coset_lists)):
            x = H.word(*(int(Q.reps[c]) for c in combo))
            c = int(Q.coset_of[x])
            if c in seen:
                ok5a = False
                break
            seen.add(c)
        ok5a = ok5a and len(seen) == Q.order
    rep.record("5a", ok5a, f"{total} products for {Q.order} cosets")

    ok5b = False
    sets = [Hij[p] for p in _pairs(n)]
    total = 1
    for s in sets:
        total *= len(s)
    if total <= max_products:
        prods = set()
        ok5b = True
        for combo in itertools.product(*sets):
            x = H.word(*combo)
            if x in prods or x not in Zset:
                ok5b = False
                break
            prods.add(x)
        ok5b = ok5b and len(prods) == len(Z)
    rep.record("5b", ok5b, f"{total} products for |Z|={len(Z)}")
    rep.subgroups = {"Z": Z, "H_i": Hi, "H_ij": Hij}
    return rep


# -- maps between finite groups ------------------------------------------


def is_homomorphism(G, H, phi):
    phi = np.asarray(phi)
    return bool(np.array_equal(phi[G.table], H.table[phi[:, None], phi[None, :]]))


def is_isomorphism(G, H, phi):
    phi = np.asarray(phi)
    if G.order != H.order or len(phi) != G.order:
        return False
    return len(np.unique(phi)) == G.order and is_homomorphism(G, H, phi)


def require_isomorphism(G, H, phi):
    if not is_isomorphism(G, H, phi):
        raise InvalidMap("map is not a group isomorphism")
    return np.asarray(phi)
