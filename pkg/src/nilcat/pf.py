"""The ring P(f_G) of the commutator map f_G: G/Z x G/Z -> Z.

P(f_G) consists of pairs (phi1, phi0) of endomorphisms of G/Z and Z with
f(phi1 x, y) = f(x, phi1 y) = phi0 f(x, y).  For N/QN groups over a
commutative ring R every such pair is the scalar action of some r in R,
which is what :func:`pf_reconstruct` checks by exhaustive enumeration.

Quotient elements are coset ids of :class:`~nilcat.finite.Quotient`, centre
elements are positions in the sorted centre tuple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DEFAULT_PF_BUDGET, InvalidMap, SearchInfeasible, budget
from .finite import FiniteGroup, Quotient, require_isomorphism
from .n2n import N2nGroup
from .rings import TableRing


def _as_finite(G):
    if isinstance(G, FiniteGroup):
        return G, None
    return G.finite(), G


class CommutatorMap:
    """f_G tabulated on coset ids, with values as centre positions."""

    def __init__(self, G):
        self.H, self.structured = _as_finite(G)
        H = self.H
        self.Z = H.center
        self.zpos = -np.ones(H.order, dtype=np.int64)
        self.zpos[list(self.Z)] = np.arange(len(self.Z))
        self.Q = Quotient(H, self.Z)
        Zarr = np.array(self.Z)
        self.ztable = self.zpos[H.table[Zarr[:, None], Zarr[None, :]]]
        self.qtable = self.Q.table
        reps = self.Q.reps
        self.values = H.comm_table[reps[:, None], reps[None, :]]
        self.F = self.zpos[self.values]  # -1 would mean a non-central commutator
        self.zero_q = self.Q.zero
        self.zero_z = int(self.zpos[H.identity])
        if self.structured is not None:
            self._coset_of_alphas = {H.labels[int(r)].alphas: c for c, r in enumerate(reps)}

    def __call__(self, x, y):
        """f_G(xZ, yZ) for group elements (structured) or H indices."""
        cx, cy = self.coset(x), self.coset(y)
        v = int(self.values[cx, cy])
        return self.H.labels[v] if self.structured is not None else v

    def coset(self, x):
        if isinstance(x, (int, np.integer)):
            return int(self.Q.coset_of[x])
        return self._coset_of_alphas[x.alphas]

    def central(self, pos):
        return self.H.labels[self.Z[pos]] if self.structured is not None else self.Z[pos]

    # -- properties ---------------------------------------------------------

    def well_defined(self):
        C = self.H.comm_table
        cos = self.Q.coset_of
        return bool((C == self.values[cos[:, None], cos[None, :]]).all())

    def central_valued(self):
        return bool((self.F >= 0).all())

    def biadditive(self):
        F, q, z = self.F, self.qtable, self.ztable
        left = F[q[:, :, None], np.arange(self.Q.order)[None, None, :]]  # f(a+b, c)
        right = z[F[:, None, :], F[None, :, :]]  # f(a,c) + f(b,c)
        ok1 = np.array_equal(left, right)
        left = F[np.arange(self.Q.order)[:, None, None], q[None, :, :]]  # f(a, b+c)
        right = z[F[:, :, None], F[:, None, :]]
        return ok1 and np.array_equal(left, right)

    def nondegenerate(self):
        """Only the zero coset pairs trivially with everything (on both sides)."""
        dead = ((self.F == self.zero_z).all(axis=1)) | ((self.F == self.zero_z).all(axis=0))
        return bool(dead.sum() == 1 and dead[self.zero_q])

    def onto(self):
        vals = np.unique(self.values)
        return set(self.H.generated(vals)) == set(self.Z)

    def report(self):
        return {
            "well-defined": self.well_defined(),
            "central-valued": self.central_valued(),
            "biadditive": self.biadditive(),
            "non-degenerate": self.nondegenerate(),
            "onto": self.onto(),
        }


def commutator_bilinear_map(G):
    return CommutatorMap(G)


# -- width and complete systems ------------------------------------------------


@dataclass
class BilinearMapProfile:
    width: int | None
    csize: int | None
    complete_system: tuple = ()

    @property
    def type(self):
        return (self.width, self.csize)

    def to_json(self):
        return {"width": self.width, "csize": self.csize, "type": list(self.type)}


def width(f):
    """Least s with every centre element a product of s commutator values."""
    vals = np.unique(f.F)
    reach = np.zeros(len(f.Z), dtype=bool)
    reach[f.zero_z] = True
    for s in range(1, len(f.Z) + 1):
        idx = np.flatnonzero(reach)
        new = np.zeros_like(reach)
        new[np.unique(f.ztable[idx[:, None], vals[None, :]])] = True
        if np.array_equal(new, reach) and s > 1:
            return None  # values do not generate
        reach = new
        if reach.all():
            return s
    return None


def _killers(f):
    """kill[e, x]: f(x, e) = f(e, x) = 0."""
    z = f.zero_z
    return (f.F == z).T & (f.F == z)


def is_complete_system(f, cosets):
    """Whether f(x, E) = f(E, x) = 0 forces x = 0."""
    kill = _killers(f)
    alive = np.ones(f.Q.order, dtype=bool)
    for e in cosets:
        alive &= kill[e]
    return bool(alive.sum() == 1 and alive[f.zero_q])


def complete_system_size(f, max_size=None):
    """c(f) by searching subsets of nonzero cosets in increasing size."""
    kill = _killers(f)
    cands = [c for c in range(f.Q.order) if c != f.zero_q]
    max_size = max_size or len(cands)
    for k in range(1, max_size + 1):
        for E in itertools.combinations(cands, k):
            alive = np.logical_and.reduce(kill[list(E)], axis=0)
            if alive.sum() == 1:
                return k, E
    return None, ()


def profile(G):
    f = commutator_bilinear_map(G)
    c, E = complete_system_size(f)
    return BilinearMapProfile(width(f), c, tuple(int(e) for e in E))


def standard_complete_system(G):
    """Coset ids of g_1..g_n for a structured group."""
    f = commutator_bilinear_map(G)
    return [f.coset(g) for g in G.standard_basis()[0]]


# -- endomorphisms of finite abelian groups -----------------------------------


def _element_orders(table, zero):
    N = table.shape[0]
    orders = np.ones(N, dtype=np.int64)
    x = np.arange(N)
    k = 1
    while (x != zero).any():
        pending = x != zero
        orders[pending] += 1
        x = np.where(pending, table[x, np.arange(N)], x)
        k += 1
    return orders


def _span(table, zero, gens):
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(table[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


@dataclass
class AbelianPresentation:
    """Generators plus a spanning tree: element x = parent[x] + gens[via[x]]."""

    table: np.ndarray
    zero: int
    gens: list
    orders: np.ndarray
    parent: np.ndarray
    via: np.ndarray
    order_list: list = field(default_factory=list)  # BFS order, zero first

    @classmethod
    def build(cls, table, zero):
        table = np.asarray(table)
        N = table.shape[0]
        orders = _element_orders(table, zero)
        gens, span = [], {zero}
        # greedy: largest order first, skipping what is already spanned
        for x in sorted(range(N), key=lambda x: (-orders[x], x)):
            if len(span) == N:
                break
            if x not in span:
                gens.append(x)
                span = _span(table, zero, gens)
        parent = -np.ones(N, dtype=np.int64)
        via = -np.ones(N, dtype=np.int64)
        seen = {zero}
        order_list = [zero]
        frontier = [zero]
        while frontier:
            nxt = []
            for a in frontier:
                for k, g in enumerate(gens):
                    b = int(table[a, g])
                    if b not in seen:
                        seen.add(b)
                        parent[b], via[b] = a, k
                        order_list.append(b)
                        nxt.append(b)
            frontier = nxt
        return cls(table, zero, gens, orders, parent, via, order_list)

    def image_candidates(self, target_table=None, target_zero=None):
        """Per generator, the target elements whose order divides the generator's."""
        tt = self.table if target_table is None else np.asarray(target_table)
        tz = self.zero if target_zero is None else target_zero
        t_orders = _element_orders(tt, tz)
        return [np.flatnonzero(self.orders[g] % t_orders == 0) for g in self.gens]

    def candidate_count(self):
        n = 1
        for c in self.image_candidates():
            n *= len(c)
        return n

    def extend(self, images):
        """Extend generator images (batch x gens) along the tree; returns batch x N."""
        images = np.atleast_2d(images)
        B, N = images.shape[0], self.table.shape[0]
        phi = np.empty((B, N), dtype=np.int64)
        phi[:, self.zero] = self.zero
        for x in self.order_list[1:]:
            phi[:, x] = self.table[phi[:, self.parent[x]], images[:, self.via[x]]]
        return phi

    def homomorphic(self, phi):
        """Mask over the batch: phi(a + b) = phi(a) + phi(b) on the full table.

        Candidates are first screened on the generator columns (cheap), the
        survivors then get the full-table check.
        """
        t = self.table
        mask = np.ones(phi.shape[0], dtype=bool)
        for g in self.gens:
            lhs = phi[:, t[:, g]]
            rhs = t[phi, phi[:, g][:, None]]
            mask &= (lhs == rhs).all(axis=1)
        idx = np.flatnonzero(mask)
        if len(idx):
            sub = phi[idx]
            full = (sub[:, t] == t[sub[:, :, None], sub[:, None, :]]).all(axis=(1, 2))
            mask[idx[~full]] = False
        return mask


def abelian_endomorphisms(table, zero, limit=None, batch=2048):
    """All endomorphisms of a finite abelian group given by its table."""
    P = AbelianPresentation.build(table, zero)
    limit = budget(DEFAULT_PF_BUDGET) if limit is None else limit
    if P.candidate_count() > limit:
        raise SearchInfeasible(f"{P.candidate_count()} endomorphism candidates exceed budget {limit}")
    out = []
    for chunk in _batched(itertools.product(*P.image_candidates()), batch):
        phi = P.extend(np.array(chunk, dtype=np.int64))
        out.extend(phi[P.homomorphic(phi)])
    return np.array(out, dtype=np.int64).reshape(-1, table.shape[0])


def _batched(it, n):
    it = iter(it)
    while True:
        chunk = list(itertools.islice(it, n))
        if not chunk:
            return
        yield chunk


# -- P(f) -----------------------------------------------------------------------


@dataclass
class PfScalar:
    gamma: object
    phi1: np.ndarray  # on coset ids
    phi0: np.ndarray  # on centre positions

    def key(self):
        return (tuple(int(v) for v in self.phi1), tuple(int(v) for v in self.phi0))


def scalar_to_pf(gamma, G, f=None):
    """The pair acting as x -> x^gamma on G/Z and on Z (structured groups)."""
    f = f or commutator_bilinear_map(G)
    R = G.ring
    H = f.H
    phi1 = np.empty(f.Q.order, dtype=np.int64)
    for c, r in enumerate(f.Q.reps):
        a = H.labels[int(r)].alphas
        phi1[c] = f._coset_of_alphas[tuple(R.mul(gamma, v) for v in a)]
    phi0 = np.empty(len(f.Z), dtype=np.int64)
    for p, z in enumerate(f.Z):
        x = H.labels[z]
        y = G.element(x.alphas, tuple(R.mul(gamma, v) for v in x.gammas))
        phi0[p] = f.zpos[H.index(y)]
    return PfScalar(gamma, phi1, phi0)


def is_admissible(f, phi1, phi0):
    """f(phi1 x, y) = f(x, phi1 y) = phi0 f(x, y) for all cosets x, y."""
    F = f.F
    a = F[phi1[:, None], np.arange(f.Q.order)[None, :]]
    b = F[np.arange(f.Q.order)[:, None], phi1[None, :]]
    return bool(np.array_equal(a, b) and np.array_equal(a, phi0[F]))


@dataclass
class PfReconstruction:
    pairs: list  # (phi1, phi0) arrays
    ring: TableRing
    candidates: int  # size of the full pair space |End(G/Z)-cands| x |End(Z)-cands|
    examined: int = 0
    eta: dict | None = None  # pair index -> ring element, structured groups only
    all_scalar: bool | None = None
    eta_is_ring_iso: bool | None = None
    f: CommutatorMap | None = None

    @property
    def size(self):
        return len(self.pairs)

    def index_of(self, phi1, phi0):
        key = (tuple(int(v) for v in phi1), tuple(int(v) for v in phi0))
        return self._index[key]

    def to_json(self):
        out = {"size": self.size, "candidates": self.candidates,
               "examined": self.examined, "ring": self.ring.to_json(),
               "pairs": [{"phi1": [int(v) for v in p1], "phi0": [int(v) for v in p0]} for p1, p0 in self.pairs]}
        if self.eta is not None:
            R = self.f.structured.ring
            out["eta"] = {str(k): R.to_str(v) for k, v in self.eta.items()}
            out["all_scalar"] = self.all_scalar
            out["eta_is_ring_iso"] = self.eta_is_ring_iso
        return out


def pf_reconstruct(G, limit=None, batch=2048):
    """Enumerate every admissible pair and assemble the ring they form.

    Staged search.  phi1 runs over every candidate for G/Z (generator
    images extended along a spanning tree); a candidate is kept if it
    satisfies f(phi1 x, y) = f(x, phi1 y) and is a homomorphism on the full
    table.  Each survivor is then tried against every candidate for Z in the
    same way.  Every candidate is either rejected by a failing identity or
    checked completely.  The budget applies to the number of candidates
    examined.
    """
    f = commutator_bilinear_map(G)
    limit = budget(DEFAULT_PF_BUDGET) if limit is None else limit
    P1 = AbelianPresentation.build(f.qtable, f.zero_q)
    P0 = AbelianPresentation.build(f.ztable, f.zero_z)
    n1, n0 = P1.candidate_count(), P0.candidate_count()
    if n1 > limit:
        raise SearchInfeasible(f"{n1} candidates for phi1 exceed budget {limit}")
    F = f.F
    ar = np.arange(f.Q.order)
    sym = []
    # rows of generators first: they reject most candidates early
    rows = list(dict.fromkeys(list(P1.gens) + list(range(f.Q.order))))
    for chunk in _batched(itertools.product(*P1.image_candidates()), batch):
        phi = P1.extend(np.array(chunk, dtype=np.int64))
        for x in rows:
            # f(phi x, y) = f(x, phi y) for all y
            phi = phi[(F[phi[:, x]] == F[x][phi]).all(axis=1)]
            if not len(phi):
                break
        if len(phi):
            sym.extend(phi[P1.homomorphic(phi)])
    total = n1 + len(sym) * n0
    if total > limit:
        raise SearchInfeasible(f"{total} candidate pairs exceed budget {limit}")
    found = []
    offset = 0
    for chunk in _batched(itertools.product(*P0.image_candidates()), batch):
        ext = P0.extend(np.array(chunk, dtype=np.int64))
        for s, phi1 in enumerate(sym):
            lhs = F[phi1[:, None], ar[None, :]]
            cand, pos = ext, np.arange(len(ext))
            # phi0 f(x, y) = f(phi1 x, y), one row at a time
            for x in range(f.Q.order):
                keep = (cand[:, F[x]] == lhs[x]).all(axis=1)
                cand, pos = cand[keep], pos[keep]
                if not len(cand):
                    break
            if len(cand):
                hom = P0.homomorphic(cand)
                found.extend(((s, offset + int(p)), phi1, phi0) for p, phi0 in zip(pos[hom], cand[hom]))
        offset += len(ext)
    found.sort(key=lambda t: t[0])
    pairs = [(phi1, phi0) for _, phi1, phi0 in found]
    rec = _assemble(f, pairs, n1 * n0)
    rec.examined = total
    if f.structured is not None:
        _attach_eta(rec, f)
    return rec


def _assemble(f, pairs, candidates):
    index = {(tuple(int(v) for v in p1), tuple(int(v) for v in p0)): k for k, (p1, p0) in enumerate(pairs)}
    k = len(pairs)
    q, z = f.qtable, f.ztable
    add = np.empty((k, k), dtype=np.int64)
    mul = np.empty((k, k), dtype=np.int64)
    for a, (a1, a0) in enumerate(pairs):
        for b, (b1, b0) in enumerate(pairs):
            add[a, b] = index[tuple(int(v) for v in q[a1, b1]), tuple(int(v) for v in z[a0, b0])]
            mul[a, b] = index[tuple(int(v) for v in a1[b1]), tuple(int(v) for v in a0[b0])]
    zero = index[(f.zero_q,) * f.Q.order, (f.zero_z,) * len(f.Z)]
    one = index[tuple(range(f.Q.order)), tuple(range(len(f.Z)))]
    ring = TableRing(add, mul, zero=zero, one=one)
    rec = PfReconstruction(list(pairs), ring, candidates, f=f)
    rec._index = index
    return rec


def _attach_eta(rec, f):
    G = f.structured
    R = G.ring
    eta = {}
    for g in R.elements():
        s = scalar_to_pf(g, G, f)
        k = rec._index.get(s.key())
        if k is not None:
            eta[k] = g
    rec.eta = eta
    rec.all_scalar = len(eta) == rec.size
    if rec.all_scalar:
        T = rec.ring
        rec.eta_is_ring_iso = all(
            eta[T.add(a, b)] == R.add(eta[a], eta[b]) and eta[T.mul(a, b)] == R.mul(eta[a], eta[b])
            for a in eta for b in eta) and len(set(eta.values())) == R.order
    else:
        rec.eta_is_ring_iso = False


def pf_action(rec, k, coset):
    """Act with the k-th admissible pair on a coset id."""
    return int(rec.pairs[k][0][coset])


# -- transport along isomorphisms ------------------------------------------------


@dataclass
class Transport:
    theta: list  # pair index in P(f_G) -> pair index in P(f_H)
    admissible: bool
    ring_iso: bool
    mu: dict | None = None  # R -> S when both sides are structured

    def to_json(self):
        out = {"theta": self.theta, "admissible": self.admissible, "ring_iso": self.ring_iso}
        if self.mu is not None:
            out["mu"] = {str(k): str(v) for k, v in self.mu.items()}
        return out


def pf_isomorphism_transport(G, H, phi, recG=None, recH=None):
    """theta(phi1, phi0) = (p1 phi1 p1^-1, p0 phi0 p0^-1) for the maps p1, p0 induced by phi.

    ``phi`` is an index map between the tabulated groups.
    """
    A, _ = _as_finite(G)
    B, _ = _as_finite(H)
    try:
        phi = require_isomorphism(A, B, phi)
    except InvalidMap:
        raise
    recG = recG or pf_reconstruct(G)
    recH = recH or pf_reconstruct(H)
    fG, fH = recG.f, recH.f
    p1 = fH.Q.coset_of[phi[fG.Q.reps]]
    p0 = fH.zpos[phi[np.array(fG.Z)]]
    p1inv = np.argsort(p1)
    p0inv = np.argsort(p0)
    theta = []
    admissible = True
    for a1, a0 in recG.pairs:
        b1 = p1[a1[p1inv]]
        b0 = p0[a0[p0inv]]
        key = (tuple(int(v) for v in b1), tuple(int(v) for v in b0))
        k = recH._index.get(key)
        if k is None:
            admissible = admissible and is_admissible(fH, b1, b0)
            theta.append(None)
        else:
            theta.append(k)
    ring_iso = None not in theta and len(set(theta)) == recH.size == recG.size
    if ring_iso:
        S, T = recG.ring, recH.ring
        ring_iso = all(theta[S.add(a, b)] == T.add(theta[a], theta[b])
                       and theta[S.mul(a, b)] == T.mul(theta[a], theta[b])
                       for a in range(S.order) for b in range(S.order))
    mu = None
    if ring_iso and recG.eta is not None and recH.eta is not None and recG.all_scalar and recH.all_scalar:
        mu = {recG.eta[k]: recH.eta[theta[k]] for k in range(recG.size)}
    return Transport(theta, admissible and None not in theta, ring_iso, mu)


def inner_automorphism(G, g):
    """Index map x -> g^-1 x g on the tabulated group."""
    H, S = _as_finite(G)
    if S is not None and not isinstance(g, (int, np.integer)):
        g = H.index(g)
    t = H.table
    return t[t[H.inv[g], np.arange(H.order)], g]


def relabel_map(G, images):
    """Index map of the endomorphism sending g_i to images[i] (structured groups).

    x = g_n^a_n ... g_1^a_1 * central part; the central part is mapped through
    commutators of the images, so this is only a homomorphism when the images
    satisfy the same relations (checked by callers via require_isomorphism).
    """
    if not isinstance(G, N2nGroup):
        raise TypeError("relabel_map needs a structured group")
    H = G.finite()
    R = G.ring
    out = np.empty(H.order, dtype=np.int64)
    for idx, x in enumerate(H.labels):
        y = G.identity
        for i in range(G.n, 0, -1):
            y = G.mul(y, images[i - 1] ** _int(R, x.alphas[i - 1]))
        for (i, j), c in zip(G.pairs, x.gammas):
            y = G.mul(y, G.commutator(images[i - 1], images[j - 1]) ** _int(R, c))
        out[idx] = H.index(y)
    return out


def _int(R, v):
    # exponent as a non-negative integer; fine for Z/m where values are residues
    return int(v)
