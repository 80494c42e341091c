"""Recognising bases and recovering (R, f^1..f^n) from a group with a basis.

The extraction works entirely on the multiplication table: the ring is
P(f_H) as computed by :func:`nilcat.pf.pf_reconstruct`, the centre is
coordinatised by eta(c) = prod_ij h_ij^{c_ij}, and each h_i gets a section
alpha -> h_i^alpha picked from the coset (h_i Z)^alpha.  The cocycle f^i is the
failure of that section to be additive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cohomology import Additive, Cocycle2, DirectSum, extensions_equivalent
from .errors import NotABasis
from .finite import CheckReport, FiniteGroup, basis_report, is_isomorphism
from .pf import pf_reconstruct
from .qn2n import CocycleFamily, QnGroup, check_relations, induced_big_cocycle


def _resolve(H, basis):
    """(FiniteGroup, structured-or-None, basis as indices)."""
    if isinstance(H, FiniteGroup):
        return H, None, [int(b) for b in basis]
    F = H.finite()
    return F, H, [b if isinstance(b, (int, np.integer)) else F.index(b) for b in basis]


def check_basis(H, basis):
    """Report over conditions (1)-(5); every condition is checked by enumeration."""
    F, _, idx = _resolve(H, basis)
    return basis_report(F, idx)


def pf_basis_report(H, basis, rec=None):
    F, S, idx = _resolve(H, basis)
    rep = CheckReport("pf-basis")
    base = basis_report(F, idx)
    rep.record("basis", base.ok, base.failed)
    if not base.ok:
        return rep, None
    rec = rec or pf_reconstruct(S if S is not None else F)
    f = rec.f
    for i, (h, Hi) in enumerate(zip(idx, base.subgroups["H_i"]), 1):
        c = f.coset(h)
        orbit = {int(p1[c]) for p1, _ in rec.pairs}
        rep.record(f"cyclic-{i}", orbit == set(f.Q.cosets_of(Hi)))
    return rep, rec


def check_pf_basis(H, basis, rec=None):
    """Whether each H_i/Z is the P(f_H)-orbit of h_i Z (and the tuple is a basis)."""
    rep, _ = pf_basis_report(H, basis, rec)
    return rep.ok


@dataclass
class ExtractionResult:
    ring: object  # TableRing on pair indices of P(f_H)
    family: CocycleFamily
    sections: list  # sections[i][r] = H index of h_i^r
    eta: dict  # central coordinates (tuple) -> H index
    group: QnGroup  # N_{2,n}(R, f^1..f^n)
    witness: np.ndarray  # index map group.finite() -> H
    is_isomorphism: bool
    relations: CheckReport
    pf: object = None
    extras: dict = field(default_factory=dict)

    def to_json(self):
        H = self.pf.f.H
        return {
            "ring": self.ring.to_json(),
            "n": self.group.n,
            "family": [f.to_json()["table"] for f in self.family.cocycles],
            "sections": [[str(H.labels[v]) for v in s] for s in self.sections],
            "witness": [int(v) for v in self.witness],
            "is_isomorphism": self.is_isomorphism,
            "relations": self.relations.to_json(),
        }


def _sections(f, rec, basis, choice):
    """h_i^r for each pair r: a representative of the coset phi1_r(h_i Z)."""
    H = f.H
    R = rec.ring
    members = {}
    for x in range(H.order):
        members.setdefault(int(f.Q.coset_of[x]), []).append(x)
    out = []
    for h in basis:
        c = f.coset(h)
        s = []
        for r in range(R.order):
            if r == R.zero:
                s.append(H.identity)
            elif r == R.one:
                s.append(h)
            else:
                cands = members[int(rec.pairs[r][0][c])]
                if choice == "min":
                    s.append(min(cands))
                elif choice == "max":
                    s.append(max(cands))
                else:
                    s.append(choice(h, r, cands))
        out.append(s)
    return out


def _relations_in_H(H, R, n, pairs, sections, hpow, family):
    """Relations (a)-(d) for the extracted data, evaluated inside H."""
    rep = CheckReport("relations-in-H")
    elems = list(R.elements())
    Zset = set(H.center)
    bad = {k: [] for k in "abcd"}
    for a, b in itertools.product(elems, repeat=2):
        for p, (i, j) in enumerate(pairs):
            if H.commutator(sections[i - 1][a], sections[j - 1][b]) != hpow[p][R.mul(a, b)]:
                bad["a"].append((i, j, a, b))
            if hpow[p][a] not in Zset:
                bad["b"].append(((i, j), a))
            if H.mul(hpow[p][a], hpow[p][b]) != hpow[p][R.add(a, b)]:
                bad["d"].append((i, j, a, b))
        for i in range(1, n + 1):
            lhs = H.mul(sections[i - 1][a], sections[i - 1][b])
            rhs = sections[i - 1][R.add(a, b)]
            for p, v in enumerate(family(i, a, b)):
                rhs = H.mul(rhs, hpow[p][v])
            if lhs != rhs:
                bad["c"].append((i, a, b))
    for k in "abcd":
        rep.record(k, not bad[k], bad[k][:5])
    return rep


def extract(H, basis, section="min", rec=None):
    """Recover the ring, the symmetric cocycles and an explicit isomorphism.

    ``section`` picks h_i^r inside its coset: "min" / "max" index, or a
    callable ``(h, r, candidates) -> index``.  h_i^0 = 1 and h_i^1 = h_i always.
    """
    F, S, idx = _resolve(H, basis)
    rep, rec = pf_basis_report(S if S is not None else F, idx, rec)
    if not rep.ok:
        raise NotABasis(f"not a P(f_H)-basis: failed {rep.failed}")
    f = rec.f
    R = rec.ring
    n = len(idx)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    K = len(pairs)
    # h_ij^r = phi0_r([h_i, h_j])
    hpow = []
    for i, j in pairs:
        z = int(f.zpos[F.commutator(idx[i - 1], idx[j - 1])])
        hpow.append([int(f.Z[rec.pairs[r][1][z]]) for r in range(R.order)])
    eta = {}
    for coords in itertools.product(range(R.order), repeat=K):
        eta[coords] = F.word(*(hpow[p][c] for p, c in enumerate(coords)))
    if sorted(eta.values()) != sorted(f.Z):
        raise NotABasis("centre is not coordinatised by the h_ij")
    eta_inv = {v: k for k, v in eta.items()}
    sections = _sections(f, rec, idx, section)

    B, A = Additive(R), DirectSum(R, K)
    cocycles = []
    for i in range(n):
        s = sections[i]
        table = [[eta_inv[F.word(int(F.inv[s[R.add(a, b)]]), s[a], s[b])] for b in range(R.order)]
                 for a in range(R.order)]
        cocycles.append(Cocycle2.from_table(B, A, table, name=f"f^{i + 1}"))
    family = CocycleFamily(R, n, cocycles)
    G = QnGroup(R, n, family)
    relations = _relations_in_H(F, R, n, pairs, sections, hpow, family)

    GF = G.finite()
    witness = np.empty(GF.order, dtype=np.int64)
    for k, x in enumerate(GF.labels):
        word = [sections[i - 1][x.alphas[i - 1]] for i in range(n, 0, -1)]
        witness[k] = F.word(*word, eta[x.gammas])
    ok = is_isomorphism(GF, F, witness)
    return ExtractionResult(R, family, sections, eta, G, witness, ok, relations, pf=rec)


def ring_witness(result):
    """The ring isomorphism P(f_H) -> R when H came from a structured group."""
    rec = result.pf
    if rec.eta is None or not rec.eta_is_ring_iso:
        return None
    return dict(rec.eta)


def transported_family(result, ring):
    """The extracted cocycles rewritten over the original ring via the ring witness."""
    mu = ring_witness(result)
    if mu is None:
        return None
    return result.family.transport(mu, ring)


@dataclass
class RoundTrip:
    ok: bool
    stages: dict
    failed_stage: str | None = None
    result: ExtractionResult | None = None
    error: str | None = None

    def to_json(self):
        return {"ok": self.ok, "stages": dict(self.stages), "failed_stage": self.failed_stage,
                "error": self.error}


def roundtrip(G, check_cohomology=True):
    """build -> recognise -> extract -> rebuild, reporting the first failing stage."""
    stages = {}

    def done(stage, ok, result=None, error=None):
        stages[stage] = bool(ok)
        if not ok:
            return RoundTrip(False, stages, stage, result, error)
        return None

    try:
        F = G.finite()
        fail = done("build", F.check_axioms().ok)
        if fail:
            return fail
        basis = G.standard_basis()[0]
        fail = done("basis", check_basis(G, basis).ok)
        if fail:
            return fail
        rep, rec = pf_basis_report(G, basis)
        fail = done("pf-basis", rep.ok)
        if fail:
            return fail
        res = extract(G, basis, rec=rec)
        fail = done("extract", res.relations.ok and check_relations(res.group).ok, res)
        if fail:
            return fail
        fail = done("witness", res.is_isomorphism, res)
        if fail:
            return fail
        fail = done("ring", ring_witness(res) is not None, res)
        if fail:
            return fail
        if check_cohomology:
            fam = transported_family(res, G.ring)
            orig = getattr(G, "family", None) or CocycleFamily.zero(G.ring, G.n)
            same = extensions_equivalent(induced_big_cocycle(orig), induced_big_cocycle(fam))
            fail = done("cohomology", same, res)
            if fail:
                return fail
        return RoundTrip(True, stages, None, res)
    except Exception as e:  # report with the stage that was running
        stage = next((s for s in ("build", "basis", "pf-basis", "extract", "witness", "ring", "cohomology")
                      if s not in stages), "unknown")
        stages[stage] = False
        return RoundTrip(False, stages, stage, None, f"{type(e).__name__}: {e}")
