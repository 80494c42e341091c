"""Named verification suites run by ``nilcat run-suite``.

Every suite takes a ring, a rank n and a seed and returns a dict of named
boolean checks plus counts.  Suites that need a finite carrier report the
affected checks under ``skipped`` when the ring is Z.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor

from .cohomology import (
    Additive,
    Cocycle2,
    PolyCocycle,
    coboundary_from,
    extension_build,
    extensions_equivalent,
    check_cocycle,
    check_symmetric,
    coboundary_shift_map,
)
from .characterize import roundtrip
from .finite import basis_report, is_isomorphism
from .fo import check_definability_suite
from .n2n import N2nGroup
from .pf import commutator_bilinear_map, is_complete_system, pf_reconstruct, profile, standard_complete_system
from .qn2n import CocycleFamily, QnGroup, check_relations, family_from_json, induced_big_cocycle, product_part
from .rings import IntegersMod, check_ring_axioms
from . import serialize

SUITES = ("axioms", "basen2", "cohomology", "pf", "characterize", "fo")
SCHEMA = "nilcat.run-report/1"


def default_family(ring, n):
    """f^1 = xy in the first central coordinate, the others zero."""
    return CocycleFamily.from_components(ring, n, [[PolyCocycle(ring, product=1)]] + [[]] * (n - 1))


def groups_for(ring, n, family=None):
    fam = family if family is not None else default_family(ring, n)
    return {"N": N2nGroup(ring, n), "QN": QnGroup(ring, n, fam)}


def is_cyclic_ring(R):
    """Additive group generated by 1, i.e. R is a quotient of Z."""
    seen, x = {R.zero}, R.one
    while x not in seen:
        seen.add(x)
        x = R.add(x, R.one)
    return len(seen) == R.order


class _Result:
    def __init__(self):
        self.checks = {}
        self.counts = {}
        self.skipped = []

    def check(self, name, ok):
        self.checks[name] = bool(ok)

    def to_json(self):
        return {"checks": self.checks, "counts": self.counts, "skipped": sorted(self.skipped)}


def _sampled_axioms(G, samples, seed):
    rng = random.Random(seed)
    e = G.identity
    for _ in range(samples):
        x, y, z = (G.random_element(rng) for _ in range(3))
        if G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)):
            return False
        if G.mul(x, e) != x or G.mul(e, x) != x or G.mul(x, G.inv(x)) != e:
            return False
    return True


def suite_axioms(ring, n, seed=0, family=None):
    out = _Result()
    out.check("ring", check_ring_axioms(ring, seed=seed).ok)
    for name, G in groups_for(ring, n, family).items():
        if ring.is_finite:
            out.check(f"{name}-group", G.finite().check_axioms().ok)
            out.counts[f"{name}-order"] = G.order
        else:
            out.check(f"{name}-group-sampled", _sampled_axioms(G, 10_000, seed))
            out.counts[f"{name}-samples"] = 10_000
    return out


def suite_basen2(ring, n, seed=0, family=None):
    out = _Result()
    for name, G in groups_for(ring, n, family).items():
        out.check(f"{name}-relations", check_relations(G, seed=seed).ok)
        if not ring.is_finite:
            out.skipped += [f"{name}-center", f"{name}-basis"]
            continue
        F = G.finite()
        out.check(f"{name}-center", sorted(F.center) == sorted(F.commutator_subgroup()))
        out.check(f"{name}-center-structured", sorted(F.center) == sorted(F.index(z) for z in G.center_members()))
        rep = basis_report(F, G.basis_indices())
        for cond, ok in rep.results.items():
            out.check(f"{name}-basis-{cond}", ok)
    return out


def suite_cohomology(ring, n, seed=0, family=None):
    out = _Result()
    two = Additive(IntegersMod(2))
    xy = PolyCocycle(IntegersMod(2), product=1)
    zero = Cocycle2.from_table(two, two, [[0, 0], [0, 0]])
    zero.verify()
    Exy, E0 = extension_build(two, two, xy).finite(), extension_build(two, two, zero).finite()
    out.check("E(xy)-cyclic", max(Exy.element_order(g) for g in range(Exy.order)) == 4)
    out.check("E(0)-klein", max(E0.element_order(g) for g in range(E0.order)) == 2)
    out.check("xy-not-coboundary", not extensions_equivalent(xy, zero))
    if not ring.is_finite:
        out.skipped += ["coboundaries", "shift-map", "big-cocycle"]
        return out
    B = Additive(ring)
    rng = random.Random(seed)
    ok = True
    for _ in range(20):
        psi = {x: (rng.randrange(ring.order) if x != ring.zero else ring.zero) for x in B.elements()}
        d = coboundary_from(psi, B, B)
        ok &= bool(check_cocycle(d)) and bool(check_symmetric(d))
    out.check("coboundaries", ok)
    f = PolyCocycle(ring, product=1)
    psi = {x: rng.randrange(ring.order) if x != ring.zero else ring.zero for x in B.elements()}
    g = f + coboundary_from(psi, B, B)
    g.verify()
    E1, E2 = extension_build(B, B, f), extension_build(B, B, g)
    out.check("shift-map", is_isomorphism(E1.finite(), E2.finite(), coboundary_shift_map(E1, E2, psi.__getitem__)))
    fam = family if family is not None else default_family(ring, n)
    big = induced_big_cocycle(fam)
    out.check("big-cocycle", bool(check_cocycle(big)))
    out.check("big-minus-product-symmetric", bool(check_symmetric(big - product_part(ring, n))))
    return out


def suite_pf(ring, n, seed=0, family=None):
    out = _Result()
    if not ring.is_finite:
        out.skipped += ["pf"]
        return out
    G = N2nGroup(ring, n)
    f = commutator_bilinear_map(G)
    out.check("commutator-map", all(f.report().values()))
    prof = profile(G)
    out.counts["width"] = prof.width
    out.counts["csize"] = prof.csize
    out.check("standard-complete", is_complete_system(f, standard_complete_system(G)))
    out.check("csize-at-most-n", prof.csize is not None and prof.csize <= n)
    rec = pf_reconstruct(G)
    out.counts["pairs"] = rec.size
    out.counts["examined"] = rec.examined
    out.counts["ring-order"] = rec.ring.order
    out.check("ring-size", rec.size == ring.order)
    out.check("ring-cyclic", is_cyclic_ring(rec.ring))
    out.check("all-scalar", bool(rec.all_scalar))
    out.check("ring-isomorphic", bool(rec.eta_is_ring_iso))
    return out


def suite_characterize(ring, n, seed=0, family=None):
    out = _Result()
    if not ring.is_finite:
        out.skipped += ["roundtrip"]
        return out
    for name, G in groups_for(ring, n, family).items():
        rt = roundtrip(G)
        for stage, ok in rt.stages.items():
            out.check(f"{name}-{stage}", ok)
    return out


def suite_fo(ring, n, seed=0, family=None):
    out = _Result()
    if not ring.is_finite:
        out.skipped += ["definability"]
        return out
    for name, G in groups_for(ring, n, family).items():
        rep = check_definability_suite(G, G.standard_basis()[0])
        for k, ok in rep.results.items():
            out.check(f"{name}-{k}", ok)
    return out


RUNNERS = {
    "axioms": suite_axioms,
    "basen2": suite_basen2,
    "cohomology": suite_cohomology,
    "pf": suite_pf,
    "characterize": suite_characterize,
    "fo": suite_fo,
}


def _run_one(args):
    name, ring_json, n, seed, family_json = args
    ring = serialize.ring_arg(ring_json)
    family = family_from_json(ring, n, family_json) if family_json else None
    t0 = time.perf_counter()
    res = RUNNERS[name](ring, n, seed=seed, family=family)
    return name, res.to_json(), time.perf_counter() - t0


def run_suite(name, ring, n, seed=0, family_json=None, jobs=1, timings=False):
    """Run one suite (or ``all``) and return the report dict."""
    if name != "all" and name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    names = list(SUITES) if name == "all" else [name]
    tasks = [(s, ring.to_json(), n, seed, family_json) for s in names]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    inputs = {"ring": ring.to_json(), "n": n, "seed": seed, "family": family_json}
    report = {
        "schema": SCHEMA,
        "suite": name,
        "inputs": inputs,
        "input_digest": serialize.digest(inputs),
        "suites": {},
    }
    ok = True
    for s, res, dt in results:
        res["ok"] = all(res["checks"].values())
        ok &= res["ok"]
        if timings:
            res["seconds"] = round(dt, 3)
        report["suites"][s] = res
    report["ok"] = ok
    return report
