import numpy as np
import pytest

import oracles
from nilcat.errors import InvalidMap, SearchInfeasible
from nilcat.n2n import N2nGroup
from nilcat.pf import (
    abelian_endomorphisms,
    commutator_bilinear_map,
    complete_system_size,
    inner_automorphism,
    is_admissible,
    is_complete_system,
    pf_isomorphism_transport,
    pf_reconstruct,
    profile,
    relabel_map,
    scalar_to_pf,
    standard_complete_system,
    width,
)
from nilcat.cohomology import PolyCocycle
from nilcat.qn2n import CocycleFamily, QnGroup
from nilcat.rings import IntegersMod


def N(m, n=2):
    return N2nGroup(IntegersMod(m), n)


def xy_group(m):
    R = IntegersMod(m)
    return QnGroup(R, 2, CocycleFamily.from_components(R, 2, [[PolyCocycle(R, product=1)], []]))


def test_commutator_map_values():
    G = N(2)
    f = commutator_bilinear_map(G)
    g1, g2 = G.standard_basis()[0]
    assert f(g1, g2) == G.central_gen(1, 2)
    assert f(g1, g1) == G.identity
    assert all(f.report().values())


def test_nondegenerate_mod2_by_hand():
    f = commutator_bilinear_map(N(2))
    killers = [c for c in range(f.Q.order) if (f.F[c] == f.zero_z).all()]
    assert killers == [f.zero_q] and f.Q.order == 4


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_width_matches_bruteforce(m, n):
    G = N(m, n)
    T = oracles.TableGroup(oracles.carrier(m, n), lambda x, y: oracles.mul(m, n, x, y))
    assert width(commutator_bilinear_map(G)) == T.width()


def test_width_rank2():
    assert width(commutator_bilinear_map(N(2))) == 1


def test_complete_systems_mod3():
    G = N(3)
    f = commutator_bilinear_map(G)
    g1, g2 = G.standard_basis()[0]
    assert is_complete_system(f, [f.coset(g1), f.coset(g2)])
    assert not is_complete_system(f, [f.coset(g1)])
    assert standard_complete_system(G) == [f.coset(g1), f.coset(g2)]


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_complete_system_size(m, n):
    c, E = complete_system_size(commutator_bilinear_map(N(m, n)))
    assert c == 2 and len(E) == 2
    assert profile(N(m, n)).csize == 2


def test_scalar_pairs():
    G = N(3)
    f = commutator_bilinear_map(G)
    one = scalar_to_pf(1, G, f)
    assert list(one.phi1) == list(range(f.Q.order)) and list(one.phi0) == list(range(len(f.Z)))
    zero = scalar_to_pf(0, G, f)
    assert set(zero.phi1) == {f.zero_q} and set(zero.phi0) == {f.zero_z}
    two = scalar_to_pf(2, G, f)
    g12 = G.central_gen(1, 2)
    pos = f.zpos[f.H.index(g12)]
    assert f.central(two.phi0[pos]) == g12 * g12
    for s in (zero, one, two):
        assert is_admissible(f, s.phi1, s.phi0)


def test_endomorphism_enumeration_against_oracle():
    f = commutator_bilinear_map(N(2))
    qtab = f.qtable.tolist()
    brute = oracles.endomorphisms_additive(qtab, f.zero_q)
    got = {tuple(int(v) for v in e) for e in abelian_endomorphisms(f.qtable, f.zero_q)}
    assert got == set(brute) and len(brute) == 16


def test_admissible_pairs_mod2_by_oracle():
    f = commutator_bilinear_map(N(2))
    ends1 = oracles.endomorphisms_additive(f.qtable.tolist(), f.zero_q)
    ends0 = oracles.endomorphisms_additive(f.ztable.tolist(), f.zero_z)
    brute = {(p1, p0) for p1 in ends1 for p0 in ends0 if is_admissible(f, np.array(p1), np.array(p0))}
    rec = pf_reconstruct(N(2))
    got = {(tuple(int(v) for v in a), tuple(int(v) for v in b)) for a, b in rec.pairs}
    assert got == brute and len(brute) == 2 and len(ends1) * len(ends0) == 32


@pytest.mark.parametrize("m,candidates", [(2, 32), (3, 243), (4, 1024)])
def test_reconstruct_rank2(m, candidates):
    rec = pf_reconstruct(N(m))
    assert rec.size == m
    assert rec.candidates == candidates
    assert rec.all_scalar and rec.eta_is_ring_iso


def test_reconstruct_twisted_mod2():
    rec = pf_reconstruct(xy_group(2))
    assert rec.size == 2 and rec.eta_is_ring_iso


def test_reconstruct_from_bare_table():
    rec = pf_reconstruct(N(3).finite())
    assert rec.size == 3 and rec.eta is None
    R = rec.ring
    # additive order of 1 is 3, so the ring is Z/3
    assert R.add(R.add(R.one, R.one), R.one) == R.zero


def test_reconstruct_budget():
    with pytest.raises(SearchInfeasible):
        pf_reconstruct(N(3), limit=10)


def test_transport_identity():
    G = N(3)
    t = pf_isomorphism_transport(G, G, np.arange(27))
    assert t.theta == list(range(3)) and t.ring_iso and t.mu == {0: 0, 1: 1, 2: 2}


def test_transport_inner_automorphism():
    G = N(3)
    t = pf_isomorphism_transport(G, G, inner_automorphism(G, G.gen(1) * G.gen(2)))
    assert t.theta == list(range(3)) and t.ring_iso


def test_transport_swap_mod2():
    G = N(2)
    g1, g2 = G.standard_basis()[0]
    t = pf_isomorphism_transport(G, G, relabel_map(G, [g2, g1]))
    assert t.theta == [0, 1] and t.ring_iso and t.admissible


def test_transport_rejects_non_isomorphism():
    G = N(2)
    with pytest.raises(InvalidMap):
        pf_isomorphism_transport(G, G, np.zeros(8, dtype=np.int64))


def test_transport_between_presentations():
    # N_{2,2}(Z/3) and its twisted copy have the same commutator map
    G, H = N(3), xy_group(3)
    F = H.finite()
    # coordinate identity is not an isomorphism when the twist is nonzero
    with pytest.raises(InvalidMap):
        pf_isomorphism_transport(G, H, np.arange(27))
    assert pf_reconstruct(H).size == 3 == F.order // 9
