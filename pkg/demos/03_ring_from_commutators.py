"""
Recovering R from the commutator map
====================================

The admissible pairs (phi1, phi0) of f_G form a ring P(f_G).  For
N_{2,2}(Z/m) it has m elements, every pair is multiplication by a scalar
and the ring is Z/m again.
"""

import time

from nilcat import IntegersMod, N2nGroup, pf_reconstruct, profile
from nilcat.suites import is_cyclic_ring

for m in (2, 3, 4, 5):
    G = N2nGroup(IntegersMod(m), 2)
    t0 = time.perf_counter()
    rec = pf_reconstruct(G)
    dt = time.perf_counter() - t0
    print(f"m={m}: {rec.size} admissible pairs, {rec.examined} examined of {rec.candidates}, "
          f"cyclic={is_cyclic_ring(rec.ring)}, scalar={rec.all_scalar}, {dt:.2f}s")

# width and complete systems of the commutator map
for m, n in ((2, 2), (2, 3), (3, 3)):
    p = profile(N2nGroup(IntegersMod(m), n))
    print(f"N_2,{n}(Z/{m}): width {p.width}, smallest complete system {p.csize}")
