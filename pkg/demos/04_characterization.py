"""
Recognising a twisted group from its multiplication table
=========================================================

Start from a bare Cayley table plus a candidate basis, recover the ring,
the cocycles and an explicit isomorphism, and compare cohomology classes.
"""

from nilcat import CocycleFamily, IntegersMod, QnGroup, carry_cocycle, extract, roundtrip
from nilcat.characterize import check_basis, transported_family
from nilcat.cohomology import PolyCocycle, extensions_equivalent
from nilcat.qn2n import induced_big_cocycle

R = IntegersMod(3)
fam = CocycleFamily.from_components(R, 2, [[carry_cocycle(R)], [PolyCocycle(R, product=2)]])
G = QnGroup(R, 2, fam)

F = G.finite()  # only the table is used below
basis = G.basis_indices()
print("basis conditions:", check_basis(F, basis).results)

res = extract(F, basis)
print("recovered ring has", res.ring.order, "elements; witness is an isomorphism:", res.is_isomorphism)

# the structured version also transports the cocycles back to Z/3
res = extract(G, G.standard_basis()[0])
back = transported_family(res, R)
print("same cohomology class as the input:",
      extensions_equivalent(induced_big_cocycle(back), induced_big_cocycle(fam)))

print("full round trip:", roundtrip(G).to_json())
