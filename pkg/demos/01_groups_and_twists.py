"""
Building N_{2,n}(R) and twisting it by cocycles
===============================================

Run with ``python demos/01_groups_and_twists.py``.
"""

from nilcat import CocycleFamily, IntegersMod, Integers, N2nGroup, PolyCocycle, QnGroup

# the rank 2 group over Z is the Heisenberg group
H = N2nGroup(Integers(), 2)
g1, g2 = H.standard_basis()[0]
print("[g1, g2] =", H.commutator(g1, g2))
print("g1^5 g2^-3 =", g1 ** 5 * g2 ** -3)

# over Z/2 the group has 8 elements and five involutions, so it is dihedral
R = IntegersMod(2)
G = N2nGroup(R, 2)
F = G.finite()
print("orders in N_2,2(Z/2):", sorted(F.element_order(g) for g in range(F.order)))
print("order of g1:", F.element_order(F.index(G.gen(1))))

# twist g1 by the cocycle xy: g1 now squares to g12 and has order 4
fam = CocycleFamily.from_components(R, 2, [[PolyCocycle(R, product=1)], []])
Q = QnGroup(R, 2, fam)
print("g1 * g1 in the twisted group:", Q.gen(1) * Q.gen(1))
QF = Q.finite()
print("orders in the twisted group:  ", sorted(QF.element_order(g) for g in range(QF.order)))
print("order of g1:", QF.element_order(QF.index(Q.gen(1))))
# same abstract group, different basis: the twist is visible only in coordinates

# the commutator map does not see the twist
x, y = Q.element((1, 1), (0,)), Q.element((0, 1), (1,))
print("commutator, closed form vs word:", Q.commutator(x, y), Q.commutator_word(x, y))

# normal forms: x = g_n^a_n ... g_1^a_1 * central part
x = G.element((1, 1), (1,))
nf = G.normal_form(x)
print("exponents of", x, "->", nf.exponents, "rebuilt:", G.normal_form_build(nf))
