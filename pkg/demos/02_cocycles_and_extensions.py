"""
Central extensions from 2-cocycles
==================================

E(f) is B x A with (b1, a1)(b2, a2) = (b1 + b2, a1 + a2 + f(b1, b2)).
"""

from nilcat import Additive, IntegersMod, PolyCocycle, carry_cocycle, coboundary_from, extension_build, is_coboundary
from nilcat.cohomology import zero_cocycle, coboundary_shift_map
from nilcat.finite import is_isomorphism

B = Additive(IntegersMod(2))

xy = PolyCocycle(IntegersMod(2), product=1)
E = extension_build(B, B, xy).finite()
print("E(xy) element orders:", sorted(E.element_order(g) for g in range(4)))  # cyclic
E0 = extension_build(B, B, zero_cocycle(B, B)).finite()
print("E(0)  element orders:", sorted(E0.element_order(g) for g in range(4)))  # Klein
print("xy is a coboundary?", is_coboundary(xy))

# over Z/5 the product is a coboundary: 2xy = d(x^2)
B5 = Additive(IntegersMod(5))
square = coboundary_from({x: x * x % 5 for x in range(5)}, B5, B5)
print("d(x^2)(2, 3) =", square(2, 3))

# the carry cocycle of Z/m gives Z/m^2
carry = carry_cocycle(IntegersMod(5))
Ec = extension_build(B5, B5, carry).finite()
print("max order in E(carry) over Z/5:", max(Ec.element_order(g) for g in range(Ec.order)))

# shifting by a coboundary gives an isomorphic extension
psi = {0: 0, 1: 3, 2: 1, 3: 4, 4: 2}
E1 = extension_build(B5, B5, carry)
E2 = extension_build(B5, B5, carry + coboundary_from(psi, B5, B5))
print("(b, a) -> (b, a + psi(b)) is an isomorphism:",
      is_isomorphism(E1.finite(), E2.finite(), coboundary_shift_map(E1, E2, psi.__getitem__)))
