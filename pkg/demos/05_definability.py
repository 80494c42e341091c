"""
First-order definitions of the basis subgroups
==============================================

Each subgroup in the recognition procedure is cut out by a formula with
the basis elements as parameters.  Compare with brute force.
"""

from nilcat import IntegersMod, N2nGroup, check_definability_suite
from nilcat.fo import FiniteModel, define_set, definability_macros, parse

G = N2nGroup(IntegersMod(2), 3)
model = FiniteModel.from_group(G, {f"h{i}": g for i, g in enumerate(G.standard_basis()[0], 1)})
macros = definability_macros(3)
for name in ("phiZ", "phiH1", "phiH1_2", "phiHH"):
    got = define_set(parse(f"{name}(x)"), model, macros=macros)
    print(f"{name:8s} defines {len(got)} elements")

rep = check_definability_suite(G, G.standard_basis()[0])
print(rep.results)

# formulas can also be evaluated directly
print(define_set(parse("exists y (x = y * y)"), model)[:10], "... are squares")
