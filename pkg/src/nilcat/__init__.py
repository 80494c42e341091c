"""Exact computations with 2-nilpotent groups N_{2,n}(R) and their cocycle twists."""

from .rings import Integers, IntegersMod, TableRing, ring_make, ring_from_json, ring_from_name, check_ring_axioms
from .finite import FiniteGroup, basis_report, is_homomorphism, is_isomorphism
from .n2n import Element, N2nGroup, n2n_commutator, n2n_inv, n2n_mul
from .cohomology import (
    Additive,
    Cocycle2,
    DirectSum,
    PolyCocycle,
    carry_cocycle,
    coboundary_from,
    extension_build,
    extensions_equivalent,
    is_coboundary,
    is_cocycle,
    is_symmetric,
)
from .qn2n import CocycleFamily, QnGroup, check_relations, induced_big_cocycle, qn_commutator, qn_inv, qn_mul
from .pf import commutator_bilinear_map, pf_isomorphism_transport, pf_reconstruct, profile
from .characterize import check_basis, check_pf_basis, extract, roundtrip
from .fo import FiniteModel, check_definability_suite, define_set, evaluate, holds, parse

__version__ = "0.1.0"
