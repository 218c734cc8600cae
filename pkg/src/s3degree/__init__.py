"""Self-mapping degree sets of spherical 3-manifolds S^3/G.

Submodules: ``cyclo`` (exact cyclotomic arithmetic), ``groups`` (the eight
group families and subgroup machinery), ``isotype`` (isomorphism-type
labels), ``endo`` (endomorphism census), ``degree`` (degree sets and audits),
``eqmap`` (explicit equivariant maps and a numerical degree oracle), ``cli``.
"""

from .degree import (
    DegreeReport,
    ResidueSet,
    audit,
    automorphism_square_set,
    crt_solve,
    degree_set_closed_form,
    degree_set_from_census,
)
from .endo import enumerate_endomorphisms, kernel_census, verify_kernels
from .groups import FamilySpec, FiniteGroup, build_group
from .isotype import IsoType, iso_type

__all__ = [
    "DegreeReport",
    "FamilySpec",
    "FiniteGroup",
    "IsoType",
    "ResidueSet",
    "audit",
    "automorphism_square_set",
    "build_group",
    "crt_solve",
    "degree_set_closed_form",
    "degree_set_from_census",
    "enumerate_endomorphisms",
    "iso_type",
    "kernel_census",
    "verify_kernels",
]
