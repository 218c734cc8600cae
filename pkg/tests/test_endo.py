import numpy as np
import pytest

from s3degree.endo import (
    Endomorphism,
    enumerate_endomorphisms,
    kernel_census,
    expected_kernel_row,
    verify_endo_properties,
    verify_kernels,
)
from s3degree.groups import FamilySpec as F
from s3degree.groups import build_group, is_homomorphism
from s3degree.isotype import BTS, binary_dihedral, cyclic


def census_of(spec):
    return enumerate_endomorphisms(build_group(spec))


@pytest.mark.parametrize("p", [1, 2, 5, 12, 31])
def test_cyclic_has_p_endomorphisms(p):
    assert len(census_of(F.cyclic(p))) == p


def test_icosahedral_only_trivial_noninjective():
    c = census_of(F.binary_icosahedral())
    kc = kernel_census(c)
    assert kc.proper == {} and kc.trivial_maps == 1
    assert kc.automorphisms == 120  # Aut(I*) = S5


def test_tetrahedral_kernels_are_q8():
    kc = kernel_census(census_of(F.binary_tetrahedral()))
    assert set(kc.proper) == {binary_dihedral(2)}
    assert kc.automorphisms == 24  # Aut(T*) = S4


def test_z6_kernel_types():
    kc = kernel_census(census_of(F.cyclic(6)))
    assert set(kc.proper) == {cyclic(2), cyclic(3)}
    assert kc.automorphisms == 2 and kc.trivial_maps == 1
    assert set(kc.to_dict()) == {"Trivial (automorphisms)", "Full (trivial map)", "Z_2", "Z_3"}


def test_binary_dihedral_row_n4():
    kc = kernel_census(census_of(F.binary_dihedral(4)))
    assert {binary_dihedral(2), cyclic(8)} <= set(kc.proper)
    assert set(kc.proper) == expected_kernel_row(F.binary_dihedral(4))


def test_dprime_3_2_row_vs_observed():
    rep = verify_kernels(F.dprime(3, 2))
    # the class with kernel Z_{n'/n''} x Z_{2^q} = Z_4 does not occur: the quotient would be Z_3
    # with a 2-group kernel, but Z_4 is not normal in D*_12
    assert cyclic(4) in rep.missing
    assert rep.observed == {cyclic(6), cyclic(3)}


def test_icosahedral_and_octahedral_verification():
    rep = verify_kernels(F.binary_icosahedral())
    assert rep.kernel_check and rep.observed == set() and rep.relation_check
    rep = verify_kernels(F.binary_octahedral())
    assert rep.kernel_check and rep.observed == {BTS}


def test_binary_dihedral_n2_relation_recorded():
    rep = verify_kernels(F.binary_dihedral(2))
    levels = {str(r.kernel_type): r.level for r in rep.relations}
    assert set(levels) == {"Z_4"}
    assert rep.relations[0].count > 1


def test_endomorphism_object():
    g = build_group(F.binary_dihedral(3))
    c = enumerate_endomorphisms(g)
    ident = Endomorphism(g, np.arange(g.order))
    assert ident in c.endomorphisms and ident.is_automorphism
    triv = Endomorphism(g, np.zeros(g.order, dtype=np.int32))
    assert triv in c.endomorphisms and triv.is_trivial
    for e in c.endomorphisms[:10]:
        assert is_homomorphism(g, g, e.images)
        assert e.compose(ident) == e and ident.compose(e) == e
        assert set(e.generator_images()) == {"a", "b"}


@pytest.mark.parametrize("spec", [F.cyclic(10), F.binary_dihedral(6), F.binary_tetrahedral(),
                                  F.tprime(2), F.dprime(5, 3), F.product(5, F.binary_dihedral(2))],
                         ids=lambda s: s.label())
def test_engine_properties(spec):
    props = verify_endo_properties(census_of(spec))
    assert props["closure"] and props["kernel_image_orders"] and props["generating_set_invariance"]


def test_too_many_generators_rejected():
    g = build_group(F.cyclic(6))
    with pytest.raises(ValueError):
        enumerate_endomorphisms(g, [1, 1, 1, 1])


def test_expected_rows():
    assert expected_kernel_row(F.binary_icosahedral()) == set()
    assert expected_kernel_row(F.binary_dihedral(3)) == {cyclic(6), cyclic(3)}
    assert expected_kernel_row(F.cyclic(7)) == set()
