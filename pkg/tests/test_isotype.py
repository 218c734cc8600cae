import pytest

from s3degree.groups import FamilySpec as F
from s3degree.groups import build_group, generated_by, sylow_subgroup, trivial_subgroup
from s3degree.isotype import (
    BOS,
    BTS,
    TRIVIAL,
    IsoType,
    binary_dihedral,
    candidate_labels,
    cyclic,
    direct_product,
    dprime,
    iso_type,
    quaternion_times_cyclic,
    recognize,
    reference_group,
    spec_iso_type,
    tprime,
)


def test_normalizations():
    assert cyclic(1) == TRIVIAL
    assert binary_dihedral(1) == cyclic(4)
    assert quaternion_times_cyclic(1) == binary_dihedral(2)
    assert tprime(1) == BTS
    assert dprime(7, 2) == binary_dihedral(7)


def test_direct_product_canonical():
    assert direct_product(cyclic(3), cyclic(4)) == cyclic(12)
    assert direct_product(cyclic(9), binary_dihedral(2)) == quaternion_times_cyclic(9)
    assert direct_product(cyclic(5), binary_dihedral(2)) == direct_product(binary_dihedral(2), cyclic(5))
    assert direct_product(cyclic(5), TRIVIAL) == cyclic(5)
    a = direct_product(cyclic(7), direct_product(cyclic(5), BTS))
    assert a == direct_product(cyclic(35), BTS)
    with pytest.raises(ValueError):
        direct_product(cyclic(2), cyclic(4))


def test_strings_and_orders():
    assert str(cyclic(4)) == "Z_4"
    assert str(binary_dihedral(2)) == "D*_8"
    assert str(quaternion_times_cyclic(9)) == "Q8 x Z_9"
    assert str(IsoType("DPrime", (15, 3))) == "D'_{15.2^3}"
    for t in (cyclic(6), BTS, BOS, quaternion_times_cyclic(9), tprime(2), dprime(3, 3),
              direct_product(cyclic(5), binary_dihedral(2))):
        assert reference_group(t).order == t.order


def test_documented_examples():
    t = build_group(F.binary_tetrahedral())
    assert iso_type(sylow_subgroup(t, 2)) == binary_dihedral(2)
    for n in (2, 3, 5):
        g = build_group(F.binary_dihedral(n))
        assert iso_type(generated_by(g, [g.generator("b")])) == cyclic(2 * n)
    assert iso_type(trivial_subgroup(t)) == TRIVIAL


@pytest.mark.parametrize("spec", [
    F.cyclic(6), F.binary_dihedral(3), F.binary_dihedral(4), F.binary_tetrahedral(), F.binary_octahedral(),
    F.binary_icosahedral(), F.tprime(2), F.dprime(3, 2), F.dprime(3, 3), F.dprime(5, 1),
    F.product(5, F.binary_dihedral(2)), F.product(7, F.tprime(1)),
], ids=lambda s: s.label())
def test_every_family_recognized_as_itself(spec):
    assert recognize(build_group(spec)) == spec_iso_type(spec)


def test_candidate_labels_have_correct_order():
    for n in (8, 12, 24, 40, 48, 72, 120):
        for lab in candidate_labels(n):
            assert lab.order == n


def test_recognition_distinguishes_order_24_groups():
    labels = {recognize(build_group(s)) for s in
              (F.binary_tetrahedral(), F.binary_dihedral(6), F.dprime(3, 3), F.cyclic(24))}
    assert len(labels) == 4
