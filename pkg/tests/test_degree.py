import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s3degree.degree import (
    CongruenceSystem,
    ResidueSet,
    UnruledKernelClass,
    audit,
    automorphism_square_set,
    crt,
    crt_certificates,
    crt_solve,
    degree_set_closed_form,
    degree_set_from_census,
    representative_degree_classes,
    structural_checks,
    sylow_crt_degrees,
)
from s3degree.endo import enumerate_endomorphisms
from s3degree.groups import FamilySpec as F
from s3degree.groups import build_group, conjugates, sylow_subgroup
from s3degree.isotype import BTS, binary_dihedral, cyclic


def test_crt_examples():
    assert crt_solve([(0, 8), (1, 3)]) == 16
    assert crt_solve([(0, 3), (1, 4)]) == 9
    assert crt_solve([(4, 16), (0, 3)]) == 36
    with pytest.raises(ValueError):
        CongruenceSystem(((1, 4), (1, 6)))


def test_automorphism_square_set_examples():
    assert automorphism_square_set(24).to_list() == [1]
    assert automorphism_square_set(120).to_list() == [1, 49]
    assert automorphism_square_set(5).to_list() == [1, 4]
    assert automorphism_square_set(1).to_list() == [0]


def test_representative_degree_examples():
    assert representative_degree_classes(binary_dihedral(2), F.binary_tetrahedral()).to_list() == [16]
    assert representative_degree_classes(BTS, F.binary_octahedral()).to_list() == [0]
    # Q8 x Z_{3^0}: kernel of the p = q = 1 class of T'(1), i.e. T* itself
    assert 16 in representative_degree_classes(binary_dihedral(2), F.tprime(1))
    with pytest.raises(UnruledKernelClass):
        representative_degree_classes(cyclic(5), F.binary_tetrahedral())


def test_census_examples():
    assert degree_set_from_census(F.binary_icosahedral()).to_list() == [0, 1, 49]
    assert degree_set_from_census(F.binary_tetrahedral()).to_list() == [0, 1, 16]
    assert degree_set_from_census(F.cyclic(7)).to_list() == [0, 1, 2, 4]


def test_closed_form_examples():
    assert degree_set_closed_form(F.binary_octahedral()).to_list() == [0, 1, 25]
    assert degree_set_closed_form(F.binary_dihedral(3)).to_list() == [0, 1, 9]
    assert degree_set_closed_form(F.cyclic(5)).to_list() == [0, 1, 4]


def test_structural_examples():
    assert all(structural_checks(ResidueSet(48, (0, 1, 25))).values())
    assert all(structural_checks(ResidueSet(24, (0, 1, 16))).values())
    bad = structural_checks(ResidueSet(24, (0, 16)))
    assert not bad["contains_1"] and not bad["autsq_subset"]


def test_binary_dihedral_n2_conflict():
    rep = audit(F.binary_dihedral(2))
    conflicts = rep.findings_of("conflict")
    assert conflicts
    assert any(c.detail.get("kernel_type") == "Z_4" for c in conflicts)


def test_binary_dihedral_other_n_clean():
    for n in (1, 3, 4, 6):
        rep = audit(F.binary_dihedral(n))
        assert rep.census_set == rep.closed_form_set
        assert not rep.findings_of("conflict")


def test_oracle_evidence_attached():
    ev = {"map": {"numeric_degree": 8, "claimed": 16, "modulus": 16}}
    rep = audit(F.binary_dihedral(2), evidence=ev)
    assert all(c.detail["evidence"] == ev for c in rep.findings_of("conflict"))
    assert rep.findings_of("oracle_mismatch")


def test_dprime_findings_itemized():
    rep = audit(F.dprime(3, 3))
    assert rep.sylow_oracle.undetermined == 0
    assert rep.sylow_oracle.determined == rep.census_set
    assert not rep.findings_of("conflict")


def test_report_serialization():
    rep = audit(F.binary_tetrahedral())
    d = json.loads(rep.to_json())
    assert d["modulus"] == 24 and d["census_set"] == [0, 1, 16]
    assert rep.to_csv().splitlines()[0] == "residue,provenance"


@pytest.mark.parametrize("spec", [F.tprime(2), F.dprime(5, 2), F.dprime(15, 3), F.product(5, F.binary_dihedral(2))],
                         ids=lambda s: s.label())
def test_crt_certificates_satisfy_systems(spec):
    certs = crt_certificates(spec)
    assert certs
    for _, sys_, r in certs:
        assert sys_.satisfied_by(r) and 0 <= r < sys_.modulus


def test_sylow_choice_invariance():
    g = build_group(F.binary_octahedral())
    census = enumerate_endomorphisms(g)
    base = sylow_crt_degrees(census)
    for p in (2, 3):
        for other in conjugates(g, sylow_subgroup(g, p))[:3]:
            alt = sylow_crt_degrees(census, {p: other.members})
            assert alt.degrees == base.degrees


def test_sylow_oracle_matches_census_on_small_groups():
    for spec in (F.cyclic(12), F.binary_dihedral(3), F.binary_tetrahedral(), F.tprime(2)):
        census = enumerate_endomorphisms(build_group(spec))
        o = sylow_crt_degrees(census)
        assert o.undetermined == 0
        assert o.determined == degree_set_from_census(spec, census)


MODS = st.integers(min_value=1, max_value=60)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(-500, 500), st.integers(-500, 500))
def test_crt_property(m1, m2, a, b):
    if math.gcd(m1, m2) != 1:
        return
    x = crt(a, m1, b, m2)
    assert 0 <= x < m1 * m2 and x % m1 == a % m1 and x % m2 == b % m2


@st.composite
def residue_pair(draw):
    n = draw(MODS)
    return (ResidueSet(n, tuple(draw(st.lists(st.integers(0, 200), max_size=10)))),
            ResidueSet(n, tuple(draw(st.lists(st.integers(0, 200), max_size=10)))))


@settings(max_examples=100, deadline=None)
@given(residue_pair())
def test_residue_set_algebra(pair):
    a, b = pair
    assert a & b <= a <= a | b
    assert (a - b) & b == ResidueSet(a.modulus)
    assert (a - b) | (a & b) == a
    assert all(0 <= r < a.modulus for r in a.times(b))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 200))
def test_automorphism_squares_closed(n):
    s = automorphism_square_set(n)
    assert s.is_multiplicatively_closed() and 1 % n in s


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 50))
def test_cyclic_degree_sets_are_squares(p):
    assert degree_set_from_census(F.cyclic(p)) == ResidueSet(p, tuple(k * k for k in range(p)))
