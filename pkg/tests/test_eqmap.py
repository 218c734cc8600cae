import numpy as np
import pytest

from s3degree.eqmap import (
    ProjectionUndefined,
    SpherePoint,
    case_i,
    case_ii_kernel_half,
    case_ii_kernel_z2n,
    case_ii_odd_power,
    case_iii,
    check_equivariance,
    eval_map,
    numeric_degree,
    random_sphere,
)
from s3degree.groups import FamilySpec as F


def test_sphere_point_validation():
    SpherePoint(1, 0)
    with pytest.raises(ValueError):
        SpherePoint(1, 1)
    p = SpherePoint.normalized(3, 4j)
    assert abs(abs(p.z1) ** 2 + abs(p.z2) ** 2 - 1) < 1e-15


def test_eval_examples():
    x = SpherePoint.normalized(0.3 + 0.2j, -0.5 + 0.7j)
    y = eval_map(case_i(1), x)
    assert abs(y.z1 - x.z1) < 1e-14 and abs(y.z2 - x.z2) < 1e-14
    assert eval_map(case_i(2), SpherePoint(1, 0)) == SpherePoint(1, 0)
    assert eval_map(case_ii_kernel_z2n(2), SpherePoint(1, 0)) == SpherePoint(1, 0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        case_ii_kernel_half(3)
    with pytest.raises(ValueError):
        case_ii_odd_power(4)


def test_projection_undefined():
    # every polynomial map vanishes at the origin of C^2
    with pytest.raises(ProjectionUndefined):
        case_ii_kernel_half(2)(np.zeros((1, 4)))


@pytest.mark.parametrize("m", [case_i(3), case_i(2, p=7, lens_q=3), case_ii_kernel_half(4),
                               case_ii_kernel_z2n(2), case_ii_odd_power(3), case_iii()],
                         ids=lambda m: m.name)
def test_equivariance(m):
    rep = check_equivariance(m, samples=2000)
    assert rep.passed, rep.deviations


def test_equivariance_wrong_family():
    with pytest.raises(ValueError):
        check_equivariance(case_iii(), F.cyclic(5))


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(3)
    x = random_sphere(rng, 4)
    for m in (case_iii(), case_ii_kernel_half(4)):
        J = m.jacobian(x)
        h = 1e-6
        for k in range(4):
            e = np.zeros(4)
            e[k] = h
            fd = (m.raw_real(x + e) - m.raw_real(x - e)) / (2 * h)
            assert np.allclose(J[:, :, k], fd, atol=1e-6)


@pytest.mark.parametrize("k", [1, 2])
def test_numeric_degree_small(k):
    res = numeric_degree(case_i(k), targets=2, starts=2000, max_rounds=3)
    assert res.degree == k * k


def test_numeric_degree_deterministic():
    a = numeric_degree(case_i(2), targets=1, starts=1000, max_rounds=2, seed=5)
    b = numeric_degree(case_i(2), targets=1, starts=1000, max_rounds=2, seed=5)
    assert a.to_dict() == b.to_dict()
