import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing


@pytest.fixture
def f2_s3():
    return GroupRing(FqField(2), FiniteGroup.symmetric(3))


@pytest.fixture
def f3_c3():
    return GroupRing(FqField(3), FiniteGroup.cyclic(3))


def test_abelian_center_is_whole_ring(f3_c3):
    assert f3_c3.center_dim == 3
    assert np.array_equal(f3_c3.class_sums, np.eye(3, dtype=np.int64))


def test_class_sums_are_central(f2_s3):
    assert f2_s3.center_dim == 3
    for csum in f2_s3.class_sums:
        assert f2_s3.is_central(csum)
    rotation = f2_s3.element(f2_s3.group.index("120"))
    assert not f2_s3.is_central(rotation), "a 3-cycle does not commute with transpositions"


def test_center_coordinates_round_trip(f2_s3):
    z = np.array([1, 0, 1], dtype=np.int64)
    x = f2_s3.from_center(z)
    assert f2_s3.center_membership(x)
    assert np.array_equal(f2_s3.to_center(x), z)
    assert np.array_equal(f2_s3.center_solve(x), z)


def test_augmentation_is_multiplicative(f2_s3):
    rng = np.random.default_rng(7)
    alg = f2_s3.algebra
    for _ in range(20):
        x, y = alg.random(rng), alg.random(rng)
        assert f2_s3.augmentation(alg.mul(x, y)) == (f2_s3.augmentation(x) * f2_s3.augmentation(y)) % 2


def test_ag_mul_of_scalar_polynomials(f3_c3):
    f = f3_c3.field
    a = FqPoly.from_ints(f, [1, 1])
    b = FqPoly.from_ints(f, [2, 0, 1])
    prod = f3_c3.ag_mul(f3_c3.ag_from_poly(a), f3_c3.ag_from_poly(b))
    assert np.array_equal(prod, f3_c3.ag_from_poly(a * b))


def test_center_polys_round_trip(f3_c3):
    f = f3_c3.field
    g = f3_c3.element(1)
    x = f3_c3.ag_from_poly(FqPoly.t(f), g)
    polys = f3_c3.ag_to_center_polys(x)
    assert polys[1] == FqPoly.t(f)
    assert polys[0].is_zero and polys[2].is_zero
    assert np.array_equal(f3_c3.ag_from_center_polys(polys), x)


def test_action_matrix_of_regular_representation(f3_c3):
    regular = f3_c3.regular_module_basis()
    g = f3_c3.element(1)
    assert np.array_equal(f3_c3.action_matrix(g, regular), f3_c3.algebra.left_matrix(g))
    assert np.array_equal(f3_c3.action_matrix(f3_c3.algebra.one, regular), np.eye(3, dtype=np.int64))
