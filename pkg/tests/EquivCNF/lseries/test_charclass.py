import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.cover import GaloisCover
from equivcnf.covers.module import FiniteAGModule
from equivcnf.covers.primes import residue_module
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.groups.decomposition import DecompositionData, catalog_group
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing
from equivcnf.groups.ideals import CentralIdeal, fitting_ideal
from equivcnf.lseries.charclass import char_class, char_class_additivity

F2 = FqField(2)
F3 = FqField(3)


@pytest.fixture(scope="module")
def f3_c2():
    return GroupRing(F3, FiniteGroup.cyclic(2))


@pytest.mark.parametrize("p", [(0, 1), (1, 1, 1), (1, 1, 0, 1)])
def test_class_of_residue_field_is_the_prime(p):
    p = FqPoly.from_ints(F2, list(p))
    module = residue_module(GaloisCover.trivial(F2), p).residue
    c = char_class(module)
    assert c.rank == p.degree
    assert c.route == "free"
    assert np.array_equal(c.coefficients[:, 0], p.array())


@pytest.mark.parametrize("p", [(0, 1), (1, 1, 1), (1, 1, 0, 1)])
def test_carlitz_reduction_class_is_p_minus_one(p):
    """E(A/p) is cyclic with annihilator p - 1 for the Carlitz module."""
    p = FqPoly.from_ints(F2, list(p))
    module = residue_module(GaloisCover.trivial(F2), p).residue
    c = char_class(DrinfeldModule.carlitz(F2).e_module(module))
    assert c.augmentation(GroupRing(F2, FiniteGroup.trivial())) == p - FqPoly.constant(F2, 1)


def test_regular_rank_one_class(f3_c2):
    """c_G(F_q[G] with t acting by 2 + g) = t - (2 + g)."""
    T = np.array([[[2, 1]]], dtype=np.int64)
    c = char_class(FiniteAGModule.regular(f3_c2, T))
    assert c.rank == 1
    assert np.array_equal(c.coefficients, [[1, 2], [1, 0]])
    assert c.augmentation(f3_c2) == FqPoly.from_ints(F3, [0, 1]), "t - 3 over F_3"


def test_non_free_abelian_module_uses_components(f3_c2):
    """F_3 with trivial action and t = 0 has class t*e_+ + e_-."""
    module = FiniteAGModule(f3_c2, [[0]], np.array([[[1]], [[1]]]))
    c = char_class(module)
    assert c.route == "components"
    assert c.rank is None
    assert np.array_equal(c.coefficients, [[2, 1], [2, 2]])
    assert c.augmentation(f3_c2) == FqPoly.t(F3)


entries = st.lists(st.integers(0, 2), min_size=2, max_size=2)


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(entries, entries, entries)
def test_additivity_over_cyclic_group_ring(a, b, c):
    ring = GroupRing(F3, FiniteGroup.cyclic(2))
    assert char_class_additivity(ring, [[a]], [[b]], [[c]])


def test_additivity_over_s3():
    ring = GroupRing(F2, catalog_group("S3"))
    D = DecompositionData.for_ring(ring)
    rng = np.random.default_rng(5)
    for _ in range(3):
        T1 = ring.algebra.random(rng, (1, 1))
        T2 = ring.algebra.random(rng, (1, 1))
        C = ring.algebra.random(rng, (1, 1))
        assert char_class_additivity(ring, T1, T2, C, D)


def test_s3_class_is_central():
    ring = GroupRing(F2, catalog_group("S3"))
    D = DecompositionData.for_ring(ring)
    T = ring.algebra.random(np.random.default_rng(9), (2, 2))
    c = char_class(FiniteAGModule.regular(ring, T), D)
    assert c.rank == 2
    assert c.degree == 4, "degree r * n_i with n_i = 2 on the matrix block"
    assert all(ring.is_central(row) for row in c.coefficients)


def free_presentation(ring, T):
    """t*I - T over A[G], one relation per row."""
    r = T.shape[0]
    P = np.zeros((r, r, 2, ring.order), dtype=np.int64)
    P[:, :, 0, :] = ring.field.neg(T)
    for s in range(r):
        P[s, s, 1, 0] = 1
    return P


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(entries)
def test_fitting_ideal_is_generated_by_the_class(a):
    ring = GroupRing(F3, FiniteGroup.cyclic(2))
    module = FiniteAGModule.regular(ring, np.array([[a]], dtype=np.int64))
    c = char_class(module)
    principal = CentralIdeal.principal(ring, c.coefficients)
    assert fitting_ideal(ring, free_presentation(ring, c.t_matrix)) == principal
    assert fitting_ideal(ring, module.presentation()) == principal


@pytest.mark.slow
@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 2))
def test_fitting_ideal_is_generated_by_the_class_over_s3(seed, r):
    ring = GroupRing(F2, catalog_group("S3"))
    D = DecompositionData.for_ring(ring)
    T = ring.algebra.random(np.random.default_rng(seed), (r, r))
    c = char_class(FiniteAGModule.regular(ring, T), D)
    assert c.degree == 2 * r
    assert fitting_ideal(ring, free_presentation(ring, c.t_matrix), D) == CentralIdeal.principal(ring, c.coefficients)
