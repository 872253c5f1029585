import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.covers.module import FiniteAGModule
from equivcnf.errors import NotFree
from equivcnf.groups.freeness import component_bases, ct_free_basis, tate_certificate
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing


def trivial_module(ring, dim):
    eye = np.eye(dim, dtype=np.int64)
    return FiniteAGModule(ring, np.zeros((dim, dim), dtype=np.int64),
                          np.stack([eye] * ring.order), name=f"trivial^{dim}")


@pytest.fixture
def f3_c2():
    return GroupRing(FqField(3), FiniteGroup.cyclic(2))


@pytest.fixture
def f2_c2():
    return GroupRing(FqField(2), FiniteGroup.cyclic(2))


def test_regular_module_is_free(f3_c2):
    T = np.array([[[1, 2], [0, 1]], [[2, 0], [1, 1]]], dtype=np.int64)
    module = FiniteAGModule.regular(f3_c2, T)
    basis = ct_free_basis(module, seed=5)
    assert basis.rank == 2
    assert basis.change.shape == (4, 4)


def test_endomorphism_matrix_of_rank_one_module(f3_c2):
    T = np.array([[[2, 1]]], dtype=np.int64)
    module = FiniteAGModule.regular(f3_c2, T)
    basis = ct_free_basis(module)
    assert np.array_equal(basis.endomorphism_matrix(module, module.t_action), T)


def test_coordinates_recover_generators(f3_c2):
    module = FiniteAGModule.regular(f3_c2, np.array([[[0, 1]]], dtype=np.int64))
    basis = ct_free_basis(module)
    coords = basis.coordinates(module, basis.generators[0])
    assert np.array_equal(coords, f3_c2.algebra.one[None, :])


def test_trivial_module_in_modular_characteristic_is_not_free(f2_c2):
    module = trivial_module(f2_c2, 2)
    with pytest.raises(NotFree) as info:
        ct_free_basis(module)
    cert = info.value.certificate
    assert cert["subgroup_order"] == 2
    assert cert["h0_dim"] == 2, "H^0 = M^G / N M = M when N acts as 0"
    assert tate_certificate(module) == cert


def test_dimension_obstruction(f3_c2):
    with pytest.raises(NotFree) as info:
        ct_free_basis(trivial_module(f3_c2, 3))
    assert info.value.certificate["reason"] == "dimension"


def test_coprime_trivial_module_has_no_tate_certificate(f3_c2):
    """Over F_3 no subgroup of C_2 has 3-power order."""
    assert tate_certificate(trivial_module(f3_c2, 2)) == {}


def test_component_bases_of_split_algebra():
    ring = GroupRing(FqField(7), FiniteGroup.cyclic(3))
    module = FiniteAGModule.regular(ring, np.array([[[3, 1, 0]]], dtype=np.int64))
    bases = component_bases(module)
    assert len(bases) == 3
    assert all(b.rank == 1 for b in bases)


def test_component_bases_allow_unequal_ranks(f3_c2):
    """The trivial module lives in the g = 1 component only."""
    module = trivial_module(f3_c2, 1)
    ranks = sorted(b.rank for b in component_bases(module))
    assert ranks == [0, 1]
