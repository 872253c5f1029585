import copy

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equivcnf.algebra.field import FqField
from equivcnf.algebra.truncated import matmul
from equivcnf.errors import ConfigError, DecompositionInvalid, HypothesisViolated
from equivcnf.groups.decomposition import (DecompositionData, catalog_group, decomposition_verify,
                                           load_catalog)
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing


@pytest.fixture(scope="module")
def f2_s3():
    return GroupRing(FqField(2), catalog_group("S3"))


@pytest.fixture(scope="module")
def s3_entry():
    return load_catalog()["decompositions"]["s3-f2"]


@pytest.fixture(scope="module")
def s3_decomposition(f2_s3):
    return DecompositionData.for_ring(f2_s3)


def test_catalog_decomposition_verifies(f2_s3, s3_entry):
    D = DecompositionData.from_dict(f2_s3, s3_entry, name="s3-f2")
    assert decomposition_verify(D) is True
    assert D.verified
    assert [b.size for b in D.blocks] == [1, 2]


def test_for_ring_finds_catalog_entry(s3_decomposition):
    assert s3_decomposition.verified
    assert not s3_decomposition.is_trivial
    assert s3_decomposition.center_map.shape == (3, 3)


def test_corrupted_entry_reports_violation(f2_s3, s3_entry):
    broken = copy.deepcopy(s3_entry)
    broken["blocks"][1]["images"]["r"] = [[1, 0], [0, 1]]
    D = DecompositionData.from_dict(f2_s3, broken, name="broken")
    problems = decomposition_verify(D)
    assert isinstance(problems, list) and len(problems) == 1
    assert "not multiplicative" in problems[0]
    assert not D.verified


def test_unverified_decomposition_is_unusable(f2_s3, s3_entry):
    D = DecompositionData.from_dict(f2_s3, s3_entry, name="s3-f2")
    with pytest.raises(DecompositionInvalid):
        D.nrd(np.zeros((1, 1, 6), dtype=np.int64))


def test_wrong_characteristic_is_rejected(s3_entry):
    ring = GroupRing(FqField(5), catalog_group("S3"))
    with pytest.raises(ConfigError):
        DecompositionData.from_dict(ring, s3_entry, name="s3-f2")
    with pytest.raises(ConfigError):
        DecompositionData.for_ring(ring)


def test_characteristic_dividing_commutator_order():
    ring = GroupRing(FqField(3), FiniteGroup.symmetric(3))
    with pytest.raises(HypothesisViolated):
        DecompositionData(ring, [], name="empty").verify()


def test_abelian_decomposition_nrd_is_identity():
    ring = GroupRing(FqField(3), FiniteGroup.cyclic(3))
    D = DecompositionData.for_ring(ring)
    assert D.is_trivial
    x = np.array([1, 2, 0], dtype=np.int64)
    assert np.array_equal(D.nrd(x[None, None, :]), x)


@pytest.mark.slow
@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_nrd_is_multiplicative(f2_s3, s3_decomposition, seed):
    rng = np.random.default_rng(seed)
    alg = f2_s3.algebra
    X = alg.random(rng, (2, 2))
    Y = alg.random(rng, (2, 2))
    lhs = s3_decomposition.nrd(matmul(alg, X, Y))
    rhs = alg.mul(s3_decomposition.nrd(X), s3_decomposition.nrd(Y))
    assert np.array_equal(lhs, rhs)


def test_nrd_of_group_elements(f2_s3, s3_decomposition):
    """Nrd(g) is the sign character in the first block and det = 1 in the second."""
    for g in range(f2_s3.order):
        value = s3_decomposition.nrd(f2_s3.element(g)[None, None, :])
        assert f2_s3.is_central(value)
        assert f2_s3.augmentation(value) == 1


def test_nrd_charpoly_degrees(f2_s3, s3_decomposition):
    """Nrd(tI - T) has degree 2 on the sign block and 4 on the standard block."""
    rng = np.random.default_rng(3)
    alg = f2_s3.algebra
    T = alg.random(rng, (2, 2))
    cp = s3_decomposition.nrd_charpoly(T)
    assert cp.shape[0] == 5
    lead = cp[-1]
    assert lead.any() and not np.array_equal(lead, alg.one)
    assert np.array_equal(alg.mul(lead, lead), lead), "leading coefficient is the standard block idempotent"
    assert np.array_equal(cp[0], s3_decomposition.nrd(T)), "constant term in characteristic 2"
