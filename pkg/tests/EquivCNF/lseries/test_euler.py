import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.cover import GaloisCover
from equivcnf.covers.module import FiniteAGModule
from equivcnf.covers.taming import taming_module
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import ConfigError
from equivcnf.groups.decomposition import DecompositionData, catalog_group
from equivcnf.groups.group_ring import GroupRing
from equivcnf.lseries.charclass import char_class
from equivcnf.lseries.euler import EulerFactor, euler_factor, prime_cutoff, theta_truncated
from equivcnf.lseries.stickelberger import blockwise_factor, stickelberger
from equivcnf.lseries.zeta import zeta_partial

F2 = FqField(2)
F3 = FqField(3)


@pytest.fixture(scope="module")
def carlitz_f2():
    return DrinfeldModule.carlitz(F2), taming_module(GaloisCover.trivial(F2))


def test_prime_cutoff():
    assert prime_cutoff(3, 1) == 4
    assert prime_cutoff(3, 2) == 7


def test_euler_factor_at_t(carlitz_f2):
    E, taming = carlitz_f2
    t = FqPoly.t(F2)
    factor = euler_factor(E, taming, t, -6)
    assert np.array_equal(factor.numerator.coefficients, [[0], [1]])
    assert np.array_equal(factor.denominator.coefficients, [[1], [1]])
    expected = LaurentSeries.from_scalars(F2.algebra, {k: 1 for k in range(-6, 1)}, floor=-6)
    assert factor.series.agrees_to(expected, -6), "t/(t + 1) = sum of t^-k"


def test_expand_reuses_exact_classes(carlitz_f2):
    E, taming = carlitz_f2
    factor = euler_factor(E, taming, FqPoly.from_ints(F2, [1, 1, 1]), -4)
    deeper = factor.expand(taming.lattice.cover.ring, -9)
    assert deeper.floor == -9
    assert deeper.agrees_to(factor.series, -4)


@pytest.mark.parametrize("field, N", [(F2, 3), (F3, 2)])
def test_carlitz_lvalue_is_the_zeta_value(field, N):
    E = DrinfeldModule.carlitz(field)
    theta = theta_truncated(E, taming_module(GaloisCover.trivial(field)), N)
    assert theta.certified
    assert theta.floor == -N
    assert theta.prime_bound == N + 1
    assert theta.agrees_with(zeta_partial(field, N))


def test_overridden_cutoff_is_uncertified(carlitz_f2):
    E, taming = carlitz_f2
    theta = theta_truncated(E, taming, 2, prime_bound_override=1)
    assert not theta.certified
    assert theta.prime_bound == 1
    assert len(theta.factors) == 2


def test_precision_must_be_positive(carlitz_f2):
    E, taming = carlitz_f2
    with pytest.raises(ConfigError):
        theta_truncated(E, taming, 0)


def test_threads_do_not_change_the_value(carlitz_f2):
    E, taming = carlitz_f2
    one = theta_truncated(E, taming, 2)
    many = theta_truncated(E, taming, 2, threads=4)
    assert many.value.first_difference(one.value) is None
    assert [f.p for f in many.factors] == [f.p for f in one.factors]


def test_stickelberger_of_abelian_theta_is_theta(carlitz_f2):
    E, taming = carlitz_f2
    theta = theta_truncated(E, taming, 2)
    D = DecompositionData.for_ring(taming.lattice.cover.ring)
    elem = stickelberger(theta, D)
    assert elem.floor == -2
    assert elem.value.first_difference(theta.value) is None


def test_blockwise_factor_matches_reduced_norms():
    """Series determinants over each block reproduce Nrd(tI - T) / Nrd(tI - T')."""
    ring = GroupRing(F2, catalog_group("S3"))
    D = DecompositionData.for_ring(ring)
    rng = np.random.default_rng(21)
    T1, T2 = ring.algebra.random(rng, (1, 1)), ring.algebra.random(rng, (1, 1))
    num = char_class(FiniteAGModule.regular(ring, T1), D)
    den = char_class(FiniteAGModule.regular(ring, T2), D)
    factor = EulerFactor(FqPoly.t(F2), num, den, LaurentSeries.zero(ring.algebra), -6)
    factor.series = factor.expand(ring, -6)
    block = blockwise_factor(factor, ring, D, -6)
    assert block.agrees_to(factor.series, -6)
    assert all(ring.is_central(c) for c in factor.series.coeffs)
