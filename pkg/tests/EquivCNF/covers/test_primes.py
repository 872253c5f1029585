import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.config import load_fixture
from equivcnf.covers.cover import GaloisCover, build_cover
from equivcnf.covers.primes import lattice_quotient, prime_divisors, residue_module, tame_test, wild_primes
from equivcnf.errors import ConfigError
from equivcnf.groups.ideals import minimal_polynomial

F2 = FqField(2)


def P(field, *coeffs):
    return FqPoly.from_ints(field, list(coeffs))


def test_prime_divisors():
    assert set(prime_divisors(P(F2, 0, 1, 0, 1))) == {P(F2, 0, 1), P(F2, 1, 1)}, "t^3 + t = t (t + 1)^2"
    assert prime_divisors(P(F2, 1, 1, 1)) == [P(F2, 1, 1, 1)]
    assert prime_divisors(P(F2, 1)) == []


def test_residue_module_of_trivial_cover():
    cover = GaloisCover.trivial(F2)
    p = P(F2, 1, 1, 1)
    data = residue_module(cover, p)
    module = data.residue
    assert module.dim == 2
    assert minimal_polynomial(F2, module.t_action) == p
    assert module.has_frobenius


def test_residue_frobenius_is_q_power():
    """On A/(p) the Frobenius is x -> x^q, so it is the identity on F_q-constants."""
    cover = GaloisCover.trivial(F2)
    module = residue_module(cover, P(F2, 1, 1, 1)).residue
    one = np.array([1, 0], dtype=np.int64)
    assert np.array_equal(F2.dot(module.frobenius, one), one)


def test_tame_and_wild_primes():
    tame = build_cover(load_fixture("carlitz-ttorsion-c2-f3"))
    t3 = P(tame.field, 0, 1)
    data = tame_test(tame, t3)
    assert data.tame
    assert data.certificate["rank"] == 1
    assert wild_primes(tame) == []

    wild = build_cover(load_fixture("wild-c2-f2"))
    t2 = P(F2, 0, 1)
    data = tame_test(wild, t2)
    assert not data.tame
    assert data.certificate["h0_dim"] == 2, "O_K/tO_K = F_2[y]/y^2 with trivial action"
    assert wild_primes(wild) == [t2]


def test_unramified_prime_is_tame():
    cover = build_cover(load_fixture("kummer-c2-f3"))
    assert tame_test(cover, P(cover.field, 1, 1)).tame


def test_quotient_by_infinite_index_sublattice():
    cover = GaloisCover.trivial(F2)
    with pytest.raises(ConfigError):
        lattice_quotient(cover.integral, [[FqPoly(F2)]])
