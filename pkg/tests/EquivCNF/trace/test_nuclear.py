import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.drinfeld.twisted import Carrier, TwistedPoly
from equivcnf.errors import ConfigError
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing
from equivcnf.trace.nuclear import NuclearSeq, phi_E_sequence, single_term
from equivcnf.trace.series import TruncGroupSeries

F2 = FqField(2)
carrier = Carrier.polynomials(F2)
t = FqPoly.t(F2)
one = FqPoly.constant(F2, 1)
zero = FqPoly(F2)


def test_carlitz_sequence():
    """t - phi(t) = -tau, then right multiplication by powers of t."""
    phi = phi_E_sequence(DrinfeldModule.carlitz(F2), 4)
    assert phi.precision == 4
    assert phi.max_tau_degree == 1
    assert phi.term(1) == TwistedPoly.tau(carrier)
    assert phi.term(2) == TwistedPoly(carrier, [zero, t * t])
    assert phi.term(3) == TwistedPoly(carrier, [zero, t ** 4])


def test_sequence_needs_positive_precision():
    with pytest.raises(ConfigError):
        phi_E_sequence(DrinfeldModule.carlitz(F2), 0)


def test_constant_term_rejected():
    with pytest.raises(ConfigError):
        NuclearSeq([TwistedPoly.constant(carrier, t)])


def test_compose_with_zero():
    phi = phi_E_sequence(DrinfeldModule.carlitz(F2), 3)
    composed = phi.compose(NuclearSeq.zero(F2, 3))
    assert composed.terms == phi.terms


def test_compose_squares():
    """(1 + Z tau)^2 = 1 + Z^2 tau^2 in characteristic 2."""
    phi = single_term(F2, TwistedPoly.tau(carrier), 1, 3, sign=1)
    square = phi.compose(phi)
    assert square.term(1).is_zero
    assert square.term(2) == TwistedPoly.tau(carrier, 2)


def test_single_term_sign():
    phi = single_term(FqField(3), TwistedPoly.tau(Carrier.polynomials(FqField(3))), 2, 4)
    assert phi.term(1).is_zero and phi.term(3).is_zero
    assert phi.term(2).coefficient(1) == FqPoly.constant(FqField(3), 2)


def test_truncated_series_arithmetic():
    ring = GroupRing(FqField(3), FiniteGroup.cyclic(2))
    x = TruncGroupSeries(ring, np.array([[1, 0], [2, 1], [0, 1]], dtype=np.int64))
    assert (x * x.inverse()).is_one
    assert x.first_difference(TruncGroupSeries.one(ring, 3)) == 1
    with pytest.raises(ValueError):
        x * TruncGroupSeries.one(ring, 2)
    value = x.evaluate()
    assert value.floor == -2
    assert np.array_equal(value.coefficient(-1), [2, 1])
