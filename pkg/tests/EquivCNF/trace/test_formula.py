import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.config import load_fixture
from equivcnf.covers.cover import GaloisCover, build_cover
from equivcnf.covers.taming import taming_module
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.drinfeld.twisted import Carrier, TwistedPoly
from equivcnf.errors import NucleusTooSmall
from equivcnf.trace.formula import (class_truncated, euler_class_factored, euler_class_truncated,
                                    euler_peeling_check, multiplicativity_check, trace_formula_verify,
                                    varphialpha_check)
from equivcnf.trace.nuclear import phi_E_sequence
from equivcnf.trace.quotient import CompactQuotient, compact_quotient, nucleus_index

F2 = FqField(2)


def P(field, *coeffs):
    return FqPoly.from_ints(field, list(coeffs))


@pytest.fixture(scope="module")
def lattice():
    return taming_module(GaloisCover.trivial(F2)).lattice


@pytest.fixture(scope="module")
def phi():
    return phi_E_sequence(DrinfeldModule.carlitz(F2), 3)


def test_nucleus_index(lattice, phi):
    """tau t = t^2 tau needs 2 - 2i <= -(i + 1)."""
    assert nucleus_index(lattice, phi) == 3
    with pytest.raises(NucleusTooSmall):
        compact_quotient(lattice, 2, phi)
    with pytest.raises(NucleusTooSmall):
        CompactQuotient(lattice, 0)


def test_quotient_module(lattice):
    quotient = compact_quotient(lattice, 4)
    assert quotient.dim == 3
    module = quotient.module()
    assert module.dim == 3
    assert not module.t_action[:, -1].any(), "1/t kills t^-3 modulo the ball"


@pytest.mark.parametrize("p, expected", [
    ((0, 1), [1, 1, 0]),
    ((1, 1), [1, 1, 1]),
    ((1, 1, 1), [1, 0, 1]),
    ((1, 1, 0, 1), [1, 0, 0]),
])
def test_carlitz_euler_classes(lattice, phi, p, expected):
    c = euler_class_truncated(phi, lattice, P(F2, *p))
    assert c.coeffs[:, 0].tolist() == expected


def test_global_class(lattice, phi):
    """On span(t^-1, t^-2) tau is nilpotent and tau t fixes t^-2."""
    c = class_truncated(phi, compact_quotient(lattice, 3, phi))
    assert c.coeffs[:, 0].tolist() == [1, 0, 1]


def test_trace_formula_carlitz_f2(lattice, phi):
    report = trace_formula_verify(phi, lattice)
    assert report.holds, f"first difference at Z^{report.first_difference}"
    assert report.prime_bound == 4
    assert report.ball == 3
    assert len(report.primes) == 5
    assert report.lhs.coeffs[:, 0].tolist() == [1, 0, 1]


def test_trace_formula_with_larger_ball(lattice, phi):
    report = trace_formula_verify(phi, lattice, ball=5)
    assert report.holds
    assert report.ball == 5


@pytest.mark.slow
@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("name", ["carlitz-f2", "carlitz-f3", "carlitz-ttorsion-c2-f3"])
def test_trace_formula_on_fixtures(name, N):
    cover = build_cover(load_fixture(name))
    lattice = taming_module(cover).lattice
    phi = phi_E_sequence(DrinfeldModule.carlitz(cover.field), N)
    report = trace_formula_verify(phi, lattice)
    assert report.holds, f"first difference at Z^{report.first_difference}"


@pytest.mark.parametrize("p", [(0, 1), (1, 1, 1), (1, 0, 1, 1)])
def test_factored_euler_class(lattice, p):
    """1 + sum Z^j (t - phi(t)) t^(j-1) = (1 - Z phi(t)) (1 - Z t)^-1."""
    E = DrinfeldModule.carlitz(F2)
    p = P(F2, *p)
    assert euler_class_factored(E, lattice, p, 5) == euler_class_truncated(phi_E_sequence(E, 5), lattice, p)


def test_factored_euler_class_on_c2_cover():
    cover = build_cover(load_fixture("carlitz-ttorsion-c2-f3"))
    lattice = taming_module(cover).lattice
    E = DrinfeldModule.carlitz(cover.field)
    for p in (P(cover.field, 1, 1), P(cover.field, 1, 0, 1)):
        assert euler_class_factored(E, lattice, p, 4) == euler_class_truncated(phi_E_sequence(E, 4), lattice, p)


def test_multiplicativity(lattice, phi):
    quotient = compact_quotient(lattice, 3, phi)
    assert multiplicativity_check(phi, phi, quotient)


def test_swapped_products_have_equal_classes(lattice):
    """[1 - Z t tau] = [1 - Z tau t] on span(t^-1, t^-2)."""
    carrier = Carrier.polynomials(F2)
    quotient = compact_quotient(lattice, 3)
    alpha = TwistedPoly.tau(carrier)
    assert varphialpha_check(quotient, alpha, TwistedPoly.constant(carrier, FqPoly.t(F2)), 1, 3)


def test_euler_peeling(lattice, phi):
    assert euler_peeling_check(phi, lattice, 3) == []
    assert euler_peeling_check(phi, lattice, 2) == [P(F2, 1, 1, 1)]


def test_global_class_evaluates_to_series(lattice, phi):
    value = class_truncated(phi, compact_quotient(lattice, 3, phi)).evaluate()
    assert np.array_equal(value.coefficient(-2), [1])
    assert np.array_equal(value.coefficient(-1), [0])
