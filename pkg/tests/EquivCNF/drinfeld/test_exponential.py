
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.cover import GaloisCover
from equivcnf.drinfeld.exponential import ExpSeries, LatticeExponential, exp_eval, isometry_ball
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import IsometryBallNotFound

F2 = FqField(2)
F3 = FqField(3)


@pytest.fixture
def carlitz_f2():
    return DrinfeldModule.carlitz(F2), GaloisCover.trivial(F2).integral


@pytest.mark.parametrize("field", [F2, F3])
def test_carlitz_exp_coefficient_degrees(field):
    """deg e_i = -i q^i for the Carlitz exponential, and the a priori bound is sharp."""
    series = ExpSeries(DrinfeldModule.carlitz(field))
    for i in range(5):
        assert series.check_recursion(i)
        assert series.degree(i) == -i * field.q ** i
        assert series.degree_bound(i) == series.degree(i)


def test_first_carlitz_coefficient():
    series = ExpSeries(DrinfeldModule.carlitz(F3))
    t = FqPoly.t(F3)
    e1 = series.coefficient(1)
    assert e1 * (FqPoly.monomial(F3, 3) - t) == FqPoly.constant(F3, 1)


def test_rank_two_degree_bound():
    E = DrinfeldModule(F2, [FqPoly.constant(F2, 1), FqPoly.t(F2)])
    series = ExpSeries(E)
    for i in range(6):
        assert series.check_recursion(i)
        if not series.coefficient(i).is_zero:
            assert series.degree(i) <= series.degree_bound(i)


def test_exp_of_small_element(carlitz_f2):
    """exp(1/t) = 1/t + t^-2/(t^2 + t) + O(t^-12)."""
    E, lattice = carlitz_f2
    x = LaurentSeries.monomial(F2.algebra, -1)
    y = exp_eval(E, lattice, [x], -8)[0]
    assert y.floor == -8
    assert y.first_difference(x) == -4
    assert [y.scalar_coefficient(k) for k in range(-1, -9, -1)] == [1, 0, 0, 1, 1, 1, 1, 1]


def test_exp_functional_equation(carlitz_f2):
    """exp(t x) = phi(t)(exp(x))."""
    E, lattice = carlitz_f2
    expo = LatticeExponential(E, lattice)
    alg = F2.algebra
    y = expo([LaurentSeries.monomial(alg, -2)], -10)
    lhs = expo.phi(FqPoly.t(F2), y)
    rhs = expo([LaurentSeries.monomial(alg, -1)], -9)
    assert lhs[0].agrees_to(rhs[0], -9)


def test_exp_of_zero(carlitz_f2):
    E, lattice = carlitz_f2
    out = exp_eval(E, lattice, [LaurentSeries.zero(F2.algebra)], -5)
    assert out[0].is_zero and out[0].floor == -5


def test_isometry_ball(carlitz_f2):
    E, lattice = carlitz_f2
    assert isometry_ball(E, lattice) == 1
    rank2 = DrinfeldModule(F2, [FqPoly.constant(F2, 1), FqPoly.monomial(F2, 9)])
    # deg a_2 = 9, q^2 = 4: m >= (9 + 1 - 4) / 3
    assert isometry_ball(rank2, lattice) == 2
    with pytest.raises(IsometryBallNotFound):
        isometry_ball(E, lattice, budget=0)
