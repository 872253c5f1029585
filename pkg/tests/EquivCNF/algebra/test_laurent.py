import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.laurent import LaurentSeries, laurent_arith, laurent_det
from equivcnf.algebra.rational import RationalFunction
from equivcnf.errors import InvertZero, PrecisionExhausted

F2 = FqField(2)
F3 = FqField(3)


def test_geometric_series_inverse():
    """(1 - 1/t)^-1 = 1 + 1/t + 1/t^2 + ... over F_2."""
    alg = F2.algebra
    x = LaurentSeries.from_scalars(alg, {0: 1, -1: 1})
    inv = x.inverse(-6)
    assert inv.floor == -6
    assert inv.terms() == {k: [1] for k in range(-6, 1)}
    assert (x * inv).agrees_to(LaurentSeries.one(alg), -6)


def test_rational_expansion():
    """1/(t - 1) = sum_{k >= 1} t^-k over F_3."""
    r = RationalFunction.from_ints(F3, [1], [-1, 1])
    series = r.to_laurent(-5)
    assert series.terms() == {k: [1] for k in range(-5, 0)}


def test_rational_arithmetic_reduces():
    t2_minus_1 = RationalFunction.from_ints(F3, [-1, 0, 1], [-1, 1])
    assert t2_minus_1.is_polynomial
    assert t2_minus_1 == RationalFunction.from_ints(F3, [1, 1])
    half = RationalFunction.from_ints(F3, [1], [0, 1])
    assert half + half == RationalFunction.from_ints(F3, [2], [0, 1])
    assert (half * RationalFunction.from_ints(F3, [0, 1])) == RationalFunction.constant(F3, 1)


def test_precision_is_tracked_through_products():
    alg = F3.algebra
    known = LaurentSeries.from_scalars(alg, {2: 1, 0: 1}, floor=-3)
    exact = LaurentSeries.from_scalars(alg, {1: 2})
    prod = known * exact
    assert prod.floor == -2, "An exact factor of degree 1 shifts the floor up by one"
    with pytest.raises(PrecisionExhausted):
        prod.coefficient(-3)


def test_agreement_below_floor_raises():
    alg = F2.algebra
    a = LaurentSeries.from_scalars(alg, {0: 1}, floor=-2)
    with pytest.raises(PrecisionExhausted):
        a.agrees_to(LaurentSeries.one(alg), -4)
    assert a.agrees_to(LaurentSeries.one(alg), -2)


def test_first_difference_reports_top_exponent():
    alg = F3.algebra
    a = LaurentSeries.from_scalars(alg, {0: 1, -2: 1, -3: 2})
    b = LaurentSeries.from_scalars(alg, {0: 1, -3: 1})
    assert a.first_difference(b) == -2
    assert a.first_difference(a) is None


def test_polynomial_and_fractional_parts():
    alg = F3.algebra
    x = LaurentSeries.from_scalars(alg, {2: 1, 0: 2, -1: 1, -4: 2})
    assert x.polynomial_part().terms() == {2: [1], 0: [2]}
    assert x.fractional_part().terms() == {-1: [1], -4: [2]}
    assert x.polynomial_part().to_poly().coeffs == (2, 0, 1)


def test_zero_inverse_raises():
    with pytest.raises(InvertZero):
        LaurentSeries.zero(F2.algebra).inverse(-3)


def test_componentwise_inverse_in_group_algebra():
    """(1 + g) + (1 - g)/t is a unit of F_3[C_2]((1/t)) whose leading coefficient is a zero divisor."""
    alg = FiniteAlgebra.from_table(F3, [[0, 1], [1, 0]], labels=["e", "g"])
    e, g = alg.basis(0), alg.basis(1)
    x = LaurentSeries(alg, np.stack([alg.sub(e, g), alg.add(e, g)]), -1)
    assert not alg.is_unit(x.leading())
    inv = x.inverse(-5)
    assert (x * inv).agrees_to(LaurentSeries.one(alg), -5)


def test_laurent_det_of_constants():
    alg = F3.algebra
    c = lambda v: LaurentSeries.from_scalars(alg, {0: v} if v else {})
    det = laurent_det(alg, [[c(1), c(2)], [c(1), c(1)]])
    assert det.terms() == {0: [2]}, "det [[1, 2], [1, 1]] = -1 = 2 mod 3"


def test_laurent_det_of_diagonal_series():
    alg = F2.algebra
    t = LaurentSeries.monomial(alg, 1)
    zero = LaurentSeries.zero(alg)
    det = laurent_det(alg, [[t, zero], [zero, t]])
    assert det.terms() == {2: [1]}


def test_arith_dispatch():
    alg = F2.algebra
    a = LaurentSeries.from_scalars(alg, {1: 1})
    b = LaurentSeries.from_scalars(alg, {0: 1})
    assert laurent_arith("add", a, b).terms() == {1: [1], 0: [1]}
    assert laurent_arith("mul", a, b, a).terms() == {2: [1]}
    assert laurent_arith("truncate", a, floor=0).floor == 0
    with pytest.raises(ValueError):
        laurent_arith("divide", a, b)
