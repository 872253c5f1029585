import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.lseries.zeta import power_sum, power_sums, zeta_partial

F2 = FqField(2)
F3 = FqField(3)


def test_degree_zero_sum_is_one():
    assert zeta_partial(F2, 0).agrees_to(LaurentSeries.one(F2.algebra), -1)


def test_first_power_sum_over_f3():
    """Sum of 1/(t + c) over F_3 is -1/(t^3 - t)."""
    expected = LaurentSeries.from_scalars(F3.algebra, {-3: 2, -5: 2}, floor=-6)
    assert power_sum(F3, 1, -6).agrees_to(expected, -6)


def test_first_power_sum_over_f2():
    """1/t + 1/(t + 1) = 1/(t^2 + t)."""
    expected = LaurentSeries.from_scalars(F2.algebra, {k: 1 for k in range(-6, -1)}, floor=-6)
    assert power_sum(F2, 1, -6).agrees_to(expected, -6)


def test_power_sums_default_floor():
    sums = power_sums(F2, 3)
    assert len(sums) == 4
    assert all(s.floor == -7 for s in sums)


def test_partial_zeta_stabilizes():
    """Degree-d terms lie below t^-d, so partial sums agree above the cut."""
    assert zeta_partial(F3, 2).agrees_to(zeta_partial(F3, 3), -2)


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        zeta_partial(F2, -1)
