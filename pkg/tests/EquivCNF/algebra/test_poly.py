import pytest
import sympy
from hypothesis import given, settings, strategies as st

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import (
    FqPoly,
    enumerate_monic_irreducibles,
    is_irreducible,
    necklace_count,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
)

F2 = FqField(2)
F3 = FqField(3)

coefficients = st.lists(st.integers(0, 2), min_size=1, max_size=6)


def _sympy(poly: FqPoly):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(poly.coeffs)), x, modulus=poly.field.char)


@pytest.mark.parametrize("field, bound", [(F2, 6), (F3, 4), (FqField(2, 2), 3)])
def test_irreducible_counts(field, bound):
    """The enumeration finds exactly the necklace count of each degree."""
    found = enumerate_monic_irreducibles(field, bound)
    for d in range(1, bound + 1):
        count = sum(1 for p in found if p.degree == d)
        assert count == necklace_count(field.q, d), f"degree {d} over F_{field.q}"


@pytest.mark.parametrize("field, bound", [(F2, 5), (F3, 3)])
def test_irreducibles_agree_with_sympy(field, bound):
    for p in enumerate_monic_irreducibles(field, bound):
        assert p.is_monic
        assert _sympy(p).is_irreducible, f"{p!r} is reducible according to sympy"


def test_reducible_polynomials_rejected():
    t = FqPoly.t(F3)
    assert not is_irreducible(t * t + FqPoly.constant(F3, 2))  # t^2 - 1
    assert is_irreducible(t * t + FqPoly.constant(F3, 1))


@settings(max_examples=60, deadline=None)
@given(coefficients, coefficients)
def test_division_with_remainder(a, b):
    a, b = FqPoly.from_ints(F3, a), FqPoly.from_ints(F3, b)
    if b.is_zero:
        return
    quot, rem = divmod(a, b)
    assert quot * b + rem == a
    assert rem.is_zero or rem.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(coefficients, coefficients)
def test_gcd_lcm_product(a, b):
    """gcd * lcm is the monic product, and the Bezout identity holds."""
    a, b = FqPoly.from_ints(F3, a), FqPoly.from_ints(F3, b)
    if a.is_zero or b.is_zero:
        return
    assert poly_gcd(a, b) * poly_lcm(a, b) == (a * b).monic()
    g, s, u = poly_xgcd(a, b)
    assert s * a + u * b == g
    assert g == poly_gcd(a, b)


@settings(max_examples=40, deadline=None)
@given(coefficients, coefficients)
def test_gcd_matches_sympy(a, b):
    a, b = FqPoly.from_ints(F3, a), FqPoly.from_ints(F3, b)
    if a.is_zero or b.is_zero:
        return
    expected = sympy.gcd(_sympy(a), _sympy(b))
    assert poly_gcd(a, b).degree == expected.degree()


def test_frobenius_spread_is_qth_power():
    """f(t)^q = f(t^q) over the prime field."""
    f = FqPoly.from_ints(F3, [1, 2, 0, 1])
    assert f ** 3 == f.spread(3)


def test_polynomials_are_immutable():
    f = FqPoly.t(F2)
    with pytest.raises(AttributeError):
        f.coeffs = (1,)
