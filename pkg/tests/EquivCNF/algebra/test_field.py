import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equivcnf.algebra.field import FqField, default_modulus
from equivcnf.errors import ConfigError, InvertZero


@pytest.fixture(params=[(2, 1), (3, 1), (2, 2), (3, 2), (2, 3)])
def field(request):
    """Prime and prime-power fields small enough to check exhaustively."""
    char, degree = request.param
    return FqField(char, degree)


def test_inverse_of_every_unit(field):
    """Every nonzero element times its inverse is 1."""
    units = field.elements[1:]
    assert np.all(field.mul(units, field.inv(units)) == 1), f"Inverse table broken in {field}"


def test_frobenius_fixes_field(field):
    """x^q = x for every x in F_q."""
    assert np.array_equal(field.power(field.elements, field.q), field.elements)


def test_characteristic_kills_sums(field):
    """Adding any element to itself l times gives 0."""
    acc = np.zeros(field.q, dtype=np.int64)
    for _ in range(field.char):
        acc = field.add(acc, field.elements)
    assert not acc.any(), f"l * x != 0 in {field}"


def test_distributivity_exhaustive(field):
    """a*(b + c) = a*b + a*c over all triples."""
    a, b, c = np.meshgrid(field.elements, field.elements, field.elements, indexing="ij")
    lhs = field.mul(a, field.add(b, c))
    rhs = field.add(field.mul(a, b), field.mul(a, c))
    assert np.array_equal(lhs, rhs)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_multiplication_associative(a, b, c):
    f = FqField(3, 2)
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


def test_dot_matches_elementwise_sum():
    """Matrix products in F_4 agree with explicit sums of products."""
    f = FqField(2, 2)
    rng = np.random.default_rng(7)
    A = f.random(rng, (3, 4))
    B = f.random(rng, (4, 2))
    C = f.dot(A, B)
    for i in range(3):
        for j in range(2):
            acc = 0
            for k in range(4):
                acc = int(f.add(acc, f.mul(A[i, k], B[k, j])))
            assert C[i, j] == acc


def test_default_modulus_is_irreducible():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(3, 1) == (0, 1)


def test_invalid_fields_rejected():
    with pytest.raises(ConfigError):
        FqField(4)
    with pytest.raises(ConfigError):
        FqField(2, 2, modulus=(1, 0, 1))


def test_inverting_zero_raises():
    with pytest.raises(InvertZero):
        FqField(5).inv(0)
