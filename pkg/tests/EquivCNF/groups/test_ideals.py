import numpy as np
import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.module import FiniteAGModule
from equivcnf.errors import NotFinitePresentation
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing
from equivcnf.groups.ideals import (CentralIdeal, annihilator_ideal, fitting_ideal, ideal_ops,
                                    minimal_polynomial)

F3 = FqField(3)


@pytest.fixture
def ring():
    """F_3[C_2]; the elements below are A[G] arrays of shape (D, 2)."""
    return GroupRing(F3, FiniteGroup.cyclic(2))


def ag(*rows):
    return np.array(rows, dtype=np.int64)


@pytest.fixture
def trivial_residue(ring):
    """A/(t) with G acting trivially."""
    return FiniteAGModule(ring, [[0]], np.array([[[1]], [[1]]]), name="A/(t)")


def test_principal_ideal_membership(ring):
    t = ag([0, 0], [1, 0])
    I = CentralIdeal.principal(ring, t)
    assert I.is_full_rank
    assert I.contains(ag([0, 0], [0, 1]))
    assert I.contains(ag([0, 0], [1, 2], [0, 1]))
    assert not I.contains(ag([1, 0]))
    assert not I.is_unit


def test_unit_and_zero_ideals(ring):
    unit, zero = CentralIdeal.unit(ring), CentralIdeal.zero(ring)
    assert unit.is_unit
    assert zero <= unit
    assert not unit <= zero
    assert zero.rank == 0


def test_product_of_principal_ideals(ring):
    x = ag([2, 1], [1, 0])
    y = ag([1, 1], [0, 0], [1, 0])
    product = CentralIdeal.principal(ring, x) * CentralIdeal.principal(ring, y)
    assert product == CentralIdeal.principal(ring, ring.ag_mul(x, y))
    assert product <= CentralIdeal.principal(ring, x)


def test_sum_of_coprime_ideals_is_unit(ring):
    t = CentralIdeal.principal(ring, ag([0, 0], [1, 0]))
    t_plus_one = CentralIdeal.principal(ring, ag([1, 0], [1, 0]))
    assert (t + t_plus_one).is_unit


def test_ideal_ops_dispatch(ring):
    I = CentralIdeal.principal(ring, ag([0, 0], [1, 0]))
    J = CentralIdeal.principal(ring, ag([0, 0], [0, 0], [1, 0]))
    assert ideal_ops("membership", I, x=ag([0, 0], [0, 1]))
    assert ideal_ops("contains", I, J)
    assert not ideal_ops("equality", I, J)
    assert ideal_ops("product", I, I) == J
    with pytest.raises(ValueError):
        ideal_ops("quotient", I, J)


def test_fitting_ideal_of_cyclic_presentation(ring):
    """Fit(A[G]/(x)) = (x) for a single relation."""
    x = ag([1, 2], [1, 0])
    presentation = x[None, None]
    assert fitting_ideal(ring, presentation) == CentralIdeal.principal(ring, x)


def test_fitting_ideal_rejects_infinite_cokernel(ring):
    with pytest.raises(NotFinitePresentation):
        fitting_ideal(ring, np.zeros((1, 1, 1, 2), dtype=np.int64))
    with pytest.raises(NotFinitePresentation):
        fitting_ideal(ring, np.zeros((0, 1, 1, 2), dtype=np.int64))


def test_annihilator_of_trivial_residue_module(ring, trivial_residue):
    ann = annihilator_ideal(ring, trivial_residue)
    assert ann.contains(ag([0, 0], [1, 0])), "t kills A/(t)"
    assert ann.contains(ag([2, 1])), "g - 1 kills a trivial module"
    assert not ann.contains(ag([1, 0]))


def test_fitting_ideal_of_module_presentation(ring, trivial_residue):
    fit = fitting_ideal(ring, trivial_residue.presentation())
    assert fit == annihilator_ideal(ring, trivial_residue), "cyclic module: Fit = Ann"
    assert fit <= annihilator_ideal(ring, trivial_residue)


def test_minimal_polynomial():
    F2 = FqField(2)
    assert minimal_polynomial(F2, np.array([[0, 1], [0, 0]])) == FqPoly.from_ints(F2, [0, 0, 1])
    assert minimal_polynomial(F2, np.eye(3, dtype=np.int64)) == FqPoly.from_ints(F2, [1, 1])
