from equivcnf.algebra.field import FqField
from equivcnf.algebra.normal_forms import hnf, hnf_contains, smith_invariants
from equivcnf.algebra.poly import FqPoly

F2 = FqField(2)


def P(*coeffs):
    return FqPoly.from_ints(F2, list(coeffs))


def test_smith_of_diagonal():
    """A/(t) + A/(t+1) = A/(t^2 + t)."""
    inv = smith_invariants([[P(0, 1), P()], [P(), P(1, 1)]], F2)
    assert inv.factors == (P(1), P(0, 1, 1))
    assert inv.is_finite
    assert inv.dimension == 2
    assert inv.order(F2) == P(0, 1, 1)


def test_smith_keeps_divisibility_chain():
    inv = smith_invariants([[P(0, 1), P()], [P(), P(0, 0, 1)]], F2)
    assert inv.factors == (P(0, 1), P(0, 0, 1))
    assert len(inv.nontrivial) == 2


def test_smith_detects_free_part():
    inv = smith_invariants([[P(0, 1), P()]], F2, cols=2)
    assert not inv.is_finite
    assert inv.factors[-1].is_zero


def test_smith_of_unimodular_matrix_is_zero_module():
    inv = smith_invariants([[P(1), P(0, 1)], [P(), P(1)]], F2)
    assert inv.is_zero_module


def test_hnf_membership():
    basis = hnf([[P(0, 1), P(1)], [P(), P(0, 1)]], 2, F2)
    assert all(row[next(j for j, x in enumerate(row) if not x.is_zero)].is_monic for row in basis)
    assert hnf_contains(basis, [P(0, 1), P(1)])
    assert hnf_contains(basis, [P(0, 0, 1), P()])
    assert not hnf_contains(basis, [P(1), P()])
