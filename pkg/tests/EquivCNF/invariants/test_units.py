import pytest

from equivcnf.algebra.field import FqField
from equivcnf.covers.cover import GaloisCover
from equivcnf.covers.taming import taming_module
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.invariants.pipeline import compute_invariants, unit_precision
from equivcnf.invariants.units import free_generator, is_generator, unit_checks, unit_lattice


@pytest.fixture(scope="module", params=[2, 3])
def carlitz(request):
    field = FqField(request.param)
    return DrinfeldModule.carlitz(field), taming_module(GaloisCover.trivial(field))


def test_carlitz_unit_lattice(carlitz):
    E, taming = carlitz
    units = unit_lattice(E, taming.lattice, precision=8)
    assert units.rank == 1
    assert units.covolume_degree == 0, "deg zeta(1) = 0 and H = 0"
    assert unit_checks(units) == {"in_lattice": True, "t_stable": True, "windows": True}


def test_trivial_group_generator_is_the_basis(carlitz):
    E, taming = carlitz
    units = unit_lattice(E, taming.lattice, precision=8)
    w = free_generator(units)
    assert w is units.basis[0]
    assert is_generator(units, w)
    assert free_generator(units) is w


def test_unit_precision():
    assert unit_precision(2, 4, 3) == 18


def test_pipeline_without_regulator(carlitz):
    E, taming = carlitz
    invariants = compute_invariants(E, taming, 2, with_regulator=False)
    assert invariants.regulator is None
    assert invariants.H.is_zero
    assert invariants.units.rank == 1
    assert invariants.theta.floor == -2


def test_pipeline_regulator_reaches_precision(carlitz):
    E, taming = carlitz
    invariants = compute_invariants(E, taming, 3)
    assert invariants.regulator.floor is None or invariants.regulator.floor <= -3
    report = invariants.to_report()
    assert set(report) == {"theta", "class_module", "units", "enlarged", "regulator"}
