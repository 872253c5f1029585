import pytest

from equivcnf.config import entry_to_rational, load_fixture
from equivcnf.covers.cover import build_cover
from equivcnf.covers.taming import taming_module
from equivcnf.drinfeld.exponential import coordinate_map
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import UNotFree
from equivcnf.invariants import regulator
from equivcnf.invariants.pipeline import compute_invariants
from equivcnf.invariants.regulator import enlarge_lattice, regulator_class
from equivcnf.invariants.units import span_degree


def instance(name):
    config = load_fixture(name)
    cover = build_cover(config)
    E = DrinfeldModule.from_config(cover.field, config.drinfeld)
    basis = config.cover.taming_basis
    if basis is not None:
        basis = [[entry_to_rational(cover.field, e) for e in row] for row in basis]
    return E, taming_module(cover, basis)


def agree(a, b):
    floors = [x.floor for x in (a, b) if x.floor is not None]
    return a.agrees_to(b, max(floors, default=-2))


@pytest.fixture(scope="module")
def ttorsion():
    E, taming = instance("carlitz-ttorsion-c2-f3")
    return taming.lattice, compute_invariants(E, taming, 2)


@pytest.mark.slow
def test_free_units_give_trivial_enlargement(ttorsion):
    _, invariants = ttorsion
    enlarged = invariants.enlarged
    assert enlarged.m1_over_u_dim == 0
    assert enlarged.exponent.degree == 0
    assert enlarged.section == "vacuous"
    assert all(v is True for v in enlarged.checks.values())
    assert enlarged.to_report()["m1_over_u_dim"] == 0


@pytest.mark.slow
def test_enlarging_a_free_sublattice(ttorsion):
    lattice, invariants = ttorsion
    units, H = invariants.units, invariants.H
    f = lattice.field
    u0 = invariants.enlarged.generator
    g = coordinate_map(f, lattice.constant_actions[1], u0)
    u = [a.shift(1) + b for a, b in zip(u0, g)]
    assert span_degree(units, u) == units.covolume_degree + 2

    enlarged = enlarge_lattice(units, H, sublattice=u)
    assert enlarged.exponent.coeffs == (2, 0, 1), "t^2 - 1"
    assert enlarged.m1_over_u_dim == 2
    assert enlarged.quotient.g_action.shape == (2, 2, 2)
    assert enlarged.m2_class.coefficients.tolist() == [[0, 2], [1, 0]], "c_G(A[G]/(t - g)) = t - g"
    assert all(v is True for v in enlarged.checks.values()), enlarged.checks
    assert span_degree(units, enlarged.generator) == units.covolume_degree - 2

    volume = regulator_class(enlarged, lattice)
    assert agree(volume.value, invariants.regulator.value), "the volume class does not depend on M^1"


@pytest.mark.slow
def test_sublattice_search_when_units_are_not_free(ttorsion, monkeypatch):
    lattice, invariants = ttorsion

    def not_free(units, seed=0):
        raise UNotFree("forced")

    monkeypatch.setattr(regulator, "free_generator", not_free)
    enlarged = enlarge_lattice(invariants.units, invariants.H)
    assert enlarged.checks["generator"]
    assert enlarged.checks["exponent_kills"]
    volume = regulator_class(enlarged, lattice)
    assert agree(volume.value, invariants.regulator.value)


@pytest.mark.slow
def test_section_on_nonzero_class_module():
    E, taming = instance("twist-f2")
    invariants = compute_invariants(E, taming, 4)
    enlarged = invariants.enlarged
    assert enlarged.section == "trivial-group"
    assert len(enlarged.section_values) == invariants.H.dim == 1
    assert enlarged.checks["splits"]
    assert enlarged.checks["t_linear"]
    assert enlarged.checks["equivariant"]
    assert "section_error" not in enlarged.checks
    assert enlarged.m2.dim == 1
