import pytest

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.config import load_fixture, parse_config
from equivcnf.covers.cover import GaloisCover, build_cover
from equivcnf.covers.primes import ramified_primes
from equivcnf.errors import CayleyMismatch, ConfigError, NotAutomorphism, NotSeparable
from equivcnf.groups.group import FiniteGroup


def P(field, *coeffs):
    return FqPoly.from_ints(field, list(coeffs))


def c2_document(action, g=((0, 1), (0,), (1,))):
    return parse_config({
        "name": "doc",
        "field": {"char": 3},
        "cover": {"g": [list(c) for c in g], "group": {"kind": "cyclic", "order": 2}, "action": {"g": action}},
    })


def test_trivial_cover():
    cover = GaloisCover.trivial(FqField(2))
    assert cover.degree == 1
    assert cover.discriminant() == P(cover.field, 1)
    assert ramified_primes(cover) == []
    assert cover.integral.constant_actions.shape == (1, 1, 1)


@pytest.mark.parametrize("fixture, disc", [
    ("carlitz-ttorsion-c2-f3", (0, 1)),
    ("kummer-c2-f3", (1, 0, 1)),
])
def test_discriminants(fixture, disc):
    cover = build_cover(load_fixture(fixture))
    assert cover.discriminant() == P(cover.field, *disc)
    assert ramified_primes(cover) == [P(cover.field, *disc)]


def test_wild_cover_discriminant():
    """y^2 + t y + t has discriminant t^2 on the basis 1, y."""
    cover = build_cover(load_fixture("wild-c2-f2"))
    assert cover.discriminant() == P(cover.field, 0, 0, 1)
    assert ramified_primes(cover) == [P(cover.field, 0, 1)]
    assert cover.integral.constant_actions is None, "sigma(y) = y + t"


def test_galois_action_on_elements():
    cover = build_cover(load_fixture("carlitz-ttorsion-c2-f3"))
    x = [cover.zero, cover.one]
    g = cover.group.index("g")
    assert cover.apply(g, x) == [cover.zero, -cover.one]


def test_lattice_omega_is_q_power_map():
    cover = build_cover(load_fixture("carlitz-ttorsion-c2-f3"))
    lattice = cover.integral
    f = cover.field
    # lambda^3 = -t lambda
    assert lattice.omega[1][1] == P(f, 0, 2)
    assert lattice.omega[0][0] == P(f, 1)
    assert lattice.omega_degree == 1


def test_degree_must_match_group_order():
    f = FqField(3)
    with pytest.raises(ConfigError):
        GaloisCover(f, FiniteGroup.trivial(), [P(f, 0, 1), P(f), P(f, 1)])


def test_inseparable_polynomial():
    f = FqField(2)
    with pytest.raises(NotSeparable):
        GaloisCover(f, FiniteGroup.cyclic(2), [P(f, 0, 1), P(f), P(f, 1)])


def test_action_must_realize_cayley_table():
    with pytest.raises(CayleyMismatch):
        build_cover(c2_document([[[1], [0]], [[0], [0, 1]]]))


def test_action_must_be_multiplicative():
    """x -> 1 - x squares to the identity but does not respect x^2 = -t."""
    with pytest.raises(NotAutomorphism) as info:
        build_cover(c2_document([[[1], [1]], [[0], [2]]]))
    assert info.value.pair[0] == "g"


def test_missing_cover_section():
    config = parse_config({"field": {"char": 2}})
    with pytest.raises(ConfigError):
        build_cover(config)
