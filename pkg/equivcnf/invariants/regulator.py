"""
The enlarged lattice M^1, the volume class of lambda and the elements R(psi).

M^1 is U(E/M) itself when U is A[G]-free, and otherwise f^-1 A[G]u for an
element u spanning a free sublattice of U, f the exponent of U/A[G]u. A
G-equivariant t-linear section of M^2 -> H(E/M) splits M^2 as M^1/U + H.

Volumes are measured against a reference lattice N >= M that is A[G]-free
on a constant generator v: writing w = xi * v with xi in F_inf[G],
the class is the monic representative of Nrd(xi) * c_G(M^2) * c_G(N/M)^-1.
"""
import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra import linalg
from equivcnf.algebra.laurent import LaurentSeries, laurent_det
from equivcnf.algebra.normal_forms import smith_invariants
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.rational import RationalFunction
from equivcnf.covers.cover import Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.covers.primes import lattice_quotient, polynomial_quotient
from equivcnf.drinfeld.exponential import coordinate_map
from equivcnf.errors import (DivergenceSuspected, InvertZero, NoSectionAvailable, NotFree, NotFreeLattice,
                             NotPolynomialWithinPrecision, PrecisionExhausted, UNotFree)
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.groups.freeness import ct_free_basis
from equivcnf.groups.group_ring import GroupRing
from equivcnf.invariants.class_module import ClassModule
from equivcnf.invariants.image import Coords, fractional
from equivcnf.invariants.units import UnitLattice, free_generator, span_degree, sublattice_generator
from equivcnf.lseries.charclass import CharClass, char_class
from equivcnf.lseries.monic import central_inverse, monic_normalize

logger = logging.getLogger(__name__)


def solve_laurent(field, columns: list[Coords], rhs: Coords, floor: int) -> Coords:
    """x with sum_c x_c * columns[c] = rhs over F_inf, by Cramer's rule."""
    alg = field.algebra
    n = len(columns)
    matrix = [[columns[c][r] for c in range(n)] for r in range(n)]
    det = laurent_det(alg, matrix, floor)
    if det.is_zero:
        raise InvertZero("Columns are linearly dependent to the working precision")
    out = []
    for i in range(n):
        minor = [[rhs[r] if c == i else columns[c][r] for c in range(n)] for r in range(n)]
        d_i = laurent_det(alg, minor, floor)
        if d_i.is_zero and d_i.is_exact:
            out.append(LaurentSeries.zero(alg))
            continue
        inverse = det.inverse(floor - int(d_i.effective_top))
        out.append((d_i * inverse).truncate(floor))
    return out


def group_series(ring: GroupRing, coords: Coords) -> LaurentSeries:
    """sum_g x_g * g in F_inf[G] from one scalar series per group element."""
    alg = ring.algebra
    floors = [c.floor for c in coords if c.floor is not None]
    floor = max(floors) if floors else None
    nonzero = [c for c in coords if not c.is_zero]
    if not nonzero:
        return LaurentSeries.zero(alg, floor)
    lo = min(c.low for c in nonzero)
    if floor is not None:
        lo = max(lo, floor)
    hi = max(c.top for c in nonzero)
    if hi < lo:
        return LaurentSeries.zero(alg, floor)
    arr = np.stack([c.window(lo, hi)[:, 0] for c in coords], axis=1)
    return LaurentSeries(alg, arr, lo, floor)


def _working_floor(*vectors: Coords) -> int:
    floors = [c.floor for v in vectors for c in v if c.floor is not None]
    return max(floors) if floors else -constants.SessionDefaults.precision


@dataclass
class EnlargedLattice:
    """
    M^1 = A[G]w containing U(E/M), and M^2 = M^1/U + H(E/M) split by a section of M^2 -> H.

    `section_values[c]` is s(b_c) in K_inf/M for the c-th F_q-basis vector of H.
    """
    generator: Coords
    units: UnitLattice
    quotient: FiniteAGModule
    exponent: FqPoly
    m2: FiniteAGModule
    m2_class: CharClass
    section: str
    section_values: list[Coords] = dc_field(default_factory=list, repr=False)
    checks: dict = dc_field(default_factory=dict)

    @property
    def m1_over_u_dim(self) -> int:
        return self.quotient.dim

    def to_report(self) -> dict:
        return {"generator": [c.terms() for c in self.generator], "section": self.section,
                "exponent": [int(c) for c in self.exponent.coeffs], "m1_over_u_dim": self.m1_over_u_dim,
                "m2_dim": self.m2.dim, "m2_class": self.m2_class.to_report(), "checks": self.checks}


def _vanishes(x: Coords) -> bool:
    return all(c.is_zero for c in x)


def _orbit(units: UnitLattice, w: Coords) -> list[Coords]:
    image = units.image
    S = image.lattice.constant_actions
    return [coordinate_map(image.field, S[g], w) for g in range(image.ring.order)]


def _combine(alg, values: list[Coords], coefficients) -> Coords:
    """sum_r c_r * values[r] for F_q scalars c_r."""
    out = [LaurentSeries.zero(alg) for _ in values[0]]
    for v, c in zip(values, coefficients):
        if c:
            out = [a + x.scale(alg.scalar(int(c))) for a, x in zip(out, v)]
    return out


def _polynomial_coordinates(field, columns: list[Coords], x: Coords, floor: int) -> list[FqPoly]:
    coords = solve_laurent(field, columns, x, floor)
    if any(not c.fractional_part().is_zero for c in coords):
        raise NotPolynomialWithinPrecision(f"Coordinates have a fractional part above t^{floor}")
    return [c.to_poly() for c in coords]


def _equivariant_on_generator(units: UnitLattice, w: Coords) -> bool:
    """exp(g*w) = g*exp(w) for every g, to the floor of w."""
    image = units.image
    S = image.lattice.constant_actions
    floor = _working_floor(w)
    base = image.exp(w, floor)
    for g in range(image.ring.order):
        moved = image.exp(coordinate_map(image.field, S[g], w), floor)
        expected = coordinate_map(image.field, S[g], base)
        if not all(a.agrees_to(b, floor) for a, b in zip(moved, expected)):
            return False
    return True


def _regular_actions(ring: GroupRing) -> list[list[list[FqPoly]]]:
    """h*(g*w) = (hg)*w on the basis g*w of A[G]w."""
    zero, one = FqPoly(ring.field), FqPoly.constant(ring.field, 1)
    n = ring.order
    return [[[one if ring.group.mul(h, c) == i else zero for c in range(n)] for i in range(n)] for h in range(n)]


def _enlarge(units: UnitLattice, u: Coords) -> tuple[Coords, FqPoly, FiniteAGModule]:
    """
    w = u / f for the exponent f of U/A[G]u, and M^1/U for M^1 = A[G]w.

    f*U lies in A[G]u, so U lies in A[G]w; M^1/U is A^|G| modulo the coordinates
    of the reduced U-basis in the basis g*w.
    """
    image = units.image
    f, ring = image.field, image.ring
    floor = _working_floor(u, *units.basis)
    relations = [_polynomial_coordinates(f, units.basis, gu, floor) for gu in _orbit(units, u)]
    exponent = smith_invariants(relations, f, image.rank).factors[-1].monic()
    inverse = LaurentSeries.from_poly(exponent, f.algebra).inverse(floor)
    w = [c * inverse for c in u]
    W = _orbit(units, w)
    coords = [_polynomial_coordinates(f, W, b, _working_floor(w, b)) for b in units.basis]
    columns = [[coords[j][g] for j in range(image.rank)] for g in range(ring.order)]
    labels = [f"{label}*w" for label in ring.group.labels]
    quotient = polynomial_quotient(ring, columns, _regular_actions(ring), labels, f"M^1/exp^-1({image.lattice.name})")
    logger.info(f"M^1 = A[G]u/({exponent!r}) over exp^-1({image.lattice.name}): dim M^1/U = {quotient.dim}")
    return w, exponent, quotient


def _raw_section(units: UnitLattice, H: ClassModule) -> list[Coords]:
    """
    s(b_c) = x_c - exp(y_c) with phi(t)s(b_c) = sum_r T_rc s(b_r) mod M.

    x_c = t^-j mu_l represents b_c. phi(t)x_c - sum_r T_rc x_r is exp(z_c) mod M,
    and y solves t*y_c - sum_r T_rc y_r = z_c coordinatewise over F_inf.
    """
    image = units.image
    f = image.field
    alg = f.algebra
    T = H.module.t_action
    d = H.dim
    t = FqPoly.t(f)
    k = image.level
    ev = image.ev_matrix(k)
    reps = [image.unit(l, -j) for l, j in (H.representative(c) for c in range(d))]
    z = []
    for c in range(d):
        target = fractional([a - b for a, b in zip(image.exp.phi(t, reps[c]), _combine(alg, reps, T[:, c]))])
        y = linalg.solve(f, ev, image.vector(target))
        if y is None:
            raise PrecisionExhausted(f"t*b_{c} - T b_{c} is outside the exp image of {H.lattice_name} at level {k}")
        rest = fractional([a - b for a, b in zip(target, image.exp_mod_lattice(y, k))])
        z.append([a + b for a, b in zip(image.from_window(y, k), image.log_on_ball(rest))])
    floor = _working_floor(*z)
    columns = []
    for c2 in range(d):
        column = []
        for c in range(d):
            terms = {1: 1} if c2 == c else {}
            if T[c2, c]:
                terms[0] = int(f.neg(T[c2, c]))
            column.append(LaurentSeries.from_scalars(alg, terms))
        columns.append(column)
    y = [[None] * image.rank for _ in range(d)]
    for l in range(image.rank):
        solution = solve_laurent(f, columns, [z[c][l] for c in range(d)], floor)
        for c in range(d):
            y[c][l] = solution[c]
    return [fractional([a - b for a, b in zip(reps[c], image.exp(y[c], floor))]) for c in range(d)]


def _average(units: UnitLattice, H: ClassModule, values: list[Coords]) -> list[Coords]:
    """s'(b) = |G|^-1 sum_g g*s(g^-1*b)."""
    image = units.image
    f, ring = image.field, image.ring
    alg = f.algebra
    S = image.lattice.constant_actions
    S_H = H.module.g_action
    scale = alg.scalar(int(f.inv(f.element(ring.order))))
    out = []
    for c in range(H.dim):
        total = [LaurentSeries.zero(alg) for _ in range(image.rank)]
        for g in range(ring.order):
            moved = _combine(alg, values, S_H[int(ring.group.inverse[g])][:, c])
            total = [a + b for a, b in zip(total, coordinate_map(f, S[g], moved))]
        out.append(fractional([x.scale(scale) for x in total]))
    return out


def _section_checks(units: UnitLattice, H: ClassModule, values: list[Coords]) -> dict:
    """pi o s = id, s is t-linear and s is G-equivariant, all modulo M."""
    image = units.image
    f = image.field
    alg = f.algebra
    S = image.lattice.constant_actions
    T, S_H = H.module.t_action, H.module.g_action
    t = FqPoly.t(f)
    eye = np.eye(H.dim, dtype=np.int64)
    splits = all(np.array_equal(H.coordinates(image.vector(v)), eye[:, c]) for c, v in enumerate(values))
    t_linear = all(_vanishes(fractional([a - b for a, b in zip(image.exp.phi(t, v), _combine(alg, values, T[:, c]))]))
                   for c, v in enumerate(values))
    equivariant = all(
        _vanishes(fractional([a - b for a, b in zip(coordinate_map(f, S[g], v), _combine(alg, values, S_H[g][:, c]))]))
        for g in range(image.ring.order) for c, v in enumerate(values))
    return {"splits": bool(splits), "t_linear": bool(t_linear), "equivariant": bool(equivariant)}


def _diagram_checks(units: UnitLattice, H: ClassModule, w: Coords, exponent: FqPoly) -> dict:
    """exp(M^1) maps to 0 in H, and exp(f*w) lies in M."""
    image = units.image
    floor = _working_floor(w)
    to_h = all(not H.coordinates(image.vector(fractional(image.exp(gw, floor)))).any() for gw in _orbit(units, w))
    scaled = [c * LaurentSeries.from_poly(exponent, image.field.algebra) for c in w]
    killed = _vanishes(fractional(image.exp(scaled, _working_floor(scaled))))
    return {"exp_m1_in_kernel": bool(to_h), "exponent_kills": bool(killed)}


def enlarge_lattice(units: UnitLattice, H: ClassModule, decomposition: DecompositionData | None = None,
                    seed: int = constants.DEFAULT_SEED, sublattice: Coords | None = None) -> EnlargedLattice:
    """
    M^1 = f^-1 A[G]u for some u in U(E/M) with A[G]u of finite index, f the exponent of U/A[G]u.

    u is an A[G]-generator of U when one exists, so that M^1 = U. Otherwise, or
    when `sublattice` is given, u spans a free sublattice and M^1/U is nonzero.
    A section of M^2 -> H exists when H = 0, when G is trivial, or by averaging
    over G when the characteristic does not divide |G|.
    """
    image = units.image
    ring, f = image.ring, image.field
    name = image.lattice.name
    if H.is_zero:
        section = "vacuous"
    elif ring.order == 1:
        section = "trivial-group"
    elif ring.order % f.char:
        section = "averaged"
    else:
        raise NoSectionAvailable(f"H({H.lattice_name}) is nonzero and l = {f.char} divides |G| = {ring.order}")
    if image.lattice.constant_actions is None or image.rank != ring.order:
        raise NoSectionAvailable(f"exp^-1({name}) has no free A[G]-sublattice of full rank on constant actions")
    w = None
    if sublattice is None:
        try:
            w = free_generator(units, seed)
        except UNotFree as e:
            logger.warning(f"Cannot take M^1 = U, enlarging a free sublattice instead: {e}")
            try:
                sublattice = sublattice_generator(units, seed)
            except UNotFree as e2:
                raise NoSectionAvailable(f"exp^-1({name}) contains no free A[G]-sublattice") from e2
    elif span_degree(units, sublattice) is None:
        raise NoSectionAvailable(f"The given element does not span a free A[G]-sublattice of exp^-1({name})")
    if w is not None:
        exponent = FqPoly.constant(f, 1)
        quotient = FiniteAGModule(ring, np.zeros((0, 0), dtype=np.int64), name=f"M^1/exp^-1({name})")
    else:
        try:
            w, exponent, quotient = _enlarge(units, sublattice)
        except (PrecisionExhausted, NotPolynomialWithinPrecision, InvertZero) as e:
            raise NoSectionAvailable(f"Cannot enlarge a free sublattice of exp^-1({name}): {e}") from e
    checks = {"generator": span_degree(units, w) == units.covolume_degree - quotient.dim,
              "g_equivariance": _equivariant_on_generator(units, w)}
    try:
        checks.update(_diagram_checks(units, H, w, exponent))
    except PrecisionExhausted as e:
        checks["diagram"] = False
        checks["diagram_error"] = str(e)
    values: list[Coords] = []
    if not H.is_zero:
        try:
            values = _raw_section(units, H)
            if section == "averaged":
                values = _average(units, H, values)
            checks.update(_section_checks(units, H, values))
        except (PrecisionExhausted, DivergenceSuspected, InvertZero) as e:
            logger.error(f"No section of M^2 -> H({H.lattice_name}): {e}")
            checks["section"] = False
            checks["section_error"] = str(e)
    failed = [key for key, value in checks.items() if value is False]
    if failed:
        logger.warning(f"Enlarged lattice over exp^-1({name}) fails checks {failed}")
    if quotient.dim == 0:
        m2, m2_class = H.module, H.char_class(decomposition, seed)
    else:
        m2 = quotient if H.is_zero else quotient.direct_sum(H.module)
        m2_class = char_class(m2, decomposition, seed=seed)
    return EnlargedLattice(w, units, quotient, exponent, m2, m2_class, section, values, checks)


def constant_generator(lattice: Lattice, seed: int = constants.DEFAULT_SEED) -> np.ndarray | None:
    """An F_q[G]-generator of the F_q-span of the lattice basis, when G acts on it by constant matrices."""
    S = lattice.constant_actions
    if S is None:
        return None
    n = lattice.rank
    module = FiniteAGModule(lattice.ring, np.zeros((n, n), dtype=np.int64), S, name=f"F_q-span of {lattice.name}")
    try:
        return ct_free_basis(module, seed=seed).generators[0]
    except NotFree:
        return None


@dataclass
class ReferenceLattice:
    name: str
    generator: Coords
    quotient_class: CharClass | None = None


def reference_lattice(lattice: Lattice, floor: int, decomposition: DecompositionData | None = None,
                      seed: int = constants.DEFAULT_SEED) -> ReferenceLattice:
    """M itself when it is free on a constant generator, otherwise O_K with c_G(O_K/M)."""
    alg = lattice.field.algebra
    v = constant_generator(lattice, seed)
    if v is not None:
        return ReferenceLattice(lattice.name, [LaurentSeries.from_scalars(alg, {0: int(c)}) for c in v])
    integral = lattice.cover.integral
    v = constant_generator(integral, seed) if integral is not lattice else None
    if v is None:
        raise NotFreeLattice(f"Neither {lattice.name} nor O_K is A[G]-free on a constant generator")
    f = lattice.field
    element = integral.element([RationalFunction.constant(f, int(c)) for c in v])
    coords = [x.to_laurent(floor) for x in lattice.coordinates(element)]
    quotient = lattice_quotient(integral, integral.sub_coordinates(lattice), name=f"O_K/{lattice.name}")
    return ReferenceLattice(integral.name, coords, char_class(quotient, decomposition, seed=seed))


@dataclass
class VolumeClass:
    value: LaurentSeries
    xi: LaurentSeries
    m2_class: CharClass
    reference: str
    reference_class: CharClass | None = None

    @property
    def floor(self) -> int:
        return self.value.floor

    @property
    def low_confidence(self) -> bool:
        return self.floor is not None and self.floor > constants.LOW_CONFIDENCE_FLOOR

    def to_report(self) -> dict:
        return {"value": self.value.terms(), "floor": self.floor, "xi": self.xi.terms(),
                "m2_class": self.m2_class.to_report(), "reference": self.reference,
                "reference_class": None if self.reference_class is None else self.reference_class.to_report(),
                "low_confidence": self.low_confidence}


def _reduced_norm(ring: GroupRing, x: LaurentSeries, decomposition: DecompositionData | None) -> LaurentSeries:
    if ring.is_abelian:
        return x
    D = decomposition or DecompositionData.for_ring(ring)
    return D.nrd_laurent([[x]], x.floor)


def regulator_class(enlarged: EnlargedLattice, lattice: Lattice, decomposition: DecompositionData | None = None,
                    seed: int = constants.DEFAULT_SEED) -> VolumeClass:
    """Monic representative of Nrd(xi) * c_G(M^2) * c_G(N/M)^-1, where w = xi * v."""
    ring = lattice.ring
    f = lattice.field
    floor = _working_floor(enlarged.generator)
    reference = reference_lattice(lattice, floor, decomposition, seed)
    S = lattice.constant_actions
    V = [coordinate_map(f, S[g], reference.generator) for g in range(ring.order)]
    xi = group_series(ring, solve_laurent(f, V, enlarged.generator, floor))
    value = _reduced_norm(ring, xi, decomposition) * enlarged.m2_class.to_laurent(ring)
    if reference.quotient_class is not None:
        c = reference.quotient_class
        target = (floor if value.floor is None else value.floor) - c.degree
        value = value * central_inverse(c.to_laurent(ring), ring, target)
    value = monic_normalize(value, ring)
    logger.info(f"Volume class against {reference.name}: known to t^{value.floor}")
    return VolumeClass(value, xi, enlarged.m2_class, reference.name, reference.quotient_class)


def R_of_psi(generator: Coords, image: Coords, lattice: Lattice, floor: int | None = None,
             decomposition: DecompositionData | None = None) -> LaurentSeries:
    """
    Nrd of psi composed with lambda^-1, for psi: M^1 -> M given by psi(w) = image.

    psi(x w) = x rho w with image = rho w, so R(psi) = Nrd(rho).
    """
    ring = lattice.ring
    f = lattice.field
    if all(c.is_zero for c in image):
        return LaurentSeries.zero(ring.algebra)
    floor = _working_floor(generator, image) if floor is None else floor
    S = lattice.constant_actions
    W = [coordinate_map(f, S[g], generator) for g in range(ring.order)]
    rho = group_series(ring, solve_laurent(f, W, image, floor))
    return _reduced_norm(ring, rho, decomposition)
