"""
Checks of the equivariant class number formula and of the Fitting-ideal statements built on it.

Every verdict records the floor at which it was established; verdicts above
LOW_CONFIDENCE_FLOOR are flagged in the reports unless the truncation already
passes the degree bound of the element being tested.
"""
import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.covers.cover import Lattice
from equivcnf.covers.taming import TamingModule
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import HypothesisViolated, MismatchWithDiff, NotPolynomialWithinPrecision, PrecisionExhausted
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.groups.group_ring import GroupRing
from equivcnf.groups.ideals import CentralIdeal, annihilator_ideal
from equivcnf.invariants.class_module import class_module
from equivcnf.invariants.image import Coords
from equivcnf.invariants.pipeline import InvariantOptions, Invariants, compute_invariants
from equivcnf.invariants.regulator import R_of_psi
from equivcnf.lseries.stickelberger import stickelberger

logger = logging.getLogger(__name__)


def _low_confidence(floor: int | None) -> bool:
    return floor is not None and floor > constants.LOW_CONFIDENCE_FLOOR


@dataclass
class CNFReport:
    holds: bool
    floor: int
    invariants: Invariants
    first_difference: int | None = None

    @property
    def lhs(self) -> LaurentSeries:
        return self.invariants.theta.value

    @property
    def rhs(self) -> LaurentSeries:
        return self.invariants.regulator.value

    def to_report(self) -> dict:
        return {"holds": self.holds, "floor": self.floor, "first_difference": self.first_difference,
                "lhs": self.lhs.terms(), "rhs": self.rhs.terms(), "low_confidence": _low_confidence(self.floor),
                "certified": self.invariants.theta.certified, **self.invariants.to_report()}


def verify_cnf(E: DrinfeldModule, taming: TamingModule, N: int, decomposition: DecompositionData | None = None,
               options: InvariantOptions | None = None, strict: bool = True) -> CNFReport:
    """theta = monic(xi * c_G(M^2) * c_G(N/M)^-1) coefficientwise down to t^-N, for abelian G."""
    ring = taming.lattice.ring
    if not ring.is_abelian:
        raise HypothesisViolated(f"The class number formula is checked for abelian G only, got {ring.group.name}")
    invariants = compute_invariants(E, taming, N, decomposition, options)
    regulator = invariants.regulator
    if regulator.floor is not None and regulator.floor > -N:
        raise PrecisionExhausted(f"Volume class known only to t^{regulator.floor}, need t^-{N}")
    lhs = invariants.theta.value
    holds = lhs.agrees_to(regulator.value, -N)
    report = CNFReport(holds, -N, invariants, None if holds else lhs.first_difference(regulator.value))
    if holds:
        logger.info(f"Class number formula holds for {E.name} on {taming.lattice.name} to t^-{N}")
    else:
        logger.warning(f"Class number formula fails for {E.name} at t^{report.first_difference}")
        if strict:
            raise MismatchWithDiff(f"theta and the volume class differ at t^{report.first_difference}",
                                   diff={"first_difference": report.first_difference, "lhs": lhs.terms(),
                                         "rhs": regulator.value.terms()})
    return report


def polynomial_element(ring: GroupRing, x: LaurentSeries, label: str = "") -> np.ndarray:
    """x as an A[G] array, after checking its negative part vanishes as far as it is known."""
    if x.floor is not None and x.floor >= 0:
        raise NotPolynomialWithinPrecision(f"{label}: no coefficient below t^0 is known (floor t^{x.floor})")
    fractional = x.fractional_part()
    if not fractional.is_zero:
        raise NotPolynomialWithinPrecision(f"{label}: coefficient of t^{fractional.top} is nonzero "
                                           f"(known to t^{x.floor})")
    part = x.polynomial_part()
    if part.is_zero:
        return np.zeros((1, ring.order), dtype=np.int64)
    return part.window(0, part.top)


def hom_generators(lattice: Lattice) -> list[tuple[str, Coords]]:
    """psi: M^1 -> M on a free generator w of M^1, one for each basis vector of M, plus psi = 0."""
    alg = lattice.field.algebra
    out = [(f"w->{label}", [LaurentSeries.one(alg) if i == l else LaurentSeries.zero(alg)
                            for i in range(lattice.rank)]) for l, label in enumerate(lattice.labels)]
    out.append(("w->0", [LaurentSeries.zero(alg) for _ in range(lattice.rank)]))
    return out


@dataclass
class Membership:
    psi: str
    member: bool
    floor: int | None
    R_nonzero: bool
    element: list[list[int]] = dc_field(default_factory=list)
    degree_bound: int | None = None

    @property
    def exact(self) -> bool:
        """theta * R(psi) is known past its degree bound, so no unknown coefficient can change the verdict."""
        if self.degree_bound is None:
            return False
        return self.floor is None or -self.floor > self.degree_bound

    @property
    def low_confidence(self) -> bool:
        return _low_confidence(self.floor) and not self.exact

    def to_report(self) -> dict:
        return {"psi": self.psi, "member": self.member, "floor": self.floor, "R_nonzero": self.R_nonzero,
                "element": self.element, "degree_bound": self.degree_bound, "exact": self.exact,
                "low_confidence": self.low_confidence}


@dataclass
class FittingReport:
    holds: bool
    fitting: CentralIdeal
    memberships: list[Membership]
    chains: dict
    invariants: Invariants
    generated: CentralIdeal | None = None

    @property
    def low_confidence(self) -> bool:
        return any(m.low_confidence for m in self.memberships)

    @property
    def exact(self) -> bool:
        return bool(self.memberships) and all(m.exact for m in self.memberships)

    def to_report(self) -> dict:
        out = {"holds": self.holds, "fitting_ideal": self.fitting.to_report(),
               "memberships": [m.to_report() for m in self.memberships], "chains": self.chains,
               "R_nontrivial": any(m.R_nonzero for m in self.memberships),
               "low_confidence": self.low_confidence, "exact": self.exact,
               "class_module": self.invariants.H.to_report(),
               "theta": self.invariants.theta.to_report()}
        if self.generated is not None:
            out["generated_ideal"] = self.generated.to_report()
        return out


def degree_bound(invariants: Invariants) -> int:
    """
    deg theta * R(psi) <= deg c_G(M^2) = dim M^2 for psi mapping w into the basis of M.

    A truncation past this degree determines the polynomial.
    """
    return invariants.enlarged.m2.dim


def _theta_times_R(invariants: Invariants, lattice: Lattice, D: DecompositionData,
                   samples: list[tuple[str, Coords]]) -> list[tuple[str, np.ndarray, LaurentSeries, int | None]]:
    ring = lattice.ring
    theta = stickelberger(invariants.theta, D).value
    w = invariants.enlarged.generator
    out = []
    for label, p in samples:
        R = R_of_psi(w, p, lattice, decomposition=D)
        x = theta * R
        out.append((label, polynomial_element(ring, x, label), R, x.floor))
    return out


def integral_fitting_chain(E: DrinfeldModule, taming: TamingModule, fitting: CentralIdeal,
                           decomposition: DecompositionData, options: InvariantOptions) -> bool | str:
    """Fit(H(E/M)) <= Fit(H(E/O_K)), or "skipped" when G does not act on O_K by constant matrices."""
    integral = taming.lattice.cover.integral
    if taming.is_integral_closure:
        return True
    if integral.constant_actions is None:
        logger.info(f"G does not act on {integral.name} by constant matrices; Fit(H(E/O_K)) is not compared")
        return "skipped"
    H_O = class_module(E, integral, budget=options.budget, extra_ball=options.extra_ball,
                       confirmation_steps=options.confirmation_steps)
    return fitting <= H_O.fitting_ideal(decomposition, options.seed)


def mtII_check(E: DrinfeldModule, taming: TamingModule, N: int, decomposition: DecompositionData | None = None,
               options: InvariantOptions | None = None, samples: list[tuple[str, Coords]] | None = None
               ) -> FittingReport:
    """
    theta * R(psi) lies in Fit_{A[G]}(H(E/M)) for psi over generators of Hom(M^1, M).

    Also checks Fit(H(E/M)) <= Ann(H(E/M)) and, for M inside O_K,
    Fit(H(E/M)) <= Fit(H(E/O_K)).
    """
    lattice = taming.lattice
    ring = lattice.ring
    f = lattice.field
    options = options or InvariantOptions.from_defaults()
    if ring.group.commutator_order % f.char == 0:
        raise HypothesisViolated(f"l = {f.char} divides |G'| = {ring.group.commutator_order}")
    D = decomposition or DecompositionData.for_ring(ring)
    invariants = compute_invariants(E, taming, N, D, options, with_regulator=False)
    fitting = invariants.H.fitting_ideal(D, options.seed)
    bound = degree_bound(invariants)
    memberships = []
    for label, element, R, floor in _theta_times_R(invariants, lattice, D, samples or hom_generators(lattice)):
        member = fitting.contains(element)
        memberships.append(Membership(label, member, floor, not R.is_zero, element.tolist(), bound))
        if not member:
            logger.warning(f"theta*R({label}) is not in Fit(H) (known to t^{floor})")
    chains = {"fitting_in_annihilator": fitting <= annihilator_ideal(ring, invariants.H.module)}
    chains["fitting_in_integral_fitting"] = integral_fitting_chain(E, taming, fitting, D, options)
    holds = all(m.member for m in memberships) and all(v for v in chains.values() if v != "skipped")
    return FittingReport(holds, fitting, memberships, chains, invariants)


def mtIII_check(E: DrinfeldModule, taming: TamingModule, N: int, decomposition: DecompositionData | None = None,
                options: InvariantOptions | None = None) -> FittingReport:
    """The ideal generated by theta * R(psi) equals Fit_{A[G]}(H(E/O_K)) when l does not divide |G|."""
    lattice = taming.lattice
    ring = lattice.ring
    f = lattice.field
    options = options or InvariantOptions.from_defaults()
    if ring.order % f.char == 0:
        raise HypothesisViolated(f"l = {f.char} divides |G| = {ring.order}")
    if not taming.is_integral_closure:
        raise HypothesisViolated(f"{lattice.name} is not O_K; the equality needs the integral closure")
    D = decomposition or DecompositionData.for_ring(ring)
    invariants = compute_invariants(E, taming, N, D, options, with_regulator=False, require_free_units=True)
    fitting = invariants.H.fitting_ideal(D, options.seed)
    products = _theta_times_R(invariants, lattice, D, hom_generators(lattice))
    generated = CentralIdeal.from_elements(ring, [element for _, element, _, _ in products])
    bound = degree_bound(invariants)
    memberships = [Membership(label, fitting.contains(element), floor, not R.is_zero, element.tolist(), bound)
                   for label, element, R, floor in products]
    equal = generated == fitting
    if not equal:
        logger.warning(f"Ideal of theta*R(psi) differs from Fit(H(E/O_K)): {generated} vs {fitting}")
    return FittingReport(equal, fitting, memberships, {"equal": equal}, invariants, generated)
