import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra import linalg
from equivcnf.algebra.normal_forms import InvariantFactors, smith_invariants
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.cover import Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.drinfeld.exponential import isometry_ball
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import NotFree, StabilizationBudgetExceeded
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.groups.freeness import ct_free_basis, tate_certificate
from equivcnf.groups.ideals import CentralIdeal, fitting_ideal
from equivcnf.invariants.image import ExponentialImage, image_rank
from equivcnf.lseries.charclass import CharClass, char_class

logger = logging.getLogger(__name__)

PRESENTATION_CROSSCHECK_DIM = 4


def exponential_image(E: DrinfeldModule, lattice: Lattice, ball: int | None = None,
                      precision: int = constants.SessionDefaults.precision,
                      budget: int = constants.SessionDefaults.ball_budget,
                      extra_ball: int = constants.SessionDefaults.extra_ball) -> ExponentialImage:
    """The exp image engine on a ball one past the isometry ball (plus `extra_ball`)."""
    if ball is None:
        ball = isometry_ball(E, lattice, budget) + 1 + extra_ball
    logger.debug(f"Exponential image of {E.name} on {lattice.name}: ball t^-{ball}, precision {precision}")
    return ExponentialImage(E, lattice, ball, precision, budget)


@dataclass
class ClassModule:
    """H(E/M) = K_inf/(M + exp_E(K_inf)) on an F_q-basis of V_fin modulo the exp image."""
    module: FiniteAGModule
    invariants: InvariantFactors
    ball: int
    stabilized_at: int
    image_dim: int
    quotient_dim: int
    lattice_name: str
    certificate: dict = dc_field(default_factory=dict)
    reduced: np.ndarray | None = dc_field(default=None, repr=False)
    pivots: list[int] = dc_field(default_factory=list, repr=False)
    free: list[int] = dc_field(default_factory=list, repr=False)
    width: int = 0

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def is_zero(self) -> bool:
        return self.module.dim == 0

    @property
    def order_degree(self) -> int:
        """|H| = q^order_degree."""
        return sum(f.degree for f in self.invariants.nontrivial)

    @property
    def cohomologically_trivial(self) -> bool:
        return not self.certificate

    def coordinates(self, vector) -> np.ndarray:
        """The image in H of a vector of V_fin."""
        f = self.module.field
        v = np.asarray(vector, dtype=np.int64)
        if self.reduced is not None and len(self.pivots):
            v = linalg.reduce_against(f, self.reduced, self.pivots, v)
        return v[self.free]

    def representative(self, i: int) -> tuple[int, int]:
        """(l, j) such that the i-th basis vector of H is the class of t^-j mu_l."""
        c = self.free[i]
        return c // self.width, c % self.width + 1

    def char_class(self, decomposition: DecompositionData | None = None,
                   seed: int = constants.DEFAULT_SEED) -> CharClass:
        ring = self.module.ring
        if self.is_zero:
            return CharClass(ring.algebra.one[None, :], 0)
        return char_class(self.module, decomposition, seed=seed)

    def fitting_ideal(self, decomposition: DecompositionData | None = None,
                      seed: int = constants.DEFAULT_SEED) -> CentralIdeal:
        """Fit_{A[G]}(H), from t*I - T in a free basis when there is one."""
        ring = self.module.ring
        if self.is_zero:
            return CentralIdeal.unit(ring)
        D = decomposition or DecompositionData.for_ring(ring)
        D = None if D.is_trivial else D
        try:
            basis = ct_free_basis(self.module, seed=seed)
        except NotFree:
            return self.presentation_fitting(D)
        T = basis.endomorphism_matrix(self.module, self.module.t_action)
        r = basis.rank
        P = np.zeros((r, r, 2, ring.order), dtype=np.int64)
        P[:, :, 0, :] = self.module.field.neg(T)
        for s in range(r):
            P[s, s, 1, 0] = 1
        ideal = fitting_ideal(ring, P, D)
        if self.dim <= PRESENTATION_CROSSCHECK_DIM * ring.order:
            other = self.presentation_fitting(D)
            if other != ideal:
                logger.warning(f"Fitting ideals of {self.module.name} disagree between presentations")
        return ideal

    def presentation_fitting(self, decomposition: DecompositionData | None = None) -> CentralIdeal:
        return fitting_ideal(self.module.ring, self.module.presentation(), decomposition)

    def to_report(self) -> dict:
        return {"lattice": self.lattice_name, "dim": self.dim, "order": f"q^{self.order_degree}",
                "invariant_factors": self.invariants.to_report(), "ball": self.ball,
                "stabilized_at": self.stabilized_at, "image_dim": self.image_dim,
                "window_dim": self.quotient_dim, "cohomologically_trivial": self.cohomologically_trivial,
                "tate_certificate": self.certificate}


def stabilize(image: ExponentialImage, confirmation_steps: int = constants.SessionDefaults.confirmation_steps) -> int:
    """
    First level k at which the exp image in V_fin stops growing.

    phi_E(t) maps the ball into exp of the next smaller ball, so one repeated
    rank already proves stability; `confirmation_steps` more are checked anyway.
    """
    k = image.start
    previous = image_rank(image, k)
    stable = 0
    while stable <= confirmation_steps:
        k += 1
        if k > image.budget:
            raise StabilizationBudgetExceeded(
                f"exp image on {image.lattice.name} still growing at level {k - 1} (budget {image.budget})")
        current = image_rank(image, k)
        stable = stable + 1 if current == previous else 0
        previous = current
    return k - confirmation_steps - 1


def class_module(E: DrinfeldModule, lattice: Lattice, ball: int | None = None,
                 budget: int = constants.SessionDefaults.ball_budget,
                 extra_ball: int = constants.SessionDefaults.extra_ball,
                 confirmation_steps: int = constants.SessionDefaults.confirmation_steps,
                 image: ExponentialImage | None = None) -> ClassModule:
    """
    The class module H(E/M) with its t- and G-actions.

    H is the cokernel of exp on the window V_fin; its basis is the set of
    non-pivot coordinates of the rref of the stabilized image.
    """
    image = image or exponential_image(E, lattice, ball, budget=budget, extra_ball=extra_ball)
    f = image.field
    ring = image.ring
    Q = image.quotient
    k = stabilize(image, confirmation_steps)
    span = image.ev_matrix(image.level)
    if span.shape[1]:
        reduced, pivots = linalg.rref(f, span.T)
        reduced = reduced[:len(pivots)]
    else:
        reduced, pivots = np.zeros((0, Q.dim), dtype=np.int64), []
    free = [c for c in range(Q.dim) if c not in pivots]
    T_V = image.t_action()
    S_V = Q.g_action()

    def project(matrix):
        cols = [linalg.reduce_against(f, reduced, pivots, matrix[:, c])[free] for c in free]
        return np.stack(cols, axis=1) if cols else np.zeros((0, 0), dtype=np.int64)

    T_H = project(T_V)
    S_H = np.stack([project(S_V[g]) for g in range(ring.order)]) if free else \
        np.zeros((ring.order, 0, 0), dtype=np.int64)
    labels = [f"t^-{c % Q.width + 1}*{lattice.labels[c // Q.width]}" for c in free]
    module = FiniteAGModule(ring, T_H, S_H, labels=labels, name=f"H({E.name}/{lattice.name})")
    d = module.dim
    relations = [[FqPoly.t(f) * int(r == c) - int(T_H[r, c]) for r in range(d)] for c in range(d)]
    invariants = smith_invariants(relations, f, d) if d else InvariantFactors(())
    certificate = tate_certificate(module) if d else {}
    logger.info(f"H({E.name}/{lattice.name}): dim {d} over F_q, stable from level {k}, "
                f"invariant factors {[repr(p) for p in invariants.nontrivial]}")
    return ClassModule(module, invariants, image.ball, k, len(pivots), Q.dim, lattice.name, certificate,
                       reduced, list(pivots), free, Q.width)
