import logging
from dataclasses import dataclass

from equivcnf import constants
from equivcnf.config import SessionConfig
from equivcnf.covers.taming import TamingModule
from equivcnf.drinfeld.exponential import isometry_ball
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.invariants.class_module import ClassModule, class_module, exponential_image
from equivcnf.invariants.regulator import EnlargedLattice, VolumeClass, enlarge_lattice, regulator_class
from equivcnf.invariants.units import UnitLattice, free_generator, unit_lattice
from equivcnf.lseries.euler import LValueTrunc, theta_truncated

logger = logging.getLogger(__name__)

PRECISION_RETRIES = 2


@dataclass
class InvariantOptions:
    """Budgets shared by every stage of the invariant pipeline"""
    ball: int | None = None
    budget: int = constants.SessionDefaults.ball_budget
    extra_ball: int = constants.SessionDefaults.extra_ball
    confirmation_steps: int = constants.SessionDefaults.confirmation_steps
    threads: int = constants.SessionDefaults.threads
    seed: int = constants.DEFAULT_SEED
    prime_bound_override: int | None = None

    @classmethod
    def from_defaults(cls) -> "InvariantOptions":
        return cls()

    @classmethod
    def from_config(cls, config: SessionConfig) -> "InvariantOptions":
        return cls(budget=config.ball_budget, extra_ball=config.extra_ball,
                   confirmation_steps=config.confirmation_steps, threads=config.threads, seed=config.seed,
                   prime_bound_override=config.prime_bound_override)


@dataclass
class Invariants:
    theta: LValueTrunc
    H: ClassModule
    units: UnitLattice
    enlarged: EnlargedLattice
    regulator: VolumeClass | None = None

    def to_report(self) -> dict:
        return {"theta": self.theta.to_report(), "class_module": self.H.to_report(),
                "units": self.units.to_report(), "enlarged": self.enlarged.to_report(),
                "regulator": None if self.regulator is None else self.regulator.to_report()}


def unit_precision(rank: int, N: int, ball: int) -> int:
    """Precision below the window that leaves t^-N after the volume class is normalized."""
    return N + rank * ball + 8


def compute_invariants(E: DrinfeldModule, taming: TamingModule, N: int,
                       decomposition: DecompositionData | None = None, options: InvariantOptions | None = None,
                       with_regulator: bool = True, require_free_units: bool = False) -> Invariants:
    """
    theta, H(E/M), U(E/M), M^1 and (optionally) the volume class, sharing one exp image.

    The unit lattice is recomputed at a higher precision when the normalized
    volume class falls short of t^-N.
    """
    options = options or InvariantOptions.from_defaults()
    lattice = taming.lattice
    D = decomposition or DecompositionData.for_ring(lattice.ring)
    theta = theta_truncated(E, taming, N, D, options.prime_bound_override, options.threads, options.seed)
    ball = options.ball or isometry_ball(E, lattice, options.budget) + 1 + options.extra_ball
    precision = unit_precision(lattice.rank, N, ball)
    H = None
    for attempt in range(PRECISION_RETRIES + 1):
        image = exponential_image(E, lattice, ball, precision, options.budget)
        H = H or class_module(E, lattice, image=image, confirmation_steps=options.confirmation_steps)
        units = unit_lattice(E, lattice, image=image)
        if require_free_units:
            free_generator(units, options.seed)
        enlarged = enlarge_lattice(units, H, D, options.seed)
        if not with_regulator:
            return Invariants(theta, H, units, enlarged)
        regulator = regulator_class(enlarged, lattice, D, options.seed)
        if regulator.floor is None or regulator.floor <= -N or attempt == PRECISION_RETRIES:
            return Invariants(theta, H, units, enlarged, regulator)
        precision += regulator.floor + N + 2
        logger.info(f"Volume class known only to t^{regulator.floor}; retrying units at precision {precision}")
