import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from equivcnf import constants
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly, enumerate_monic_irreducibles
from equivcnf.covers.primes import residue_module
from equivcnf.covers.taming import TamingModule
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import ConfigError
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.lseries.charclass import CharClass, char_class
from equivcnf.lseries.monic import central_inverse, monic_normalize

logger = logging.getLogger(__name__)


@dataclass
class EulerFactor:
    """c_G(M/pM) * c_G(E(M/pM))^-1 with both exact classes and the expansion to `floor`."""
    p: FqPoly
    numerator: CharClass
    denominator: CharClass
    series: LaurentSeries
    floor: int

    def expand(self, ring, floor: int) -> LaurentSeries:
        """Re-expand from the cached exact classes at another precision."""
        num = self.numerator.to_laurent(ring)
        den = self.denominator.to_laurent(ring)
        return (num * central_inverse(den, ring, floor - self.numerator.degree)).truncate(floor)

    def to_report(self) -> dict:
        return {"p": list(self.p.coeffs), "numerator": self.numerator.coefficients.tolist(),
                "denominator": self.denominator.coefficients.tolist(), "floor": self.floor}


def euler_factor(E: DrinfeldModule, taming: TamingModule, p: FqPoly, floor: int,
                 decomposition: DecompositionData | None = None, seed: int = constants.DEFAULT_SEED) -> EulerFactor:
    cover = taming.lattice.cover
    D = decomposition or DecompositionData.for_ring(cover.ring)
    module = residue_module(cover, p, taming.lattice).residue
    numerator = char_class(module, D, seed=seed)
    denominator = char_class(E.e_module(module), D, seed=seed)
    factor = EulerFactor(p, numerator, denominator, LaurentSeries.zero(cover.ring.algebra), floor)
    factor.series = factor.expand(cover.ring, floor)
    logger.debug(f"Euler factor at {p!r}: {factor.series!r}")
    return factor


def prime_cutoff(N: int, rank: int) -> int:
    """Primes of degree above N*r + 1 contribute 1 modulo t^-(N+1)."""
    return N * rank + 1


@dataclass
class LValueTrunc:
    value: LaurentSeries
    floor: int
    prime_bound: int
    certified: bool
    factors: list[EulerFactor] = dc_field(default_factory=list)

    def agrees_with(self, other: LaurentSeries) -> bool:
        return self.value.agrees_to(other, self.floor)

    def to_report(self) -> dict:
        return {"value": self.value.terms(), "floor": self.floor, "prime_bound": self.prime_bound,
                "certified": self.certified, "primes": [list(f.p.coeffs) for f in self.factors],
                "factors": [f.to_report() for f in self.factors]}


def theta_truncated(E: DrinfeldModule, taming: TamingModule, N: int,
                    decomposition: DecompositionData | None = None, prime_bound_override: int | None = None,
                    threads: int = 1, seed: int = constants.DEFAULT_SEED) -> LValueTrunc:
    """
    The equivariant L-value as the product of Euler factors over deg p <= N*r + 1, to t^-N.

    For a non-abelian G the factors and the product are reduced norms.
    """
    if N < 1:
        raise ConfigError(f"Truncated L-values need precision N >= 1, got {N}")
    cover = taming.lattice.cover
    ring = cover.ring
    D = decomposition or DecompositionData.for_ring(ring)
    bound = prime_cutoff(N, E.rank)
    certified = prime_bound_override is None
    if not certified:
        logger.warning(f"Prime cutoff overridden to {prime_bound_override} (certified bound {bound}); "
                       f"the L-value is not certified")
        bound = prime_bound_override
    primes = enumerate_monic_irreducibles(cover.field, bound)
    logger.info(f"Computing {len(primes)} Euler factors up to degree {bound} for {cover.name}")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        factors = list(pool.map(lambda p: euler_factor(E, taming, p, -N, D, seed=seed), primes))
    value = LaurentSeries.one(ring.algebra)
    for f in factors:
        value = (value * f.series).truncate(-N)
    value = monic_normalize(value, ring)
    return LValueTrunc(value=value, floor=-N, prime_bound=bound, certified=certified, factors=factors)
