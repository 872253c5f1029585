import logging
from dataclasses import dataclass, field as dc_field

from equivcnf import constants
from equivcnf.algebra.normal_forms import smith_invariants
from equivcnf.algebra.poly import FqPoly, enumerate_monic_irreducibles
from equivcnf.covers.cover import GaloisCover, Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.covers.primes import lattice_quotient, prime_divisors, residue_module, wild_primes
from equivcnf.errors import ConfigError, InvalidTamingBasis, NotFree, WildWithoutBasis
from equivcnf.groups.freeness import ct_free_basis

logger = logging.getLogger(__name__)


@dataclass
class TamingModule:
    lattice: Lattice
    wild_primes: list[FqPoly]
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def is_integral_closure(self) -> bool:
        return self.lattice is self.lattice.cover.integral

    def quotient(self) -> FiniteAGModule:
        """O_K / M as a finite A[G]-module."""
        cover = self.lattice.cover
        return lattice_quotient(cover.integral, cover.integral.sub_coordinates(self.lattice),
                                name=f"O_K/{self.lattice.name}")

    def to_report(self) -> dict:
        return {"lattice": self.lattice.name, "wild_primes": [list(p.coeffs) for p in self.wild_primes],
                "witnesses": self.witnesses}


def taming_module(cover: GaloisCover, user_basis=None, degree_bound: int = 2,
                  seed: int = constants.DEFAULT_SEED) -> TamingModule:
    """
    A taming module for the cover.

    Tame covers get O_K. Wild covers need a basis, which is checked to be G- and
    tau-stable, of finite index in O_K supported only at wild primes, and to have
    F_q[G]-free reductions at every prime of degree <= degree_bound and every wild prime.
    """
    wild = wild_primes(cover, seed=seed)
    if not wild:
        if user_basis is not None:
            logger.warning(f"{cover.name} is tame; ignoring the supplied taming basis and using O_K")
        return TamingModule(cover.integral, [])
    if user_basis is None:
        raise WildWithoutBasis(f"{cover.name} is wild at {[repr(p) for p in wild]} and no taming basis was given")
    try:
        lattice = cover.lattice(user_basis, name="M")
    except ConfigError as e:
        logger.error(f"Taming basis rejected: {e}")
        raise InvalidTamingBasis(f"Invalid taming basis for {cover.name}", reason=str(e)) from e
    columns = cover.integral.sub_coordinates(lattice)
    if columns is None:
        raise InvalidTamingBasis(f"Taming basis for {cover.name} is not contained in O_K", reason="not contained in O_K")
    invariants = smith_invariants([[columns[i][j] for i in range(lattice.rank)] for j in range(lattice.rank)],
                                  cover.field)
    if not invariants.is_finite:
        raise InvalidTamingBasis("O_K/M is not finite", reason="infinite quotient")
    support = {p for f in invariants.nontrivial for p in prime_divisors(f)}
    stray = [p for p in support if p not in wild]
    if stray:
        raise InvalidTamingBasis(f"O_K/M is supported at non-wild primes {[repr(p) for p in stray]}",
                                 reason="support")
    primes = list(enumerate_monic_irreducibles(cover.field, degree_bound)) + [p for p in wild if p.degree > degree_bound]
    witnesses = {}
    for p in primes:
        data = residue_module(cover, p, lattice)
        try:
            witnesses[repr(p)] = ct_free_basis(data.residue, seed=seed).to_report()
        except NotFree as e:
            logger.error(f"M/pM is not free at {p!r}: {e.certificate}")
            raise InvalidTamingBasis(f"M/pM is not F_q[G]-free at {p!r}", reason=f"not free at {p!r}") from e
    logger.info(f"Validated taming module for {cover.name}, wild primes {[repr(p) for p in wild]}")
    return TamingModule(lattice, wild, witnesses)
