import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra.poly import FqPoly, enumerate_monic_irreducibles
from equivcnf.algebra.truncated import TruncatedRing, det_commutative
from equivcnf.covers.cover import Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.covers.primes import residue_module
from equivcnf.drinfeld.module import DrinfeldModule, twisted_action
from equivcnf.drinfeld.twisted import TwistedPoly
from equivcnf.errors import HypothesisUnverified, NotFree
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.groups.freeness import component_bases, ct_free_basis
from equivcnf.trace.nuclear import NuclearSeq, single_term
from equivcnf.trace.quotient import CompactQuotient, compact_quotient, nucleus_index
from equivcnf.trace.series import TruncGroupSeries

logger = logging.getLogger(__name__)


def operator_class(module: FiniteAGModule, operators: dict[int, np.ndarray], N: int,
                   decomposition: DecompositionData | None = None,
                   seed: int = constants.DEFAULT_SEED) -> TruncGroupSeries:
    """
    [1 + sum Z^j X_j] in F_q[G][Z]/Z^N for G-equivariant F_q matrices X_j on a finite module.

    The determinant is taken in an F_q[G]-basis (reduced norm for non-abelian G) or,
    for abelian G, componentwise over the primitive idempotents.
    """
    ring = module.ring
    alg = ring.algebra
    ctx = TruncatedRing(alg, N)
    if module.dim == 0:
        return TruncGroupSeries.one(ring, N)
    D = decomposition or DecompositionData.for_ring(ring)
    try:
        bases, free = [ct_free_basis(module, seed=seed)], True
    except NotFree:
        if not ring.is_abelian:
            raise
        bases, free = component_bases(module, seed=seed), False
    total = ctx.zeros()
    for basis in bases:
        r = basis.rank
        matrix = ctx.zeros((r, r))
        for s in range(r):
            matrix[s, s, 0] = basis.idempotent
        for j, X in operators.items():
            if 1 <= j < N:
                matrix[:, :, j] = alg.field.add(matrix[:, :, j], basis.endomorphism_matrix(module, X))
        if free:
            value = det_commutative(ctx, matrix) if D.is_trivial else D.nrd_truncated(matrix)
            return TruncGroupSeries(ring, value)
        total = alg.field.add(total, alg.mul(det_commutative(ctx, matrix), basis.idempotent))
    return TruncGroupSeries(ring, total)


def class_truncated(phi: NuclearSeq, quotient: CompactQuotient, N: int | None = None,
                    decomposition: DecompositionData | None = None,
                    seed: int = constants.DEFAULT_SEED) -> TruncGroupSeries:
    """[1 + Phi | K_inf/(M + U)] modulo Z^N on a verified nucleus."""
    N = N or phi.precision
    for j, term in enumerate(phi.terms, start=1):
        if j < N and not term.is_zero and not quotient.contracts(term):
            raise HypothesisUnverified(f"{quotient!r} is not a nucleus for phi_{j}")
    operators = {j: quotient.operator(term) for j, term in enumerate(phi.terms, start=1)
                 if j < N and not term.is_zero}
    return operator_class(quotient.module(), operators, N, decomposition, seed)


def euler_class_truncated(phi: NuclearSeq, lattice: Lattice, p: FqPoly, N: int | None = None,
                          decomposition: DecompositionData | None = None,
                          seed: int = constants.DEFAULT_SEED) -> TruncGroupSeries:
    """[1 + Phi | M/pM] modulo Z^N."""
    N = N or phi.precision
    module = residue_module(lattice.cover, p, lattice).residue
    operators = {j: twisted_action(term, module) for j, term in enumerate(phi.terms, start=1)
                 if j < N and not term.is_zero}
    return operator_class(module, operators, N, decomposition, seed)


def euler_class_factored(E: DrinfeldModule, lattice: Lattice, p: FqPoly, N: int,
                         decomposition: DecompositionData | None = None,
                         seed: int = constants.DEFAULT_SEED) -> TruncGroupSeries:
    """det(1 - Z phi_E(t)) * det(1 - Z t)^-1 on M/pM."""
    module = residue_module(lattice.cover, p, lattice).residue
    f = module.field
    drinfeld = operator_class(module, {1: f.neg(E.act_on_module(FqPoly.t(f), module))}, N, decomposition, seed)
    carlitz_t = operator_class(module, {1: f.neg(module.t_action)}, N, decomposition, seed)
    return drinfeld * carlitz_t.inverse()


@dataclass
class TraceReport:
    holds: bool
    lhs: TruncGroupSeries
    rhs: TruncGroupSeries
    precision: int
    prime_bound: int
    ball: int
    primes: list[FqPoly] = dc_field(default_factory=list)
    first_difference: int | None = None

    def to_report(self) -> dict:
        return {"holds": self.holds, "lhs": self.lhs.to_report(), "rhs": self.rhs.to_report(),
                "precision": self.precision, "prime_bound": self.prime_bound, "ball": self.ball,
                "prime_count": len(self.primes), "first_difference": self.first_difference}


def trace_formula_verify(phi: NuclearSeq, lattice: Lattice, ball: int | None = None,
                         decomposition: DecompositionData | None = None, threads: int = 1,
                         seed: int = constants.DEFAULT_SEED) -> TraceReport:
    """
    Checks prod_(deg p < B) [1 + Phi | M/pM] * [1 + Phi | K_inf/M] = 1 exactly modulo Z^N,
    with B = N * max deg_tau(phi_j) + 1.
    """
    N = phi.precision
    D = decomposition or DecompositionData.for_ring(lattice.ring)
    bound = N * phi.max_tau_degree + 1
    primes = list(enumerate_monic_irreducibles(lattice.field, bound - 1)) if bound > 1 else []
    logger.info(f"Trace formula for {phi.name} modulo Z^{N}: {len(primes)} primes of degree < {bound}")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        classes = list(pool.map(lambda p: euler_class_truncated(phi, lattice, p, N, D, seed), primes))
    lhs = TruncGroupSeries.one(lattice.ring, N)
    for c in classes:
        lhs = lhs * c
    ball = ball or nucleus_index(lattice, phi)
    quotient = compact_quotient(lattice, ball, phi)
    global_class = class_truncated(phi, quotient, N, D, seed)
    rhs = global_class.inverse()
    holds = lhs == rhs
    report = TraceReport(holds, lhs, rhs, N, bound, ball, primes, None if holds else lhs.first_difference(rhs))
    if not holds:
        logger.warning(f"Trace formula fails for {phi.name} at Z^{report.first_difference}")
    return report


def varphialpha_check(quotient: CompactQuotient, alpha: TwistedPoly, phi: TwistedPoly, m: int, N: int,
                      decomposition: DecompositionData | None = None,
                      seed: int = constants.DEFAULT_SEED) -> bool:
    """[1 - Z^m phi alpha] = [1 - Z^m alpha phi] on the quotient."""
    left, right = phi * alpha, alpha * phi
    for name, op in (("phi*alpha", left), ("alpha*phi", right)):
        if not op.is_zero and not quotient.contracts(op):
            raise HypothesisUnverified(f"{name} does not contract the ball of {quotient!r}")
    field = quotient.field
    lhs = class_truncated(single_term(field, left, m, N), quotient, N, decomposition, seed)
    rhs = class_truncated(single_term(field, right, m, N), quotient, N, decomposition, seed)
    return lhs == rhs


def multiplicativity_check(phi: NuclearSeq, psi: NuclearSeq, quotient: CompactQuotient,
                           decomposition: DecompositionData | None = None,
                           seed: int = constants.DEFAULT_SEED) -> bool:
    """[(1 + Phi)(1 + Psi)] = [1 + Phi] [1 + Psi]."""
    N = min(phi.precision, psi.precision)
    both = class_truncated(phi.compose(psi), quotient, N, decomposition, seed)
    product = class_truncated(phi, quotient, N, decomposition, seed) * \
        class_truncated(psi, quotient, N, decomposition, seed)
    return both == product


def euler_peeling_check(phi: NuclearSeq, lattice: Lattice, degree: int,
                        decomposition: DecompositionData | None = None,
                        seed: int = constants.DEFAULT_SEED) -> list[FqPoly]:
    """Primes of exactly the given degree whose Euler class is not 1 modulo Z^N (empty when peeling is safe)."""
    N = phi.precision
    primes = [p for p in enumerate_monic_irreducibles(lattice.field, degree) if p.degree == degree]
    return [p for p in primes if not euler_class_truncated(phi, lattice, p, N, decomposition, seed).is_one]
