import logging
from dataclasses import dataclass

from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.errors import MismatchWithDiff
from equivcnf.groups.decomposition import DecompositionData
from equivcnf.groups.group_ring import GroupRing
from equivcnf.lseries.euler import EulerFactor, LValueTrunc
from equivcnf.lseries.monic import central_inverse

logger = logging.getLogger(__name__)


@dataclass
class StickelbergerElem:
    value: LaurentSeries
    floor: int

    def to_report(self) -> dict:
        return {"value": self.value.terms(), "floor": self.floor}


def _shifted_identity(ring: GroupRing, T) -> list[list[LaurentSeries]]:
    """t*I - T as a matrix of exact series over F_q[G]."""
    alg = ring.algebra
    r = T.shape[0]
    rows = []
    for s in range(r):
        row = []
        for u in range(r):
            entry = LaurentSeries.constant(alg, ring.field.neg(T[s, u]))
            if s == u:
                entry = entry + LaurentSeries.monomial(alg, 1)
            row.append(entry)
        rows.append(row)
    return rows


def blockwise_factor(factor: EulerFactor, ring: GroupRing, D: DecompositionData, floor: int) -> LaurentSeries:
    """Nrd(tI - T) * Nrd(tI - T_E)^-1 from series determinants in every block."""
    num = D.nrd_laurent(_shifted_identity(ring, factor.numerator.t_matrix))
    den = D.nrd_laurent(_shifted_identity(ring, factor.denominator.t_matrix))
    return (num * central_inverse(den, ring, floor - factor.numerator.degree)).truncate(floor)


def stickelberger(theta: LValueTrunc, decomposition: DecompositionData) -> StickelbergerElem:
    """
    theta = Nrd(Theta). Abelian G returns Theta itself; otherwise every Euler factor is
    recomputed as blockwise series determinants and checked against the stored reduced norms.
    """
    D = decomposition.verify() if not decomposition.verified else decomposition
    ring = D.ring
    if D.is_trivial:
        return StickelbergerElem(theta.value, theta.floor)
    value = LaurentSeries.one(ring.algebra)
    for f in theta.factors:
        if f.numerator.t_matrix is None or f.denominator.t_matrix is None:
            value = (value * f.series).truncate(theta.floor)
            continue
        block = blockwise_factor(f, ring, D, theta.floor)
        if not block.agrees_to(f.series, theta.floor):
            k = block.first_difference(f.series)
            raise MismatchWithDiff(f"Blockwise reduced norm differs from the Euler factor at {f.p!r}",
                                   diff={"p": list(f.p.coeffs), "exponent": k})
        value = (value * block).truncate(theta.floor)
    if not all(ring.is_central(c) for c in value.coeffs):
        raise MismatchWithDiff("Stickelberger element is not central", diff={})
    logger.info(f"Stickelberger element over {ring.algebra.name} to t^{theta.floor}")
    return StickelbergerElem(value, theta.floor)
