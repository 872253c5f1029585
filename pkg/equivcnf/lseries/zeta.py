"""Partial sums of the Carlitz zeta value sum over monic a of 1/a."""
import logging

from equivcnf.algebra.field import FqField
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import monic_polynomials

logger = logging.getLogger(__name__)


def power_sum(field: FqField, d: int, floor: int) -> LaurentSeries:
    """S_d = sum of 1/a over monic a of degree d, known down to t^floor."""
    alg = field.algebra
    total = LaurentSeries.zero(alg, floor)
    for a in monic_polynomials(field, d):
        total = total + LaurentSeries.from_poly(a, alg).inverse(floor)
    return total


def power_sums(field: FqField, N: int, floor: int | None = None) -> list[LaurentSeries]:
    floor = -(2 * N + 1) if floor is None else floor
    return [power_sum(field, d, floor) for d in range(N + 1)]


def zeta_partial(field: FqField, N: int, floor: int | None = None) -> LaurentSeries:
    """Sum over monic a with deg a <= N of 1/a, each term expanded to t^-(2N+1) by default."""
    if N < 0:
        raise ValueError(f"Partial zeta needs N >= 0, got {N}")
    floor = -(2 * N + 1) if floor is None else floor
    total = LaurentSeries.zero(field.algebra, floor)
    for s in power_sums(field, N, floor):
        total = total + s
    logger.debug(f"Partial zeta over F_{field.q} to degree {N}: {total!r}")
    return total
