"""Canonical representatives of F_inf[G]^x modulo A[G]^x."""
import logging

import numpy as np

from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.errors import InvertZero
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


def _polynomial_unit_inverse(alg: FiniteAlgebra, unit: LaurentSeries, e) -> LaurentSeries:
    """Exact inverse of e + n in eA[G] with n nilpotent: sum of (-n)^k."""
    n = unit - LaurentSeries.constant(alg, e)
    inverse = LaurentSeries.constant(alg, e)
    power = LaurentSeries.constant(alg, e)
    for _ in range(alg.dim + 1):
        power = power * (-n)
        if power.is_zero:
            return inverse
        inverse = inverse + power
    raise InvertZero("Polynomial part is not a unit of the local component")


def _normalize_commutative(x: LaurentSeries) -> LaurentSeries:
    alg = x.algebra
    result = LaurentSeries.zero(alg, x.floor)
    for e in alg.idempotents:
        part = x.scale(e)
        start = int(part.effective_top)
        d = next((k for k in range(start, part.low - 1, -1) if alg.is_unit_in(part.coefficient(k), e)), None) \
            if not part.is_zero else None
        if d is None:
            raise InvertZero("Element is not a unit in some local component")
        w = part.scale(alg.inverse_in(part.coefficient(d), e)).shift(-d)
        for _ in range(alg.dim + 1):
            head = w.polynomial_part()
            if (head - LaurentSeries.constant(alg, e)).is_zero:
                break
            w = w * _polynomial_unit_inverse(alg, head, e)
        result = result + w.shift(d)
    return result


def _center_maps(ring: GroupRing) -> tuple[np.ndarray, np.ndarray]:
    to_center = np.zeros((ring.center_dim, ring.order), dtype=np.int64)
    to_center[np.arange(ring.center_dim), ring.class_representatives] = 1
    return to_center, ring.class_sums.T


def monic_normalize(x: LaurentSeries, ring: GroupRing | None = None) -> LaurentSeries:
    """
    The monic representative of x modulo A[G]^x.

    Each primitive component e*x is written as t^d (e + O(1/t)): the leading unit
    coefficient is divided out and nilpotent terms above t^d are cleared by a
    polynomial unit. A non-commutative group ring needs a central x, which is
    normalized inside the center.
    """
    if x.algebra.is_commutative:
        return _normalize_commutative(x)
    if ring is None:
        raise ValueError("Normalizing in a non-commutative algebra needs the group ring")
    to_center, from_center = _center_maps(ring)
    z = _normalize_commutative(x.map_coefficients(to_center, ring.center))
    return z.map_coefficients(from_center, ring.algebra)


def central_inverse(x: LaurentSeries, ring: GroupRing, floor: int | None = None) -> LaurentSeries:
    """Inverse of a central series, computed inside the center when the group ring is not commutative."""
    if x.algebra.is_commutative:
        return x.inverse(floor)
    to_center, from_center = _center_maps(ring)
    return x.map_coefficients(to_center, ring.center).inverse(floor).map_coefficients(from_center, ring.algebra)


def is_monic(x: LaurentSeries, ring: GroupRing | None = None) -> bool:
    y = monic_normalize(x, ring)
    floor = max(v for v in (x.floor, y.floor) if v is not None) if (x.floor is not None or y.floor is not None) \
        else None
    if floor is None:
        return (x - y).is_zero
    return x.agrees_to(y, floor)
