import logging
from dataclasses import dataclass

import numpy as np

from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.truncated import TruncatedRing
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruncGroupSeries:
    """An element sum c_k Z^k of F_q[G][Z]/Z^N; `coeffs` has shape (N, |G|)."""
    ring: GroupRing
    coeffs: np.ndarray

    @property
    def precision(self) -> int:
        return self.coeffs.shape[0]

    @property
    def context(self) -> TruncatedRing:
        return TruncatedRing(self.ring.algebra, self.precision)

    @classmethod
    def one(cls, ring: GroupRing, N: int) -> "TruncGroupSeries":
        return cls(ring, TruncatedRing(ring.algebra, N).ones())

    def __mul__(self, other: "TruncGroupSeries") -> "TruncGroupSeries":
        if other.precision != self.precision:
            raise ValueError(f"Precisions differ: {self.precision} and {other.precision}")
        return TruncGroupSeries(self.ring, self.context.mul(self.coeffs, other.coeffs))

    def inverse(self) -> "TruncGroupSeries":
        return TruncGroupSeries(self.ring, self.context.inverse(self.coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncGroupSeries):
            return NotImplemented
        return self.precision == other.precision and np.array_equal(self.coeffs % self.ring.field.q,
                                                                    other.coeffs % other.ring.field.q)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    @property
    def is_one(self) -> bool:
        return self == TruncGroupSeries.one(self.ring, self.precision)

    def first_difference(self, other: "TruncGroupSeries") -> int | None:
        """Lowest Z-power where the two differ."""
        diff = np.nonzero(np.any(self.coeffs != other.coeffs, axis=-1))[0]
        return int(diff[0]) if diff.size else None

    def evaluate(self) -> LaurentSeries:
        """Z -> 1/t, known down to t^-(N-1)."""
        N = self.precision
        return LaurentSeries(self.ring.algebra, self.coeffs[::-1], -(N - 1), -(N - 1))

    def to_report(self) -> list[list[int]]:
        return self.coeffs.tolist()
