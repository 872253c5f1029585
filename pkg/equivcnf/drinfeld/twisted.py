"""Twisted polynomials sum c_i tau^i with tau * c = c^q * tau."""
import logging
from dataclasses import dataclass
from typing import Any, Callable

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.rational import RationalFunction
from equivcnf.errors import CarrierMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Carrier:
    """A commutative F_q-algebra of coefficients with its q^k-power maps."""
    name: str
    field: FqField
    zero: Any
    one: Any
    frobenius: Callable[[Any, int], Any]

    @classmethod
    def polynomials(cls, field: FqField) -> "Carrier":
        return cls("A", field, FqPoly(field), FqPoly.constant(field, 1), lambda c, k: c.spread(field.q ** k))

    @classmethod
    def rational_functions(cls, field: FqField) -> "Carrier":
        return cls("F_q(t)", field, RationalFunction(FqPoly(field)), RationalFunction.constant(field, 1),
                   lambda c, k: c.spread(field.q ** k))

    def is_zero(self, c) -> bool:
        return c.is_zero


class TwistedPoly:
    __slots__ = ("carrier", "coeffs")

    def __init__(self, carrier: Carrier, coeffs):
        c = list(coeffs)
        while c and carrier.is_zero(c[-1]):
            c.pop()
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, key, value):
        raise AttributeError("TwistedPoly is immutable")

    @classmethod
    def constant(cls, carrier: Carrier, c) -> "TwistedPoly":
        return cls(carrier, [c])

    @classmethod
    def tau(cls, carrier: Carrier, k: int = 1) -> "TwistedPoly":
        return cls(carrier, [carrier.zero] * k + [carrier.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.carrier.zero

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*tau^{i}" if i else f"({c})" for i, c in enumerate(self.coeffs) if not c.is_zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return self.carrier.name == other.carrier.name and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.carrier.name, self.coeffs))

    def _check(self, other: "TwistedPoly"):
        if self.carrier.name != other.carrier.name or self.carrier.field != other.carrier.field:
            raise CarrierMismatch(f"Cannot combine twisted polynomials over {self.carrier.name} and {other.carrier.name}")

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return TwistedPoly(self.carrier, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.carrier, [-c for c in self.coeffs])

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return TwistedPoly(self.carrier, [])
        out = [self.carrier.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * self.carrier.frobenius(b, i)
        return TwistedPoly(self.carrier, out)

    def scale(self, c) -> "TwistedPoly":
        """Left multiplication by a carrier element."""
        return TwistedPoly(self.carrier, [c * x for x in self.coeffs])

    def right_scale(self, c) -> "TwistedPoly":
        """Right multiplication by a carrier element: (c_i tau^i) c = c_i c^(q^i) tau^i."""
        return TwistedPoly(self.carrier, [x * self.carrier.frobenius(c, i) for i, x in enumerate(self.coeffs)])


def twisted_mul(f: TwistedPoly, g: TwistedPoly) -> TwistedPoly:
    return f * g
