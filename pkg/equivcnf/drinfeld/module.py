import logging

import numpy as np

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.config import DrinfeldConfig
from equivcnf.covers.module import FiniteAGModule
from equivcnf.drinfeld.twisted import Carrier, TwistedPoly
from equivcnf.errors import ConfigError, NoFrobenius

logger = logging.getLogger(__name__)


class DrinfeldModule:
    """
    A Drinfeld module over A = F_q[t] given by phi(t) = t + a_1 tau + ... + a_r tau^r.

    The coefficients are polynomials in t, so phi(a) lies in A{tau} for every a in A
    and acts on any lattice quotient that carries a Frobenius.
    """

    def __init__(self, field: FqField, coefficients: list[FqPoly], name: str = ""):
        if not coefficients or coefficients[-1].is_zero:
            raise ConfigError("Drinfeld module needs a nonzero leading coefficient a_r")
        self.field = field
        self.carrier = Carrier.polynomials(field)
        self.coefficients = list(coefficients)
        self.rank = len(coefficients)
        self.phi_t = TwistedPoly(self.carrier, [FqPoly.t(field)] + self.coefficients)
        self.name = name or ("Carlitz" if self.is_carlitz else f"rank-{self.rank}")
        self._cache: dict[FqPoly, TwistedPoly] = {}

    @classmethod
    def carlitz(cls, field: FqField) -> "DrinfeldModule":
        return cls(field, [FqPoly.constant(field, 1)], name="Carlitz")

    @classmethod
    def from_config(cls, field: FqField, config: DrinfeldConfig) -> "DrinfeldModule":
        return cls(field, config.build(field))

    def __repr__(self) -> str:
        return f"DrinfeldModule({self.name}: phi(t) = {self.phi_t!r})"

    @property
    def is_carlitz(self) -> bool:
        return self.rank == 1 and self.coefficients[0] == FqPoly.constant(self.field, 1)

    def coefficient(self, j: int) -> FqPoly:
        """a_j for 1 <= j <= r, zero elsewhere."""
        if 1 <= j <= self.rank:
            return self.coefficients[j - 1]
        return FqPoly(self.field)

    def phi_of(self, a: FqPoly) -> TwistedPoly:
        """phi(a) = sum c_k phi(t)^k by Horner's rule in A{tau}."""
        if a in self._cache:
            return self._cache[a]
        out = TwistedPoly(self.carrier, [])
        for c in reversed(a.coeffs):
            out = out * self.phi_t + TwistedPoly.constant(self.carrier, FqPoly.constant(self.field, int(c)))
        self._cache[a] = out
        return out

    def act_on_module(self, a: FqPoly, module: FiniteAGModule) -> np.ndarray:
        """Matrix of phi(a) on a module with a Frobenius."""
        return twisted_action(self.phi_of(a), module)

    def e_module(self, module: FiniteAGModule) -> FiniteAGModule:
        """E(M): the same F_q[G]-module with t acting through phi(t)."""
        return module.with_t_action(self.act_on_module(FqPoly.t(self.field), module), name=f"E({module.name})")

    def to_report(self) -> dict:
        return {"name": self.name, "rank": self.rank, "coefficients": [list(a.coeffs) for a in self.coefficients]}


def twisted_action(poly: TwistedPoly, module: FiniteAGModule) -> np.ndarray:
    """Matrix of sum c_i tau^i on a quotient ring of a lattice: sum c_i(T) F^i."""
    if not module.has_frobenius:
        raise NoFrobenius(f"{module.name} has no Frobenius; {poly!r} cannot act on it")
    f = module.field
    out = np.zeros((module.dim, module.dim), dtype=np.int64)
    frob = np.eye(module.dim, dtype=np.int64)
    for c in poly.coeffs:
        if not c.is_zero:
            out = f.add(out, f.dot(module.poly_action(c), frob))
        frob = f.dot(module.frobenius, frob)
    return out


def phi_of(E: DrinfeldModule, a: FqPoly) -> TwistedPoly:
    return E.phi_of(a)


def act_on_module(E: DrinfeldModule, a: FqPoly, module: FiniteAGModule) -> np.ndarray:
    return E.act_on_module(a, module)
