import logging
from dataclasses import dataclass

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.drinfeld.twisted import Carrier, TwistedPoly
from equivcnf.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class NuclearSeq:
    """
    Operators phi_1, ..., phi_(N-1) of 1 + sum Z^j phi_j, each a twisted polynomial over A.

    Every phi_j has zero constant term, so it contracts a small enough ball.
    """
    terms: list[TwistedPoly]
    name: str = "Phi"

    def __post_init__(self):
        for j, phi in enumerate(self.terms, start=1):
            if not phi.is_zero and not phi.coefficient(0).is_zero:
                raise ConfigError(f"{self.name}: phi_{j} has a nonzero constant tau-term")

    @property
    def precision(self) -> int:
        return len(self.terms) + 1

    def term(self, j: int) -> TwistedPoly:
        return self.terms[j - 1]

    @property
    def max_tau_degree(self) -> int:
        return max((phi.degree for phi in self.terms if not phi.is_zero), default=0)

    @classmethod
    def zero(cls, field: FqField, N: int) -> "NuclearSeq":
        carrier = Carrier.polynomials(field)
        return cls([TwistedPoly(carrier, []) for _ in range(N - 1)], name="0")

    def compose(self, other: "NuclearSeq") -> "NuclearSeq":
        """(1 + Phi)(1 + Psi) - 1 termwise: chi_j = phi_j + psi_j + sum_(i+k=j) phi_i psi_k."""
        N = min(self.precision, other.precision)
        terms = []
        for j in range(1, N):
            chi = self.term(j) + other.term(j)
            for i in range(1, j):
                chi = chi + self.term(i) * other.term(j - i)
            terms.append(chi)
        return NuclearSeq(terms, name=f"({self.name})({other.name})")

    def to_report(self) -> list[list[list[int]]]:
        return [[list(c.coeffs) for c in phi.coeffs] for phi in self.terms]


def phi_E_sequence(E: DrinfeldModule, N: int) -> NuclearSeq:
    """phi_j = (t - phi_E(t)) t^(j-1) for 1 <= j < N."""
    if N < 1:
        raise ConfigError(f"Nuclear sequences need N >= 1, got {N}")
    carrier = E.carrier
    t = FqPoly.t(E.field)
    head = TwistedPoly.constant(carrier, t) - E.phi_t
    terms = [head.right_scale(t ** (j - 1)) for j in range(1, N)]
    return NuclearSeq(terms, name=f"Phi_{E.name}")


def sequence_from_terms(field: FqField, terms, name: str = "Phi") -> NuclearSeq:
    """
    A nuclear sequence in report form: `terms[j-1][k]` lists the coefficients of
    tau^k in phi_j, lowest power of t first.
    """
    carrier = Carrier.polynomials(field)
    try:
        phis = [TwistedPoly(carrier, [FqPoly.from_ints(field, c) for c in term]) for term in terms]
    except TypeError as e:
        raise ConfigError(f"{name}: terms must be lists of integer coefficient lists") from e
    if not phis:
        raise ConfigError(f"{name}: at least one term phi_1 is needed")
    return NuclearSeq(phis, name=name)


def single_term(field: FqField, phi: TwistedPoly, m: int, N: int, sign: int = -1) -> NuclearSeq:
    """The sequence of 1 + sign * Z^m phi."""
    carrier = Carrier.polynomials(field)
    zero = TwistedPoly(carrier, [])
    scaled = phi if sign == 1 else -phi
    return NuclearSeq([scaled if j == m else zero for j in range(1, N)], name=f"Z^{m}*{phi!r}")
