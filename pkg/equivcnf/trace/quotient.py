"""
Finite quotients K_inf / (M + t^-i W) of K_inf in the coordinates of a lattice M.

W is the coordinate unit ball (every coordinate a power series in 1/t), so
the quotient has the F_q-basis t^-j mu_l for 1 <= j < i, at index l*(i-1) + (j-1).
"""
import logging
import math

import numpy as np

from equivcnf.covers.cover import Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.drinfeld.exponential import LatticeFrobenius
from equivcnf.drinfeld.twisted import TwistedPoly
from equivcnf.errors import HypothesisViolated, NucleusTooSmall
from equivcnf.trace.nuclear import NuclearSeq

logger = logging.getLogger(__name__)


class CompactQuotient:
    def __init__(self, lattice: Lattice, ball: int):
        if ball < 1:
            raise NucleusTooSmall(f"Ball index must be positive, got {ball}")
        if lattice.constant_actions is None:
            raise HypothesisViolated(f"G does not act on the coordinates of {lattice.name} by constant matrices")
        self.lattice = lattice
        self.ball = ball
        self.field = lattice.field
        self.ring = lattice.ring
        self.frobenius = LatticeFrobenius(lattice)
        self.width = ball - 1
        self.dim = lattice.rank * self.width

    def __repr__(self) -> str:
        return f"CompactQuotient({self.lattice.name}, ball={self.ball}, dim={self.dim})"

    def index(self, l: int, j: int) -> int:
        return l * self.width + (j - 1)

    def g_action(self) -> np.ndarray:
        S = self.lattice.constant_actions
        eye = np.eye(self.width, dtype=np.int64)
        return np.stack([np.kron(S[g], eye) for g in range(self.ring.order)])

    def shift_action(self) -> np.ndarray:
        """Multiplication by 1/t, which preserves the ball and the lattice part."""
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for l in range(self.lattice.rank):
            for j in range(1, self.width):
                out[self.index(l, j + 1), self.index(l, j)] = 1
        return out

    def module(self) -> FiniteAGModule:
        """The quotient as an F_q[G]-module; 1/t stands in for the A-action."""
        return FiniteAGModule(self.ring, self.shift_action(), self.g_action(),
                              name=f"K_inf/({self.lattice.name}+t^-{self.ball}W)")

    def contracts(self, phi: TwistedPoly) -> bool:
        """phi(t^-i W) is inside t^-(i+1) W."""
        i, q = self.ball, self.field.q
        for k, c in enumerate(phi.coeffs):
            if c.is_zero:
                continue
            if k == 0:
                return False
            if c.degree + self.frobenius.omega_power_degree(k) - i * q ** k > -(i + 1):
                return False
        return True

    def operator(self, phi: TwistedPoly) -> np.ndarray:
        """F_q matrix of sum c_k tau^k on the quotient (columns are images of basis vectors)."""
        n, q = self.lattice.rank, self.field.q
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for k, c in enumerate(phi.coeffs):
            if c.is_zero:
                continue
            omega = self.frobenius.omega_power(k)
            for l in range(n):
                for m in range(n):
                    entry = c * omega[m][l]
                    if entry.is_zero:
                        continue
                    for j in range(1, self.ball):
                        for jj in range(1, self.ball):
                            coeff = entry.coefficient(j * q ** k - jj)
                            if coeff:
                                row, col = self.index(m, jj), self.index(l, j)
                                out[row, col] = self.field.add(out[row, col], coeff)
        return out


def nucleus_index(lattice: Lattice, phi: NuclearSeq) -> int:
    """Smallest ball index whose ball every phi_j contracts."""
    q = lattice.field.q
    frob = LatticeFrobenius(lattice)
    i = 2
    for term in phi.terms:
        for k, c in enumerate(term.coeffs):
            if c.is_zero or k == 0:
                continue
            i = max(i, math.ceil((c.degree + frob.omega_power_degree(k) + 1) / (q ** k - 1)))
    return i


def compact_quotient(lattice: Lattice, ball: int, phi: NuclearSeq | None = None) -> CompactQuotient:
    quotient = CompactQuotient(lattice, ball)
    if phi is not None:
        for j, term in enumerate(phi.terms, start=1):
            if not term.is_zero and not quotient.contracts(term):
                raise NucleusTooSmall(f"Ball t^-{ball} is not a nucleus for phi_{j}; "
                                      f"the least admissible index is {nucleus_index(lattice, phi)}")
    logger.debug(f"{quotient!r}")
    return quotient
