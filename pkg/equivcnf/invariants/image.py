"""
The image of exp_E on the lattice coordinates, seen through a finite window.

With m at least one past the isometry ball, every class of K_inf/M is
represented in V_fin = K_inf/(M + t^-m W), and H(E/M) is V_fin modulo the
image of exp on the span of t^j mu_l, j >= -(m-1). The lifts
L_(j,l) = exp(t^j mu_l) mod M are computed once at the start level and then
by L_(j+1,l) = phi_E(t) L_(j,l) mod M.
"""
import logging

import numpy as np

from equivcnf.algebra import linalg
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly
from equivcnf.covers.cover import Lattice
from equivcnf.drinfeld.exponential import LatticeExponential
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import DivergenceSuspected, PrecisionExhausted, StabilizationBudgetExceeded
from equivcnf.trace.quotient import CompactQuotient

logger = logging.getLogger(__name__)

Coords = list[LaurentSeries]


def fractional(x: Coords) -> Coords:
    return [c.fractional_part() for c in x]


class ExponentialImage:
    def __init__(self, E: DrinfeldModule, lattice: Lattice, ball: int, precision: int, budget: int):
        self.E = E
        self.lattice = lattice
        self.field = lattice.field
        self.ring = lattice.ring
        self.rank = lattice.rank
        self.ball = ball
        self.precision = precision
        self.budget = budget
        self.quotient = CompactQuotient(lattice, ball)
        self.exp = LatticeExponential(E, lattice)
        self.start = -(ball - 1)
        self.base_floor = -(precision + ball + budget + 1)
        self.lifts: list[Coords] = []
        self._columns: list[np.ndarray] = []

    def __repr__(self) -> str:
        return f"ExponentialImage({self.E.name} on {self.lattice.name}, ball={self.ball}, level={self.level})"

    @property
    def level(self) -> int:
        """Highest exponent j whose lifts are known."""
        return self.start + len(self.lifts) // self.rank - 1

    @property
    def window_size(self) -> int:
        return self.rank * (self.level - self.start + 1)

    def column(self, j: int, l: int) -> int:
        return (j - self.start) * self.rank + l

    def unit(self, l: int, j: int) -> Coords:
        alg = self.field.algebra
        return [LaurentSeries.monomial(alg, j) if i == l else LaurentSeries.zero(alg) for i in range(self.rank)]

    def lift(self, j: int, l: int) -> Coords:
        return self.lifts[self.column(j, l)]

    def vector(self, x: Coords) -> np.ndarray:
        """Coordinates of x in V_fin = K_inf/(M + t^-m W)."""
        width = self.quotient.width
        out = np.zeros(self.quotient.dim, dtype=np.int64)
        if width == 0:
            return out
        for l, c in enumerate(x):
            w = c.window(-width, -1)[:, 0]
            out[l * width:(l + 1) * width] = w[::-1]
        return out

    def extend(self, k: int) -> "ExponentialImage":
        """Lifts for every level up to k."""
        if k > self.budget:
            raise StabilizationBudgetExceeded(
                f"Level {k} for {self.E.name} on {self.lattice.name} exceeds the ball budget {self.budget}")
        t = FqPoly.t(self.field)
        while self.level < k:
            if not self.lifts:
                batch = [fractional(self.exp(self.unit(l, self.start), self.base_floor)) for l in range(self.rank)]
            else:
                previous = self.lifts[-self.rank:]
                batch = [fractional(self.exp.phi(t, x)) for x in previous]
            for x in batch:
                if any(c.floor is not None and c.floor > -(self.ball - 1) for c in x):
                    raise PrecisionExhausted(f"Lift at level {self.level + 1} lost the window t^-{self.ball - 1}..t^-1")
                self.lifts.append(x)
                self._columns.append(self.vector(x))
        return self

    def ev_matrix(self, k: int | None = None) -> np.ndarray:
        """V_fin x Y_k matrix whose column (j - start)*n + l is the class of exp(t^j mu_l)."""
        k = self.level if k is None else k
        self.extend(k)
        count = self.rank * (k - self.start + 1)
        if count == 0 or self.quotient.dim == 0:
            return np.zeros((self.quotient.dim, count), dtype=np.int64)
        return np.stack(self._columns[:count], axis=1)

    def t_action(self) -> np.ndarray:
        """
        F_q matrix of phi_E(t) on V_fin, columns indexed like the quotient basis.

        Well defined on V_fin modulo the exp image.
        """
        Q = self.quotient
        t = FqPoly.t(self.field)
        out = np.zeros((Q.dim, Q.dim), dtype=np.int64)
        for l in range(self.rank):
            for j in range(1, Q.ball):
                image = fractional(self.exp.phi(t, self.unit(l, -j)))
                out[:, Q.index(l, j)] = self.vector(image)
        return out

    def window_of(self, x: Coords, k: int) -> np.ndarray:
        """Coefficients of t^j mu_l, start <= j <= k, at column (j - start)*n + l."""
        out = np.zeros(self.rank * (k - self.start + 1), dtype=np.int64)
        for l, c in enumerate(x):
            w = c.window(self.start, k)[:, 0]
            out[l::self.rank] = w
        return out

    def from_window(self, y, k: int) -> Coords:
        alg = self.field.algebra
        y = np.asarray(y, dtype=np.int64)
        out = []
        for l in range(self.rank):
            terms = {self.start + i: int(c) for i, c in enumerate(y[l::self.rank]) if c}
            out.append(LaurentSeries.from_scalars(alg, terms))
        return out

    def exp_mod_lattice(self, y, k: int) -> Coords:
        """exp of the window element y, modulo M, as a combination of lifts."""
        self.extend(k)
        alg = self.field.algebra
        out = [LaurentSeries.zero(alg) for _ in range(self.rank)]
        for idx, c in enumerate(np.asarray(y, dtype=np.int64)):
            if c:
                scale = alg.scalar(int(c))
                out = [o + x.scale(scale) for o, x in zip(out, self.lifts[idx])]
        return out

    def log_on_ball(self, b: Coords) -> Coords:
        """
        The z in t^-m W with exp(z) = b, for b in t^-m W.

        z <- b - (exp(z) - z) gains at least one exact coefficient per step.
        """
        floors = [c.floor for c in b if c.floor is not None]
        floor = max(floors) if floors else self.base_floor
        z = list(b)
        for _ in range(self.ball - floor + 2):
            ez = self.exp(z, floor)
            nxt = [bb - (e - zz) for bb, e, zz in zip(b, ez, z)]
            if all((a - c).is_zero for a, c in zip(nxt, z)):
                return nxt
            z = nxt
        raise DivergenceSuspected(f"exp is not inverted on t^-{self.ball}W down to t^{floor}")

    def unit_from_window(self, y, k: int) -> Coords:
        """
        The element u of exp^-1(M) whose window over start..k is y.

        y must lie in the kernel of the ev matrix; u = y - z where exp(z) is the
        part of exp(y) mod M below the window.
        """
        b = self.exp_mod_lattice(y, k)
        if self.vector(b).any():
            raise ValueError("Window vector is not in the kernel of the exp image map")
        z = self.log_on_ball(b)
        return [yy - zz for yy, zz in zip(self.from_window(y, k), z)]


def image_rank(image: ExponentialImage, k: int) -> int:
    return linalg.rank(image.field, image.ev_matrix(k))
