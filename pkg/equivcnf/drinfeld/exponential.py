"""
The exponential of a Drinfeld module on K_inf, in the coordinates of a tau-stable lattice.

A vector x = sum x_j mu_j with Laurent coordinates x_j has tau^k(x) = Omega_k x^(q^k),
where Omega_k = Omega * Omega_(k-1)^(q) and Omega holds the coordinates of mu_j^q.
Entries of Omega_k have degree at most gamma_k = c (q^k - 1)/(q - 1), c = max deg Omega.
"""
import logging
import math

import numpy as np

from equivcnf import constants
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.rational import RationalFunction
from equivcnf.covers.cover import Lattice
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import DivergenceSuspected, IsometryBallNotFound, PrecisionExhausted

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")


class ExpSeries:
    """
    Coefficients e_0, e_1, ... of exp_E = sum e_i tau^i, extended on demand.

    `degree_bound(i)` is the upper bound for deg e_i from the recursion
    e_i (t^(q^i) - t) = sum_j a_j e_(i-j)^(q^j); it never needs the e_i themselves.
    """

    def __init__(self, E: DrinfeldModule):
        self.E = E
        self.q = E.field.q
        self.coefficients: list[RationalFunction] = [RationalFunction.constant(E.field, 1)]
        self._bounds: list[float] = [0]

    @property
    def depth(self) -> int:
        return len(self.coefficients) - 1

    def extend(self, n: int) -> "ExpSeries":
        f, q = self.E.field, self.q
        t = FqPoly.t(f)
        while self.depth < n:
            i = self.depth + 1
            acc = RationalFunction(FqPoly(f))
            for j in range(1, min(i, self.E.rank) + 1):
                a = self.E.coefficient(j)
                if not a.is_zero:
                    acc = acc + self.coefficients[i - j].spread(q ** j) * a
            self.coefficients.append(acc / (FqPoly.monomial(f, q ** i) - t))
            logger.debug(f"exp coefficient e_{i} has degree {self.coefficients[-1].degree}")
        return self

    def coefficient(self, i: int) -> RationalFunction:
        return self.extend(i).coefficients[i]

    def degree(self, i: int) -> float:
        e = self.coefficient(i)
        return NEG_INF if e.is_zero else e.degree

    def degree_bound(self, i: int) -> float:
        q = self.q
        while len(self._bounds) <= i:
            k = len(self._bounds)
            best = NEG_INF
            for j in range(1, min(k, self.E.rank) + 1):
                a = self.E.coefficient(j)
                if not a.is_zero and self._bounds[k - j] != NEG_INF:
                    best = max(best, a.degree + q ** j * self._bounds[k - j])
            self._bounds.append(best - q ** k if best != NEG_INF else NEG_INF)
        return self._bounds[i]

    def check_recursion(self, i: int) -> bool:
        f, q = self.E.field, self.q
        lhs = self.coefficient(i) * (FqPoly.monomial(f, q ** i) - FqPoly.t(f))
        rhs = RationalFunction(FqPoly(f))
        for j in range(1, min(i, self.E.rank) + 1):
            rhs = rhs + self.coefficient(i - j).spread(q ** j) * self.E.coefficient(j)
        return lhs == rhs if i else self.coefficient(0) == RationalFunction.constant(f, 1)

    def to_report(self) -> list[dict]:
        return [{"num": list(e.num.coeffs), "den": list(e.den.coeffs)} for e in self.coefficients]


def exp_coefficients(E: DrinfeldModule, n: int) -> ExpSeries:
    return ExpSeries(E).extend(n)


def _poly_series(field, p: FqPoly) -> LaurentSeries:
    return LaurentSeries.from_poly(p, field.algebra)


def coordinate_map(field, matrix, x: list[LaurentSeries]) -> list[LaurentSeries]:
    """Apply a constant F_q matrix to a coordinate vector."""
    m = np.asarray(matrix, dtype=np.int64)
    out = []
    for row in m:
        acc = LaurentSeries.zero(field.algebra)
        for c, xj in zip(row, x):
            if c:
                acc = acc + xj.scale(field.algebra.scalar(int(c)))
        out.append(acc)
    return out


def top_of(x: list[LaurentSeries]) -> float:
    return max((c.effective_top for c in x), default=NEG_INF)


class LatticeFrobenius:
    """tau and twisted polynomials over A acting on K_inf in the coordinates of a tau-stable lattice."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self.field = lattice.field
        self.q = self.field.q
        self.rank = lattice.rank
        self.omega_degree = lattice.omega_degree
        self._omega_powers: list[list[list[FqPoly]]] = [
            [[FqPoly.constant(self.field, int(i == j)) for j in range(self.rank)] for i in range(self.rank)]
        ]

    def gamma(self, k: int) -> int:
        return self.omega_degree * (self.q ** k - 1) // (self.q - 1)

    def omega_power(self, k: int) -> list[list[FqPoly]]:
        n, q = self.rank, self.q
        zero = FqPoly(self.field)
        while len(self._omega_powers) <= k:
            prev = self._omega_powers[-1]
            spread = [[x.spread(q) for x in row] for row in prev]
            nxt = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = zero
                    for m in range(n):
                        acc = acc + self.lattice.omega[i][m] * spread[m][j]
                    row.append(acc)
                nxt.append(row)
            self._omega_powers.append(nxt)
        return self._omega_powers[k]

    def tau(self, x: list[LaurentSeries], k: int) -> list[LaurentSeries]:
        """tau^k(x) in lattice coordinates."""
        if k == 0:
            return list(x)
        y = [c.substitute_power(self.q ** k) for c in x]
        omega = self.omega_power(k)
        out = []
        for row in omega:
            acc = LaurentSeries.zero(self.field.algebra)
            for p, yj in zip(row, y):
                if not p.is_zero:
                    acc = acc + _poly_series(self.field, p) * yj
            out.append(acc)
        return out

    def apply_twisted(self, coeffs, x: list[LaurentSeries]) -> list[LaurentSeries]:
        """sum c_k tau^k (x) for polynomial coefficients c_k."""
        out = [LaurentSeries.zero(self.field.algebra) for _ in range(self.rank)]
        for k, c in enumerate(coeffs):
            if c.is_zero:
                continue
            cs = _poly_series(self.field, c)
            out = [o + cs * v for o, v in zip(out, self.tau(x, k))]
        return out

    def omega_power_degree(self, k: int) -> int:
        return max((x.degree for row in self.omega_power(k) for x in row if not x.is_zero), default=0)


class LatticeExponential:
    """exp_E and phi_E acting on K_inf through the coordinates of a tau-stable lattice."""

    def __init__(self, E: DrinfeldModule, lattice: Lattice, series: ExpSeries | None = None):
        self.E = E
        self.lattice = lattice
        self.field = lattice.field
        self.q = self.field.q
        self.rank = lattice.rank
        self.series = series or ExpSeries(E)
        self.frobenius = LatticeFrobenius(lattice)
        self.gamma = self.frobenius.gamma
        self.tau = self.frobenius.tau

    def phi(self, a: FqPoly, x: list[LaurentSeries]) -> list[LaurentSeries]:
        return self.frobenius.apply_twisted(self.E.phi_of(a).coeffs, x)

    def term_bound(self, i: int, top: float) -> float:
        """Upper bound for the top exponent of e_i tau^i(x) when x has top exponent `top`."""
        delta = self.series.degree_bound(i)
        if delta == NEG_INF or top == NEG_INF:
            return NEG_INF
        return delta + self.gamma(i) + self.q ** i * top

    def certified_depth(self, top: float, floor: int) -> int:
        """
        Smallest n such that every term past e_n tau^n has top exponent below `floor`.

        Holds once r consecutive term bounds sit below the floor and
        deg a_j + gamma_j <= q^(n+1) for every j, by induction on the recursion.
        """
        if top == NEG_INF:
            return 0
        F = min(floor, 0)
        r = self.E.rank
        slack = max(self.E.coefficient(j).degree + self.gamma(j) for j in range(1, r + 1)
                    if not self.E.coefficient(j).is_zero)
        for n in range(constants.EXP_DEPTH_CAP + 1):
            if n + 1 < r or slack > self.q ** (n + 1):
                continue
            if all(self.term_bound(i, top) <= F - 1 for i in range(n + 1 - r, n + 1)):
                return n
        raise DivergenceSuspected(
            f"exp terms for {self.E.name} do not drop below t^{floor} within depth {constants.EXP_DEPTH_CAP}")

    def __call__(self, x: list[LaurentSeries], floor: int) -> list[LaurentSeries]:
        alg = self.field.algebra
        top = top_of(x)
        if top == NEG_INF:
            return [LaurentSeries.zero(alg, floor) for _ in range(self.rank)]
        depth = self.certified_depth(top, floor)
        out = [LaurentSeries.zero(alg, floor) for _ in range(self.rank)]
        for i in range(depth + 1):
            if self.term_bound(i, top) < floor:
                continue
            tx = self.tau(x, i)
            tx_top = top_of(tx)
            if tx_top == NEG_INF:
                continue
            e = self.series.coefficient(i)
            if e.is_zero:
                continue
            e_series = e.to_laurent(floor - int(tx_top))
            out = [o + (e_series * c).truncate(floor) for o, c in zip(out, tx)]
        for c in out:
            if c.floor is not None and c.floor > floor:
                raise PrecisionExhausted(f"exp known only to t^{c.floor}, wanted t^{floor}")
        return [c.truncate(floor) for c in out]

    def isometry_ball(self, budget: int | None = None) -> int:
        """
        Smallest m >= 1 with deg a_j + gamma_j + 1 - (q^j - 1) m <= q^j for every a_j != 0.

        On t^(-m) times the coordinate unit ball, exp differs from the identity by terms
        strictly smaller than its argument.
        """
        m = 1
        for j in range(1, self.E.rank + 1):
            a = self.E.coefficient(j)
            if a.is_zero:
                continue
            qj = self.q ** j
            need = math.ceil((a.degree + self.gamma(j) + 1 - qj) / (qj - 1))
            m = max(m, need)
        if budget is not None and m > budget:
            raise IsometryBallNotFound(f"Isometry ball t^-{m} exceeds the ball budget {budget}")
        logger.debug(f"Isometry ball for {self.E.name} on {self.lattice.name}: m0 = {m}")
        return m


def exp_eval(E: DrinfeldModule, lattice: Lattice, x: list[LaurentSeries], target_floor: int,
             series: ExpSeries | None = None) -> list[LaurentSeries]:
    return LatticeExponential(E, lattice, series)(x, target_floor)


def isometry_ball(E: DrinfeldModule, lattice: Lattice, budget: int | None = None) -> int:
    return LatticeExponential(E, lattice).isometry_ball(budget)
