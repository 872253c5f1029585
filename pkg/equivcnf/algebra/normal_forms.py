"""Smith and Hermite normal forms over A = F_q[t]."""
import logging
from dataclasses import dataclass

from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InvariantFactors:
    """Invariant factors f_1 | f_2 | ... of a finitely generated A-module; the zero polynomial marks a free summand."""
    factors: tuple[FqPoly, ...]

    @property
    def is_finite(self) -> bool:
        return all(not f.is_zero for f in self.factors)

    @property
    def dimension(self) -> int:
        """F_q-dimension of the module (finite modules only)."""
        if not self.is_finite:
            raise ValueError("Module has a free part")
        return sum(f.degree for f in self.factors)

    @property
    def nontrivial(self) -> tuple[FqPoly, ...]:
        return tuple(f for f in self.factors if f.is_zero or f.degree > 0)

    @property
    def is_zero_module(self) -> bool:
        return not self.nontrivial

    def order(self, field: FqField) -> FqPoly:
        """Product of the factors: the monic generator of the Fitting ideal."""
        out = FqPoly.constant(field, 1)
        for f in self.factors:
            out = out * f
        return out

    def to_report(self) -> list[list[int]]:
        return [list(f.coeffs) for f in self.factors]


def _as_poly(field: FqField, x) -> FqPoly:
    return x if isinstance(x, FqPoly) else FqPoly.from_ints(field, [int(x)])


def smith_invariants(matrix, field: FqField, cols: int | None = None) -> InvariantFactors:
    """
    Invariant factors of the cokernel of a relation matrix.

    Rows of `matrix` are relations among `cols` generators, so the presented
    module is A^cols / rowspace; there is one factor per generator.
    """
    m = [[_as_poly(field, x) for x in row] for row in matrix]
    R = len(m)
    C = cols if cols is not None else (len(m[0]) if m else 0)
    zero = FqPoly(field)
    diag: list[FqPoly] = []
    k = 0
    while k < min(R, C):
        entries = [(m[i][j].degree, i, j) for i in range(k, R) for j in range(k, C) if not m[i][j].is_zero]
        if not entries:
            break
        _, i0, j0 = min(entries)
        m[k], m[i0] = m[i0], m[k]
        for row in m:
            row[k], row[j0] = row[j0], row[k]
        while True:
            clean = True
            for i in range(k + 1, R):
                if m[i][k].is_zero:
                    continue
                quot, rem = divmod(m[i][k], m[k][k])
                m[i] = [a - quot * b for a, b in zip(m[i], m[k])]
                if not rem.is_zero:
                    m[k], m[i] = m[i], m[k]
                    clean = False
            for j in range(k + 1, C):
                if m[k][j].is_zero:
                    continue
                quot, rem = divmod(m[k][j], m[k][k])
                for row in m:
                    row[j] = row[j] - quot * row[k]
                if not rem.is_zero:
                    for row in m:
                        row[k], row[j] = row[j], row[k]
                    clean = False
            if not clean:
                continue
            bad = next((i for i in range(k + 1, R) for j in range(k + 1, C)
                        if not m[k][k].divides(m[i][j])), None)
            if bad is None:
                break
            m[k] = [a + b for a, b in zip(m[k], m[bad])]
        diag.append(m[k][k].monic())
        k += 1
    factors = tuple(diag) + (zero,) * (C - len(diag))
    logger.debug(f"Smith invariants: {[repr(f) for f in factors]}")
    return InvariantFactors(factors)


def hnf(rows, width: int, field: FqField) -> list[list[FqPoly]]:
    """
    Row Hermite normal form of the A-module spanned by `rows`.

    Pivots move strictly right, are monic, and every entry above a pivot has
    smaller degree than the pivot. Zero rows are dropped.
    """
    m = [[_as_poly(field, x) for x in row] for row in rows]
    m = [row for row in m if any(not x.is_zero for x in row)]
    r = 0
    for c in range(width):
        if r >= len(m):
            break
        while True:
            live = [i for i in range(r, len(m)) if not m[i][c].is_zero]
            if not live:
                break
            i0 = min(live, key=lambda i: m[i][c].degree)
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c].is_zero:
                    continue
                quot = m[i][c] // m[r][c]
                m[i] = [a - quot * b for a, b in zip(m[i], m[r])]
                if not m[i][c].is_zero:
                    done = False
            if done:
                break
        if m[r][c].is_zero:
            continue
        lead = int(field.inv(m[r][c].leading))
        m[r] = [x.scale(lead) for x in m[r]]
        for i in range(r):
            if m[i][c].is_zero:
                continue
            quot = m[i][c] // m[r][c]
            m[i] = [a - quot * b for a, b in zip(m[i], m[r])]
        r += 1
    return m[:r]


def pivot_column(row: list[FqPoly]) -> int:
    return next(j for j, x in enumerate(row) if not x.is_zero)


def hnf_reduce(basis: list[list[FqPoly]], vector) -> list[FqPoly]:
    """Remainder of a vector after reduction by an HNF basis; zero iff the vector lies in the span."""
    if not basis:
        return list(vector)
    field = basis[0][0].field
    v = [_as_poly(field, x) for x in vector]
    for row in basis:
        c = pivot_column(row)
        if v[c].is_zero:
            continue
        quot = v[c] // row[c]
        v = [a - quot * b for a, b in zip(v, row)]
    return v


def hnf_contains(basis: list[list[FqPoly]], vector) -> bool:
    return all(x.is_zero for x in hnf_reduce(basis, vector))
