"""
Laurent series in 1/t with coefficients in a finite commutative F_q-algebra.

F_inf = F_q((1/t)) is the case of the one-dimensional algebra F_q; F_inf[G]
uses the group algebra. A series is either exact (only finitely many nonzero
coefficients, all known) or truncated: coefficients below `floor` are unknown.
"""
import logging

import numpy as np

from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.poly import FqPoly
from equivcnf.errors import InvertZero, PrecisionExhausted

logger = logging.getLogger(__name__)


def _convolve(algebra: FiniteAlgebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient array of the product of two coefficient arrays (low to high)."""
    f = algebra.field
    if algebra.dim == 1 and algebra._unit_product:
        return f.convolve(a[:, 0], b[:, 0])[:, None]
    d = algebra.dim
    length = a.shape[0] + b.shape[0] - 1
    convs = np.zeros((d, d, length), dtype=np.int64)
    for i in range(d):
        if not a[:, i].any():
            continue
        for j in range(d):
            if b[:, j].any():
                convs[i, j] = f.convolve(a[:, i], b[:, j])
    if f.is_prime:
        return np.einsum("ijl,ijk->lk", convs, algebra.structure) % f.q
    terms = f.mul(convs[:, :, :, None], algebra.structure[:, :, None, :])
    return f.sum(terms, axis=(0, 1))


class LaurentSeries:
    __slots__ = ("algebra", "low", "coeffs", "floor")

    def __init__(self, algebra: FiniteAlgebra, coeffs, low: int, floor: int | None = None):
        coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, algebra.dim)
        if floor is not None and low < floor:
            coeffs = coeffs[floor - low:]
            low = floor
        if floor is not None and low > floor:
            pad = np.zeros((low - floor, algebra.dim), dtype=np.int64)
            coeffs = np.concatenate([pad, coeffs]) if coeffs.shape[0] else coeffs
            low = floor
        nonzero = np.nonzero(coeffs.any(axis=1))[0]
        if nonzero.size == 0:
            coeffs = coeffs[:0]
            low = floor if floor is not None else 0
        else:
            hi = int(nonzero[-1]) + 1
            lo = 0 if floor is not None else int(nonzero[0])
            coeffs = coeffs[lo:hi]
            low = low + lo
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "floor", floor)

    def __setattr__(self, key, value):
        raise AttributeError("LaurentSeries is immutable")

    # constructors

    @classmethod
    def zero(cls, algebra: FiniteAlgebra, floor: int | None = None) -> "LaurentSeries":
        return cls(algebra, np.zeros((0, algebra.dim)), floor if floor is not None else 0, floor)

    @classmethod
    def constant(cls, algebra: FiniteAlgebra, value) -> "LaurentSeries":
        return cls(algebra, np.asarray(value)[None, :], 0)

    @classmethod
    def one(cls, algebra: FiniteAlgebra) -> "LaurentSeries":
        return cls.constant(algebra, algebra.one)

    @classmethod
    def monomial(cls, algebra: FiniteAlgebra, exponent: int, value=None) -> "LaurentSeries":
        value = algebra.one if value is None else value
        return cls(algebra, np.asarray(value)[None, :], exponent)

    @classmethod
    def from_poly(cls, poly: FqPoly, algebra: FiniteAlgebra | None = None) -> "LaurentSeries":
        """A polynomial over F_q, embedded through the unit of `algebra`."""
        algebra = algebra or poly.field.algebra
        c = poly.array()
        return cls(algebra, c[:, None] * algebra.one[None, :] % poly.field.q if poly.field.is_prime
                   else poly.field.mul(c[:, None], algebra.one[None, :]), 0)

    @classmethod
    def from_scalars(cls, algebra: FiniteAlgebra, terms: dict[int, int], floor: int | None = None) -> "LaurentSeries":
        """Series sum c*t^k from a mapping exponent -> F_q scalar."""
        if not terms:
            return cls.zero(algebra, floor)
        lo, hi = min(terms), max(terms)
        arr = np.zeros((hi - lo + 1, algebra.dim), dtype=np.int64)
        for k, c in terms.items():
            arr[k - lo] = algebra.field.mul(algebra.one, c)
        return cls(algebra, arr, lo, floor)

    # structure

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    @property
    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    @property
    def top(self) -> int | None:
        return None if self.is_zero else self.low + self.coeffs.shape[0] - 1

    @property
    def effective_top(self) -> float:
        """Top exponent, or floor - 1 for a series known only to vanish down to its floor."""
        if not self.is_zero:
            return self.top
        return float("-inf") if self.floor is None else self.floor - 1

    @property
    def field(self):
        return self.algebra.field

    def leading(self) -> np.ndarray:
        if self.is_zero:
            raise InvertZero("Zero series has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> np.ndarray:
        if self.floor is not None and k < self.floor:
            raise PrecisionExhausted(f"Coefficient of t^{k} is below the known floor {self.floor}")
        idx = k - self.low
        if idx < 0 or idx >= self.coeffs.shape[0]:
            return np.zeros(self.algebra.dim, dtype=np.int64)
        return self.coeffs[idx]

    def scalar_coefficient(self, k: int) -> int:
        return int(self.coefficient(k)[0])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for exponents lo..hi (low to high); raises when lo is below the floor."""
        if self.floor is not None and lo < self.floor:
            raise PrecisionExhausted(f"Window starting at t^{lo} is below the known floor {self.floor}")
        out = np.zeros((hi - lo + 1, self.algebra.dim), dtype=np.int64)
        if self.is_zero or hi < lo:
            return out
        a, b = max(lo, self.low), min(hi, self.top)
        if a <= b:
            out[a - lo:b - lo + 1] = self.coeffs[a - self.low:b - self.low + 1]
        return out

    def terms(self) -> dict[int, list[int]]:
        """Nonzero coefficients keyed by exponent, for reports."""
        return {self.low + i: [int(x) for x in c] for i, c in enumerate(self.coeffs) if c.any()}

    def __repr__(self) -> str:
        body = " + ".join(
            f"{v if len(v) > 1 else v[0]}*t^{k}" for k, v in sorted(self.terms().items(), reverse=True)) or "0"
        return body if self.floor is None else f"{body} + O(t^{self.floor - 1})"

    # arithmetic

    def _check(self, other: "LaurentSeries"):
        if other.algebra is not self.algebra and other.algebra.dim != self.algebra.dim:
            raise ValueError("Series over different coefficient algebras")

    @staticmethod
    def _meet(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return max(a, b)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        floor = self._meet(self.floor, other.floor)
        if self.is_zero and other.is_zero:
            return LaurentSeries.zero(self.algebra, floor)
        lo = min(s.low for s in (self, other) if not s.is_zero)
        hi = max(s.top for s in (self, other) if not s.is_zero)
        if floor is not None:
            lo = max(lo, floor)
            if hi < lo:
                return LaurentSeries.zero(self.algebra, floor)
        a = self._padded(lo, hi)
        b = other._padded(lo, hi)
        return LaurentSeries(self.algebra, self.field.add(a, b), lo, floor)

    def _padded(self, lo: int, hi: int) -> np.ndarray:
        out = np.zeros((hi - lo + 1, self.algebra.dim), dtype=np.int64)
        if self.is_zero:
            return out
        a, b = max(lo, self.low), min(hi, self.top)
        if a <= b:
            out[a - lo:b - lo + 1] = self.coeffs[a - self.low:b - self.low + 1]
        return out

    def __neg__(self):
        return LaurentSeries(self.algebra, self.field.neg(self.coeffs), self.low, self.floor)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def product_floor(self, other: "LaurentSeries") -> int | None:
        if self.floor is None and other.floor is None:
            return None
        candidates = []
        if self.floor is not None:
            candidates.append(self.floor + other.effective_top)
        if other.floor is not None:
            candidates.append(other.floor + self.effective_top)
        floor = max(candidates)
        return None if floor == float("-inf") else int(floor)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check(other)
        if (self.is_zero and self.is_exact) or (other.is_zero and other.is_exact):
            return LaurentSeries.zero(self.algebra)
        floor = self.product_floor(other)
        if self.is_zero or other.is_zero:
            return LaurentSeries.zero(self.algebra, floor)
        a, a_low = self.coeffs, self.low
        b, b_low = other.coeffs, other.low
        if floor is not None:
            # drop terms that only reach exponents below the result floor
            cut_a = floor - other.top - a_low
            if cut_a > 0:
                a, a_low = a[cut_a:], a_low + cut_a
            cut_b = floor - self.top - b_low
            if cut_b > 0:
                b, b_low = b[cut_b:], b_low + cut_b
            if a.shape[0] == 0 or b.shape[0] == 0:
                return LaurentSeries.zero(self.algebra, floor)
        return LaurentSeries(self.algebra, _convolve(self.algebra, a, b), a_low + b_low, floor)

    def scale(self, value) -> "LaurentSeries":
        """Multiply by a constant algebra element."""
        return self * LaurentSeries.constant(self.algebra, value)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries(self.algebra, self.coeffs, self.low + k, None if self.floor is None else self.floor + k)

    def truncate(self, floor: int) -> "LaurentSeries":
        new_floor = floor if self.floor is None else max(floor, self.floor)
        return LaurentSeries(self.algebra, self.coeffs, self.low, new_floor)

    def substitute_power(self, q: int) -> "LaurentSeries":
        """x(t) -> x(t^q); the q-power Frobenius when the coefficients lie in F_q."""
        if self.is_zero:
            return LaurentSeries.zero(self.algebra, None if self.floor is None else q * (self.floor - 1) + 1)
        n = self.coeffs.shape[0]
        out = np.zeros(((n - 1) * q + 1, self.algebra.dim), dtype=np.int64)
        out[::q] = self.coeffs
        floor = None if self.floor is None else q * (self.floor - 1) + 1
        return LaurentSeries(self.algebra, out, self.low * q, floor)

    def map_coefficients(self, matrix, target: FiniteAlgebra) -> "LaurentSeries":
        """Apply an F_q-linear map (target.dim x dim matrix) to every coefficient."""
        m = np.asarray(matrix, dtype=np.int64)
        if self.is_zero:
            return LaurentSeries.zero(target, self.floor)
        mapped = self.field.dot(self.coeffs, m.T)
        return LaurentSeries(target, mapped, self.low, self.floor)

    def inverse(self, floor: int | None = None) -> "LaurentSeries":
        """
        Multiplicative inverse known to `floor` (or to the natural floor of a truncated input).

        Requires a commutative coefficient algebra. A unit leading coefficient uses the
        direct recursion; otherwise the inverse is assembled over the primitive idempotents.
        """
        if self.is_zero:
            raise InvertZero("Cannot invert a zero series")
        top = self.top
        natural = None if self.floor is None else self.floor - 2 * top
        if natural is None and floor is None:
            raise ValueError("Inverting an exact series needs a target floor")
        target = natural if floor is None else (floor if natural is None else max(floor, natural))
        if self.algebra.is_unit(self.leading()):
            return self._unit_leading_inverse(target)
        return self._componentwise_inverse(target)

    def _unit_leading_inverse(self, target: int) -> "LaurentSeries":
        alg = self.algebra
        top = self.top
        n = -top - target + 1
        if n <= 0:
            return LaurentSeries.zero(alg, target)
        known = top - (self.floor if self.floor is not None else self.low) + 1
        a = self.coeffs[::-1][: min(n, known)]
        c_inv = alg.inverse(a[0])
        neg_c_inv = alg.neg(c_inv)
        b = np.zeros((n, alg.dim), dtype=np.int64)
        b[0] = c_inv
        for k in range(1, n):
            m = min(k, a.shape[0] - 1)
            if m <= 0:
                continue
            acc = alg.sum(alg.mul(a[1:m + 1], b[k - 1::-1][:m]), axis=0)
            b[k] = alg.mul(neg_c_inv, acc)
        return LaurentSeries(alg, b[::-1], target, target)

    def _componentwise_inverse(self, target: int) -> "LaurentSeries":
        alg = self.algebra
        result = LaurentSeries.zero(alg, target)
        for e in alg.idempotents:
            part = self.scale(e)
            d = next((k for k in range(part.effective_top, part.low - 1, -1)
                      if alg.is_unit_in(part.coefficient(k), e)), None) if not part.is_zero else None
            if d is None:
                raise InvertZero("Series is not a unit in some local component")
            c_inv = alg.inverse_in(part.coefficient(d), e)
            z = part.scale(c_inv).shift(-d)
            step = LaurentSeries.constant(alg, e) - z
            inv_z = LaurentSeries.constant(alg, e)
            power = LaurentSeries.constant(alg, e)
            quiet = 0
            work_floor = target + d
            for _ in range(4 * alg.dim + 2 * (d - work_floor) + 8):
                power = (power * step).truncate(work_floor)
                if power.is_zero or power.top < work_floor:
                    quiet += 1
                    if quiet > alg.dim:
                        break
                else:
                    quiet = 0
                inv_z = inv_z + power
            component = (inv_z.truncate(work_floor).scale(c_inv)).shift(-d)
            result = result + component
        if result.floor is not None and result.floor > target:
            raise PrecisionExhausted(f"Inverse known only to t^{result.floor}, wanted t^{target}")
        return result.truncate(target)

    # comparison

    def first_difference(self, other: "LaurentSeries") -> int | None:
        """Highest exponent in the common known window where the series differ."""
        floor = self._meet(self.floor, other.floor)
        diff = self - other
        if diff.is_zero:
            return None
        if floor is not None and diff.top < floor:
            return None
        return diff.top

    def agrees_to(self, other: "LaurentSeries", floor: int) -> bool:
        for s in (self, other):
            if s.floor is not None and s.floor > floor:
                raise PrecisionExhausted(f"Series known only to t^{s.floor}, comparison needs t^{floor}")
        diff = (self - other).truncate(floor)
        return diff.is_zero

    def polynomial_part(self) -> "LaurentSeries":
        """Terms with nonnegative exponents, as an exact series."""
        if self.floor is not None and self.floor > 0:
            raise PrecisionExhausted("Polynomial part is not fully known")
        if self.is_zero or self.top < 0:
            return LaurentSeries.zero(self.algebra)
        start = max(0, self.low)
        return LaurentSeries(self.algebra, self.coeffs[start - self.low:], start)

    def fractional_part(self) -> "LaurentSeries":
        """Terms with negative exponents."""
        if self.is_zero or self.low >= 0:
            return LaurentSeries.zero(self.algebra, self.floor)
        end = min(self.top, -1)
        return LaurentSeries(self.algebra, self.coeffs[: end - self.low + 1], self.low, self.floor)

    def to_poly(self) -> FqPoly:
        """Exact nonnegative series over F_q as a polynomial."""
        if self.algebra.dim != 1:
            raise ValueError("Only scalar series convert to polynomials")
        part = self.polynomial_part()
        if part.is_zero:
            return FqPoly(self.field)
        return FqPoly(self.field, np.concatenate([np.zeros(part.low, dtype=np.int64), part.coeffs[:, 0]]))


def laurent_arith(op: str, *operands: LaurentSeries, floor: int | None = None) -> LaurentSeries:
    """Dispatch entry for the four primitive series operations."""
    if op == "add":
        out = operands[0]
        for x in operands[1:]:
            out = out + x
    elif op == "mul":
        out = operands[0]
        for x in operands[1:]:
            out = out * x
    elif op == "invert":
        out = operands[0].inverse(floor)
    elif op == "truncate":
        out = operands[0].truncate(floor)
    else:
        raise ValueError(f"Unknown series operation {op!r}")
    if out.floor is not None and out.is_zero and floor is not None and out.floor > floor:
        raise PrecisionExhausted(f"Result window is empty above t^{floor}")
    return out


def laurent_det(algebra: FiniteAlgebra, matrix, floor: int | None = None) -> LaurentSeries:
    """
    Determinant of a square matrix of series over a commutative algebra.

    Each row is scaled by t^(-top) so the entries become power series in 1/t,
    the determinant is taken in the truncated ring and scaled back. With only
    exact entries the result is exact unless `floor` asks for less.
    """
    from equivcnf.algebra.truncated import TruncatedRing, det_commutative

    n = len(matrix)
    if n == 0:
        return LaurentSeries.one(algebra)
    tops, exact_span = [], 0
    for row in matrix:
        if all(x.is_zero and x.is_exact for x in row):
            return LaurentSeries.zero(algebra)
        top = int(max(x.effective_top for x in row if not (x.is_zero and x.is_exact)))
        tops.append(top)
        exact_span += max(top - x.low for x in row if not x.is_zero) if any(not x.is_zero for x in row) else 0
    total = sum(tops)
    lengths = [tops[r] - x.floor + 1 for r, row in enumerate(matrix) for x in row if x.floor is not None]
    if lengths:
        P = min(lengths)
    elif floor is not None:
        P = total - floor + 1
    else:
        P = exact_span + 1
    if P < 1:
        raise PrecisionExhausted("Determinant has no known coefficient")
    ring = TruncatedRing(algebra, P)
    entries = ring.zeros((n, n))
    for r, row in enumerate(matrix):
        for c, x in enumerate(row):
            entries[r, c] = x.window(tops[r] - P + 1, tops[r])[::-1]
    d = det_commutative(ring, entries)
    low = total - P + 1
    exact = not lengths and floor is None
    return LaurentSeries(algebra, d[::-1], low, None if exact else low)
