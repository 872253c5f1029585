import logging
from functools import lru_cache

import numpy as np

from equivcnf.algebra.field import FqField
from equivcnf.errors import InvertZero

logger = logging.getLogger(__name__)

# degree reported by the zero polynomial
ZERO_DEGREE = -1


class FqPoly:
    """
    Immutable dense polynomial in t over F_q, coefficients low to high.

    The canonical form has no trailing zero coefficient; the zero polynomial has
    an empty coefficient tuple and degree ZERO_DEGREE.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs=()):
        c = [int(x) for x in np.asarray(coeffs, dtype=np.int64).reshape(-1)] if len(coeffs) else []
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, key, value):
        raise AttributeError("FqPoly is immutable")

    @classmethod
    def from_ints(cls, field: FqField, coeffs) -> "FqPoly":
        """Integer coefficient list reduced through the prime field."""
        return cls(field, [field.element(c) for c in coeffs])

    @classmethod
    def constant(cls, field: FqField, c: int) -> "FqPoly":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: FqField, degree: int, c: int = 1) -> "FqPoly":
        return cls(field, [0] * degree + [c])

    @classmethod
    def t(cls, field: FqField) -> "FqPoly":
        return cls.monomial(field, 1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def array(self, length: int | None = None) -> np.ndarray:
        out = np.array(self.coeffs, dtype=np.int64)
        if length is not None:
            out = np.concatenate([out, np.zeros(max(0, length - out.size), dtype=np.int64)])[:length]
        return out

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if k == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = FqPoly.from_ints(self.field, [other])
        return isinstance(other, FqPoly) and self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def _coerce(self, other) -> "FqPoly":
        if isinstance(other, FqPoly):
            return other
        if isinstance(other, (int, np.integer)):
            return FqPoly.from_ints(self.field, [int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, self.field.add(self.array(n), other.array(n)))

    __radd__ = __add__

    def __neg__(self):
        return FqPoly(self.field, self.field.neg(self.array()))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, self.field.sub(self.array(n), other.array(n)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return FqPoly(self.field)
        return FqPoly(self.field, self.field.convolve(self.array(), other.array()))

    __rmul__ = __mul__

    def scale(self, c: int) -> "FqPoly":
        return FqPoly(self.field, self.field.mul(self.array(), c))

    def shift(self, k: int) -> "FqPoly":
        """Multiply by t^k."""
        if self.is_zero:
            return self
        return FqPoly(self.field, [0] * k + list(self.coeffs))

    def __pow__(self, n: int) -> "FqPoly":
        result = FqPoly.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "FqPoly"):
        other = self._coerce(other)
        if other.is_zero:
            raise InvertZero("Polynomial division by zero")
        f = self.field
        r = self.array()
        db = other.degree
        if self.degree < db:
            return FqPoly(f), self
        b = other.array()
        inv_lead = int(f.inv(other.leading))
        quot = np.zeros(self.degree - db + 1, dtype=np.int64)
        for k in range(self.degree, db - 1, -1):
            c = int(r[k])
            if not c:
                continue
            c = int(f.mul(c, inv_lead))
            quot[k - db] = c
            r[k - db:k + 1] = f.sub(r[k - db:k + 1], f.mul(b, c))
        return FqPoly(f, quot), FqPoly(f, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "FqPoly") -> bool:
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    def monic(self) -> "FqPoly":
        if self.is_zero:
            return self
        return self.scale(int(self.field.inv(self.leading)))

    def derivative(self) -> "FqPoly":
        c = [self.field.mul(self.coeffs[k], self.field.element(k)) for k in range(1, len(self.coeffs))]
        return FqPoly(self.field, c)

    def spread(self, q: int) -> "FqPoly":
        """f(t^q); for coefficients in F_q this is also f^q."""
        if self.is_zero:
            return self
        out = [0] * ((len(self.coeffs) - 1) * q + 1)
        for k, c in enumerate(self.coeffs):
            out[k * q] = c
        return FqPoly(self.field, out)

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = int(self.field.add(self.field.mul(acc, x), c))
        return acc

    def powmod(self, n: int, modulus: "FqPoly") -> "FqPoly":
        result = FqPoly.constant(self.field, 1) % modulus
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return result


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: FqPoly, b: FqPoly) -> tuple[FqPoly, FqPoly, FqPoly]:
    """Monic g with s*a + u*b = g."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = FqPoly.constant(f, 1), FqPoly(f)
    u0, u1 = FqPoly(f), FqPoly.constant(f, 1)
    while not r1.is_zero:
        quot, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        u0, u1 = u1, u0 - quot * u1
    if r0.is_zero:
        return r0, s0, u0
    c = int(f.inv(r0.leading))
    return r0.scale(c), s0.scale(c), u0.scale(c)


def poly_lcm(a: FqPoly, b: FqPoly) -> FqPoly:
    if a.is_zero or b.is_zero:
        return FqPoly(a.field)
    return ((a * b) // poly_gcd(a, b)).monic()


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: FqPoly) -> bool:
    """Rabin test: t^(q^n) = t mod f and gcd(t^(q^(n/r)) - t, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    q = f.field.q
    t = FqPoly.t(f.field)

    def frob_power(k: int) -> FqPoly:
        x = t % f
        for _ in range(k):
            x = x.powmod(q, f)
        return x

    if not (frob_power(n) - t).__mod__(f).is_zero:
        return False
    for r in _prime_divisors(n):
        if poly_gcd(frob_power(n // r) - t, f).degree > 0:
            return False
    return True


def monic_polynomials(field: FqField, degree: int):
    """All monic polynomials of the given degree, ordered by coefficients high to low."""
    q = field.q
    for code in range(q ** degree):
        digits = [(code // q ** (degree - 1 - k)) % q for k in range(degree)]
        yield FqPoly(field, digits + [1])


@lru_cache(maxsize=64)
def enumerate_monic_irreducibles(field: FqField, d: int) -> tuple[FqPoly, ...]:
    """Monic irreducibles of degree <= d sorted by (degree, coefficients from the top)."""
    if d < 1:
        raise ValueError(f"Degree bound must be positive, got {d}")
    out: list[FqPoly] = []
    for m in range(1, d + 1):
        found = [f for f in monic_polynomials(field, m) if is_irreducible(f)]
        found.sort(key=lambda f: tuple(reversed(f.coeffs)))
        logger.debug(f"{len(found)} monic irreducibles of degree {m} over F_{field.q}")
        out.extend(found)
    return tuple(out)


def necklace_count(q: int, m: int) -> int:
    """Number of monic irreducibles of degree m over F_q (Moebius formula)."""
    def mobius(n: int) -> int:
        primes = _prime_divisors(n)
        for p in primes:
            if n % (p * p) == 0:
                return 0
        return -1 if len(primes) % 2 else 1

    return sum(mobius(d) * q ** (m // d) for d in range(1, m + 1) if m % d == 0) // m
