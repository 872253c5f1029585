import logging
from functools import cached_property

import numpy as np

from equivcnf import constants
from equivcnf.errors import InvertZero, ConfigError

logger = logging.getLogger(__name__)


def _small_poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo a monic m, coefficients in F_p, low to high."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        c = a[-1]
        if c:
            shift = len(a) - 1 - dm
            for i, mc in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _small_irreducible(m: list[int], p: int) -> bool:
    degree = len(m) - 1
    for d in range(1, degree // 2 + 1):
        for code in range(p ** d):
            cand = [(code // p ** k) % p for k in range(d)] + [1]
            if not _small_poly_mod(m, cand, p):
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """First monic irreducible of degree e over F_p in lexicographic order."""
    if e == 1:
        return (0, 1)
    for code in range(p ** e):
        cand = [(code // p ** k) % p for k in range(e)] + [1]
        if cand[0] != 0 and _small_irreducible(cand, p):
            return tuple(cand)
    raise ConfigError(f"No irreducible polynomial of degree {e} over F_{p}")


class FqField:
    """
    The finite field F_q with q = l^e.

    Elements are integers 0..q-1 whose base-l digits are the coefficients of a
    polynomial in the generator alpha modulo `modulus`. In particular the prime
    field F_l sits inside as the integers 0..l-1. All arithmetic methods accept
    numpy arrays (or Python ints) and work elementwise.
    """

    def __init__(self, char: int, degree: int = 1, modulus: tuple[int, ...] | None = None):
        if char < 2 or any(char % d == 0 for d in range(2, int(char ** 0.5) + 1)):
            raise ConfigError(f"Characteristic {char} is not a prime")
        if degree < 1:
            raise ConfigError(f"Extension degree must be positive, got {degree}")
        self.char = char
        self.degree = degree
        self.q = char ** degree
        if self.q > constants.MAX_ZECH_FIELD:
            raise ConfigError(f"Field of size {self.q} exceeds the supported table size")
        if modulus is None:
            modulus = default_modulus(char, degree)
        modulus = tuple(int(c) % char for c in modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise ConfigError(f"Modulus {modulus} is not monic of degree {degree}")
        if degree > 1 and not _small_irreducible(list(modulus), char):
            raise ConfigError(f"Modulus {modulus} is reducible over F_{char}")
        self.modulus = modulus
        self.is_prime = degree == 1
        self._weights = char ** np.arange(degree, dtype=np.int64)
        if not self.is_prime:
            self._build_tables()

    def __repr__(self) -> str:
        return f"FqField(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FqField) and (self.char, self.degree, self.modulus) == (
            other.char, other.degree, other.modulus)

    def __hash__(self) -> int:
        return hash((self.char, self.degree, self.modulus))

    def _slow_mul(self, a: int, b: int) -> int:
        p = self.char
        da = [(a // p ** k) % p for k in range(self.degree)]
        db = [(b // p ** k) % p for k in range(self.degree)]
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        rem = _small_poly_mod(prod, list(self.modulus), p)
        return sum(c * p ** k for k, c in enumerate(rem))

    def _build_tables(self):
        order = self.q - 1
        for g in range(2, self.q):
            exp = np.zeros(order, dtype=np.int64)
            x = 1
            for i in range(order):
                exp[i] = x
                x = self._slow_mul(x, g)
                if x == 1 and i + 1 < order:
                    break
            else:
                self._exp = exp
                self._log = np.zeros(self.q, dtype=np.int64)
                self._log[exp] = np.arange(order, dtype=np.int64)
                logger.debug(f"Built Zech tables for F_{self.q} with generator {g}")
                return
        raise ConfigError(f"No primitive element found for F_{self.q}")

    # digits

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.char

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.char) @ self._weights

    # arithmetic

    def element(self, value: int) -> int:
        """Embed an integer through the prime field."""
        return int(value) % self.char

    def add(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) + b) % self.q
        return self.from_digits(self.to_digits(a) + self.to_digits(b))

    def sub(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) - b) % self.q
        return self.from_digits(self.to_digits(a) - self.to_digits(b))

    def neg(self, a):
        if self.is_prime:
            return (-np.asarray(a, dtype=np.int64)) % self.q
        return self.from_digits(-self.to_digits(a))

    def mul(self, a, b):
        if self.is_prime:
            return (np.asarray(a, dtype=np.int64) * b) % self.q
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise InvertZero("Cannot invert zero in F_q")
        if self.is_prime:
            return np.asarray(pow_mod_array(a, self.q - 2, self.q))
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def power(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        base = a
        if n < 0:
            base, n = self.inv(a), -n
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime:
            return a.sum(axis=axis) % self.q
        if axis is None:
            return int(self.from_digits(self.to_digits(a.reshape(-1)).sum(axis=0)))
        axes = np.atleast_1d(axis)
        axes = tuple(int(x) % a.ndim for x in axes)
        return self.from_digits(self.to_digits(a).sum(axis=axes))

    def dot(self, a, b):
        """Matrix product over F_q, numpy matmul semantics."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a @ b) % self.q
        if b.ndim == 1:
            return self.sum(self.mul(a, b), axis=-1)
        return self.sum(self.mul(a[..., :, :, None], b[..., None, :, :]), axis=-2)

    def convolve(self, a, b):
        """Coefficient sequence of the product of two polynomials, low to high."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return np.zeros(0, dtype=np.int64)
        if self.is_prime:
            return np.convolve(a, b) % self.q
        digits = self.to_digits(self.mul(a[:, None], b[None, :]))
        out = np.zeros((a.size + b.size - 1, self.degree), dtype=np.int64)
        for i in range(a.size):
            out[i:i + b.size] += digits[i]
        return self.from_digits(out)

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def algebra(self):
        """F_q viewed as a one-dimensional algebra over itself."""
        from equivcnf.algebra.finite_algebra import FiniteAlgebra

        return FiniteAlgebra.field_algebra(self)


def pow_mod_array(a: np.ndarray, n: int, m: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % m
    while n:
        if n & 1:
            result = (result * base) % m
        base = (base * base) % m
        n >>= 1
    return result
