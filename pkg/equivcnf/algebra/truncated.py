"""
Ring contexts for division-free linear algebra.

A ring context exposes `elem_shape`, `zeros`, `ones`, `add`, `sub`, `neg`,
`mul` and `sum`, all broadcasting over leading axes. FiniteAlgebra is one
(elements of shape (dim,)); TruncatedRing is R[s]/s^P over a commutative
FiniteAlgebra R (elements of shape (P, dim)). Polynomial determinants over R
run in TruncatedRing with P above the degree bound, since truncation is a
ring homomorphism.
"""
import logging

import numpy as np

from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.errors import InvertZero

logger = logging.getLogger(__name__)


class TruncatedRing:
    def __init__(self, algebra: FiniteAlgebra, precision: int):
        if precision < 1:
            raise ValueError(f"Truncation order must be positive, got {precision}")
        self.algebra = algebra
        self.field = algebra.field
        self.precision = precision
        self.elem_shape = (precision, algebra.dim)

    def __repr__(self) -> str:
        return f"TruncatedRing({self.algebra.name}[s]/s^{self.precision})"

    def zeros(self, shape=()) -> np.ndarray:
        shape = (shape,) if isinstance(shape, (int, np.integer)) else tuple(shape)
        return np.zeros(shape + self.elem_shape, dtype=np.int64)

    def ones(self, shape=()) -> np.ndarray:
        out = self.zeros(shape)
        out[..., 0, :] = self.algebra.one
        return out

    def constant(self, value) -> np.ndarray:
        """Embed algebra elements (..., dim) as constant series."""
        value = np.asarray(value, dtype=np.int64)
        out = np.zeros(value.shape[:-1] + self.elem_shape, dtype=np.int64)
        out[..., 0, :] = value
        return out

    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        P = self.precision
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for i in range(P):
            ai = a[..., i:i + 1, :]
            if not ai.any():
                continue
            out[..., i:, :] = self.field.add(out[..., i:, :], self.algebra.mul(ai, b[..., :P - i, :]))
        return out

    def sum(self, a, axis: int):
        a = np.asarray(a, dtype=np.int64)
        return self.field.sum(a, axis=axis % (a.ndim - 2))

    def is_unit(self, a) -> bool:
        return self.algebra.is_unit(np.asarray(a)[0])

    def inverse(self, a) -> np.ndarray:
        """Inverse of a single element with unit constant term."""
        a = np.asarray(a, dtype=np.int64)
        alg = self.algebra
        if not alg.is_unit(a[0]):
            raise InvertZero("Constant term is not a unit")
        c_inv = alg.inverse(a[0])
        neg_c_inv = alg.neg(c_inv)
        b = self.zeros()
        b[0] = c_inv
        for k in range(1, self.precision):
            acc = alg.sum(alg.mul(a[1:k + 1], b[k - 1::-1]), axis=0)
            b[k] = alg.mul(neg_c_inv, acc)
        return b


def charpoly(ring, matrix) -> np.ndarray:
    """
    Coefficients (low to high) of det(x*I - matrix) by Berkowitz's division-free recursion.

    `matrix` has shape (n, n) + ring.elem_shape; the result has shape (n + 1,) + ring.elem_shape.
    """
    A = np.asarray(matrix, dtype=np.int64)
    n = A.shape[0]
    if n == 0:
        return ring.ones((1,))
    poly = ring.zeros((2,))
    poly[0] = ring.ones()
    poly[1] = ring.neg(A[0, 0])
    for r in range(1, n):
        sub = A[:r, :r]
        row = A[r, :r]
        col = A[:r, r]
        items = ring.zeros((r + 2,))
        items[0] = ring.ones()
        items[1] = ring.neg(A[r, r])
        v = col
        for i in range(r):
            items[i + 2] = ring.neg(ring.sum(ring.mul(row, v), axis=0))
            if i + 1 < r:
                v = ring.sum(ring.mul(sub, v[None, :]), axis=1)
        new = ring.zeros((r + 2,))
        for j in range(r + 1):
            new[j:] = ring.add(new[j:], ring.mul(items[: r + 2 - j], poly[j]))
        poly = new
    return poly[::-1].copy()


def det_commutative(ring, matrix) -> np.ndarray:
    """Division-free determinant over a commutative ring context."""
    A = np.asarray(matrix, dtype=np.int64)
    n = A.shape[0]
    if A.shape[:2] != (n, n):
        raise ValueError(f"Determinant needs a square matrix, got {A.shape[:2]}")
    c0 = charpoly(ring, A)[0]
    return ring.neg(c0) if n % 2 else c0


def cofactor_det(ring, matrix) -> np.ndarray:
    """Laplace expansion along the first row; reference implementation for small sizes."""
    A = np.asarray(matrix, dtype=np.int64)
    n = A.shape[0]
    if n == 0:
        return ring.ones()
    if n == 1:
        return A[0, 0].copy()
    total = ring.zeros()
    for j in range(n):
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        term = ring.mul(A[0, j], cofactor_det(ring, minor))
        total = ring.sub(total, term) if j % 2 else ring.add(total, term)
    return total


def matmul(ring, a, b) -> np.ndarray:
    """Product of matrices over a (possibly non-commutative) ring context."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    prods = ring.mul(np.expand_dims(a, axis=2), np.expand_dims(b, axis=0))
    return ring.sum(prods, axis=1)
