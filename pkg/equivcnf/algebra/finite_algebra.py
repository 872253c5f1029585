import logging
from functools import cached_property

import numpy as np

from equivcnf.algebra import linalg
from equivcnf.algebra.field import FqField
from equivcnf.errors import InvertZero

logger = logging.getLogger(__name__)


class FiniteAlgebra:
    """
    A finite-dimensional associative unital F_q-algebra given by structure constants.

    Elements are numpy vectors of length `dim`; `structure[i, j, k]` is the
    coefficient of basis element k in the product b_i * b_j. Every arithmetic
    method broadcasts over leading axes, so a matrix over the algebra is simply
    an array of shape (rows, cols, dim).
    """

    def __init__(self, field: FqField, structure, one, labels=None, name: str = ""):
        self.field = field
        self.structure = np.asarray(structure, dtype=np.int64) % field.q
        self.dim = self.structure.shape[0]
        if self.structure.shape != (self.dim, self.dim, self.dim):
            raise ValueError(f"Structure constants must be cubic, got {self.structure.shape}")
        self.one = np.asarray(one, dtype=np.int64)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self.name = name or f"algebra(dim={self.dim})"
        self._unit_product = self.dim == 1 and int(self.structure[0, 0, 0]) == 1
        self.elem_shape = (self.dim,)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name}, F_{self.field.q})"

    @classmethod
    def field_algebra(cls, field: FqField) -> "FiniteAlgebra":
        return cls(field, np.ones((1, 1, 1), dtype=np.int64), [1], labels=["1"], name=f"F_{field.q}")

    @classmethod
    def from_table(cls, field: FqField, table, labels=None, name: str = "") -> "FiniteAlgebra":
        """Monoid algebra of a multiplication table whose entry 0 is the identity."""
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        structure = np.zeros((n, n, n), dtype=np.int64)
        rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        structure[rows, cols, table] = 1
        one = np.zeros(n, dtype=np.int64)
        one[0] = 1
        return cls(field, structure, one, labels=labels, name=name)

    # construction helpers

    def _shape(self, shape) -> tuple:
        return ((shape,) if isinstance(shape, (int, np.integer)) else tuple(shape)) + (self.dim,)

    def zeros(self, shape=()) -> np.ndarray:
        return np.zeros(self._shape(shape), dtype=np.int64)

    def ones(self, shape=()) -> np.ndarray:
        return np.broadcast_to(self.one, self._shape(shape)).copy()

    def scalar(self, c: int) -> np.ndarray:
        return self.field.mul(self.one, c)

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return self.field.random(rng, self._shape(shape))

    # arithmetic

    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def scale(self, a, c):
        return self.field.mul(a, np.asarray(c)[..., None] if np.ndim(c) else c)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        f = self.field
        if self._unit_product:
            return f.mul(a, b)
        if f.is_prime:
            return np.einsum("...i,...j,ijk->...k", a, b, self.structure, optimize=True) % f.q
        prods = f.mul(a[..., :, None], b[..., None, :])
        terms = f.mul(prods[..., None], self.structure)
        return f.sum(terms, axis=(-3, -2))

    def sum(self, a, axis):
        """Sum of algebra elements along an element axis (not the coefficient axis)."""
        a = np.asarray(a, dtype=np.int64)
        axis = axis % (a.ndim - 1)
        return self.field.sum(a, axis=axis)

    def power(self, a, n: int):
        result = np.broadcast_to(self.one, np.shape(a)).copy()
        base = np.asarray(a, dtype=np.int64)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def is_zero(self, a) -> bool:
        return not np.any(a)

    def left_matrix(self, a) -> np.ndarray:
        """Matrix of x -> a*x in the basis (columns are a*b_j)."""
        return self.mul(np.asarray(a)[None, :], np.eye(self.dim, dtype=np.int64)).T

    def right_matrix(self, a) -> np.ndarray:
        """Matrix of x -> x*a in the basis."""
        return self.mul(np.eye(self.dim, dtype=np.int64), np.asarray(a)[None, :]).T

    def divide(self, target, c) -> np.ndarray | None:
        """Some z with c*z = target, or None."""
        return linalg.solve(self.field, self.left_matrix(c), target)

    def inverse(self, a) -> np.ndarray:
        z = self.divide(self.one, a)
        if z is None:
            raise InvertZero(f"Element {list(np.asarray(a))} is not a unit of {self.name}")
        return z

    def is_unit(self, a) -> bool:
        return linalg.rank(self.field, self.left_matrix(a)) == self.dim

    def is_unit_in(self, a, idempotent) -> bool:
        """Whether a*e is a unit of the corner ring e*R (commutative R)."""
        return self.divide(idempotent, self.mul(a, idempotent)) is not None

    def inverse_in(self, a, idempotent) -> np.ndarray:
        z = self.divide(idempotent, self.mul(a, idempotent))
        if z is None:
            raise InvertZero("Element is not a unit in the local component")
        return self.mul(z, idempotent)

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.structure, self.structure.transpose(1, 0, 2)))

    def frobenius_matrix(self) -> np.ndarray:
        """Matrix of x -> x^q, additive when the algebra is commutative."""
        images = self.power(np.eye(self.dim, dtype=np.int64), self.field.q)
        return images.T

    @cached_property
    def idempotents(self) -> list[np.ndarray]:
        """
        Primitive idempotents of a commutative algebra.

        The fixed space of x -> x^q is a split semisimple subalgebra; each of its
        basis elements s splits an idempotent e into the pieces
        e - ((s - c)e)^(q-1), c in F_q.
        """
        if not self.is_commutative:
            raise ValueError(f"{self.name} is not commutative")
        f = self.field
        fixed = linalg.nullspace(f, f.sub(self.frobenius_matrix(), np.eye(self.dim, dtype=np.int64)))
        idems = [self.one.copy()]
        for s in fixed:
            if len(idems) == fixed.shape[0]:
                break
            refined = []
            for e in idems:
                for c in range(f.q):
                    x = self.mul(f.sub(s, self.scalar(c)), e)
                    piece = f.sub(e, self.power(x, f.q - 1))
                    if np.any(piece):
                        refined.append(piece)
            idems = refined
        logger.debug(f"{self.name}: {len(idems)} primitive idempotents")
        return idems

    def structure_summary(self) -> dict:
        return {"name": self.name, "dim": self.dim, "labels": self.labels}
