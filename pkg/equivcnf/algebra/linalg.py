"""Gaussian elimination over F_q (numpy) and over exact object fields."""
import logging

import numpy as np

from equivcnf.algebra.field import FqField
from equivcnf.errors import InvertZero

logger = logging.getLogger(__name__)


def rref(field: FqField, matrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = np.array(matrix, dtype=np.int64, copy=True)
    if m.ndim != 2:
        raise ValueError(f"Expected a matrix, got shape {m.shape}")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = field.mul(m[r], field.inv(m[r, c]))
        factors = m[:, c].copy()
        factors[r] = 0
        touched = np.nonzero(factors)[0]
        if touched.size:
            m[touched] = field.sub(m[touched], field.mul(factors[touched, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: FqField, matrix) -> int:
    m = np.asarray(matrix)
    if m.size == 0:
        return 0
    return len(rref(field, m)[1])


def nullspace(field: FqField, matrix) -> np.ndarray:
    """Rows spanning {x : matrix @ x = 0}."""
    m = np.asarray(matrix, dtype=np.int64)
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, pivots = rref(field, m)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = field.neg(reduced[r, f])
    return basis


def left_nullspace(field: FqField, matrix) -> np.ndarray:
    """Rows y with y @ matrix = 0."""
    return nullspace(field, np.asarray(matrix, dtype=np.int64).T)


def solve(field: FqField, matrix, rhs) -> np.ndarray | None:
    """One solution x of matrix @ x = rhs, or None; rhs may be a vector or a matrix."""
    m = np.asarray(matrix, dtype=np.int64)
    b = np.asarray(rhs, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    rows, cols = m.shape
    reduced, pivots = rref(field, np.concatenate([m, b], axis=1))
    if any(p >= cols for p in pivots):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for r, p in enumerate(pivots):
        x[p] = reduced[r, cols:]
    return x[:, 0] if vector else x


def inverse(field: FqField, matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"Cannot invert a non-square matrix of shape {m.shape}")
    if n == 0:
        return m.copy()
    reduced, pivots = rref(field, np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1))
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise InvertZero("Matrix is singular over F_q")
    return reduced[:, n:]


def row_space_basis(field: FqField, matrix) -> np.ndarray:
    reduced, pivots = rref(field, matrix)
    return reduced[: len(pivots)]


def reduce_against(field: FqField, reduced: np.ndarray, pivots: list[int], vector) -> np.ndarray:
    """Remainder of vector after elimination by the rows of an rref matrix."""
    v = np.array(vector, dtype=np.int64, copy=True)
    for r, p in enumerate(pivots):
        if v[..., p].any():
            v = field.sub(v, field.mul(v[..., p, None], reduced[r]))
    return v


def object_solve(matrix: list[list], rhs: list[list], zero, one):
    """
    Solve matrix @ X = rhs over a field of Python objects (e.g. RationalFunction).

    Returns X as a list of rows, or raises InvertZero if the matrix is singular.
    """
    n = len(matrix)
    width = len(rhs[0]) if rhs else 0
    aug = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if aug[r][c] != zero), None)
        if pivot is None:
            raise InvertZero("Singular matrix over the coefficient field")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != zero:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:n + width] for row in aug]


def object_inverse(matrix: list[list], zero, one):
    n = len(matrix)
    identity = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return object_solve(matrix, identity, zero, one)
