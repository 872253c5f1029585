"""
Ideals of Z(A[G]) as A-submodules in class-sum coordinates, and Fitting ideals.

Z(A[G]) is A-free on the class sums, so an ideal is stored as the Hermite
normal form of an A-basis of coordinate vectors. Equality of ideals is
equality of Hermite bases.
"""
import logging
from functools import cached_property
from itertools import combinations

import numpy as np

from equivcnf.algebra import linalg
from equivcnf.algebra.normal_forms import hnf, hnf_contains, hnf_reduce
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.truncated import TruncatedRing, det_commutative
from equivcnf.errors import NotFinitePresentation
from equivcnf.groups.decomposition import DecompositionData, trim_ag
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


def _center_times(ring: GroupRing, x: list[FqPoly], y: list[FqPoly]) -> list[FqPoly]:
    """Product of two central A[G] elements in class-sum coordinates."""
    f = ring.field
    c = ring.center_dim
    out = [FqPoly(f) for _ in range(c)]
    consts = ring.center_structure
    for a in range(c):
        if x[a].is_zero:
            continue
        for b in range(c):
            if y[b].is_zero:
                continue
            prod = x[a] * y[b]
            for k in range(c):
                s = int(consts[a, b, k])
                if s:
                    out[k] = out[k] + prod.scale(s)
    return out


class CentralIdeal:
    def __init__(self, ring: GroupRing, basis: list[list[FqPoly]]):
        self.ring = ring
        self.basis = basis

    @classmethod
    def from_center_vectors(cls, ring: GroupRing, vectors) -> "CentralIdeal":
        """Ideal generated by central elements given in class-sum coordinates."""
        f = ring.field
        c = ring.center_dim
        units = [[FqPoly.constant(f, 1) if k == a else FqPoly(f) for k in range(c)] for a in range(c)]
        rows = [_center_times(ring, v, u) for v in vectors for u in units]
        return cls(ring, hnf(rows, c, f))

    @classmethod
    def principal(cls, ring: GroupRing, element) -> "CentralIdeal":
        """Ideal generated by a central A[G] element (array (D, |G|))."""
        return cls.from_center_vectors(ring, [ring.ag_to_center_polys(element)])

    @classmethod
    def from_elements(cls, ring: GroupRing, elements) -> "CentralIdeal":
        return cls.from_center_vectors(ring, [ring.ag_to_center_polys(x) for x in elements])

    @classmethod
    def unit(cls, ring: GroupRing) -> "CentralIdeal":
        return cls.principal(ring, ring.ag_constant(ring.algebra.one))

    @classmethod
    def zero(cls, ring: GroupRing) -> "CentralIdeal":
        return cls(ring, [])

    def __repr__(self) -> str:
        return f"CentralIdeal({[[repr(x) for x in row] for row in self.basis]})"

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ring.center_dim

    @cached_property
    def is_unit(self) -> bool:
        return self == CentralIdeal.unit(self.ring)

    def contains(self, element) -> bool:
        """Membership of a central A[G] element, by Hermite reduction."""
        return hnf_contains(self.basis, self.ring.ag_to_center_polys(element))

    def contains_vector(self, vector) -> bool:
        return hnf_contains(self.basis, vector)

    def remainder(self, element) -> list[FqPoly]:
        return hnf_reduce(self.basis, self.ring.ag_to_center_polys(element))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CentralIdeal):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self.basis))

    def __le__(self, other: "CentralIdeal") -> bool:
        return all(other.contains_vector(row) for row in self.basis)

    def __mul__(self, other: "CentralIdeal") -> "CentralIdeal":
        rows = [_center_times(self.ring, x, y) for x in self.basis for y in other.basis]
        return CentralIdeal(self.ring, hnf(rows, self.ring.center_dim, self.ring.field))

    def __add__(self, other: "CentralIdeal") -> "CentralIdeal":
        return CentralIdeal(self.ring, hnf(self.basis + other.basis, self.ring.center_dim, self.ring.field))

    def generators(self) -> list[np.ndarray]:
        """A-basis of the ideal as A[G] elements."""
        return [self.ring.ag_from_center_polys(row) for row in self.basis]

    def to_report(self) -> list[list[list[int]]]:
        return [[list(x.coeffs) for x in row] for row in self.basis]


def ideal_ops(op: str, I: CentralIdeal, J: CentralIdeal | None = None, x=None):
    """Dispatch for membership, equality, product and containment of central ideals."""
    if op == "membership":
        return I.contains(x)
    if op == "equality":
        return I == J
    if op == "product":
        return I * J
    if op == "contains":
        return J <= I
    raise ValueError(f"Unknown ideal operation {op!r}")


def _poly_det(algebra, block, D: int) -> np.ndarray:
    """Determinant of a square matrix with polynomial entries (k, k, D, dim) over a commutative algebra."""
    k = block.shape[0]
    P = k * max(D - 1, 0) + 1
    ring = TruncatedRing(algebra, P)
    padded = np.zeros((k, k, P, algebra.dim), dtype=np.int64)
    padded[:, :, :D] = block
    return det_commutative(ring, padded)


def _maximal_minors(algebra, matrix) -> list[np.ndarray]:
    """All maximal minors of a (k, r, D, dim) polynomial matrix with k >= r."""
    k, r, D = matrix.shape[:3]
    if k < r:
        raise NotFinitePresentation(f"Presentation has {k} relations for {r} generators")
    if r == 0:
        return [np.asarray(algebra.one)[None, :]]
    return [_poly_det(algebra, matrix[list(rows)], D) for rows in combinations(range(k), r)]


def _ring_span(algebra, element) -> list[np.ndarray]:
    """The A-span generators {b * element} of the ideal generated in R[t] by one element."""
    eye = np.eye(algebra.dim, dtype=np.int64)
    return [algebra.mul(b[None, :], element) for b in eye]


def fitting_ideal(ring: GroupRing, presentation, decomposition: DecompositionData | None = None) -> CentralIdeal:
    """
    Fitting ideal of the module A[G]^r / (rows of the presentation).

    Abelian G: the ideal of maximal minors. Otherwise every block gives the
    ideal of maximal minors of its (k n_i) x (r n_i) image over R_i[t], and the
    blocks are pulled back to Z(A[G]) through the center map.
    """
    P = np.asarray(presentation, dtype=np.int64)
    f = ring.field
    k, r = P.shape[:2]
    if decomposition is None or decomposition.is_trivial:
        vectors = []
        for minor in _maximal_minors(ring.algebra, P):
            for gen in _ring_span(ring.algebra, minor):
                vectors.append(ring.ag_to_center_polys(trim_ag(gen)))
        ideal = CentralIdeal(ring, hnf(vectors, ring.center_dim, f))
    else:
        decomposition._require()
        vectors = []
        for i, b in enumerate(decomposition.blocks):
            block = decomposition.matrix_block(i, P)
            to_group = decomposition.block_pullback_matrix(i)
            for minor in _maximal_minors(b.ring, block):
                for gen in _ring_span(b.ring, minor):
                    element = f.dot(gen, to_group.T)
                    vectors.append(ring.ag_to_center_polys(trim_ag(element)))
        ideal = CentralIdeal(ring, hnf(vectors, ring.center_dim, f))
    if not ideal.is_full_rank:
        raise NotFinitePresentation(f"Presentation of {r} generators by {k} relations has an infinite cokernel")
    logger.debug(f"Fitting ideal of a {k}x{r} presentation: {ideal}")
    return ideal


def annihilator_ideal(ring: GroupRing, module) -> CentralIdeal:
    """
    Ann_{Z(A[G])}(M) of a finite A[G]-module given on an F_q-basis.

    z = sum_c f_c(t) C_c kills M iff sum_c f_c(T) S(C_c) = 0; this is an
    A-linear condition on (f_c), solved on the finite quotient A[G]/(mu) A[G]
    where mu is the minimal polynomial of T, after which mu*Z(A[G]) is added back.
    """
    f = ring.field
    c = ring.center_dim
    d = module.dim
    if d == 0:
        return CentralIdeal.unit(ring)
    mu = minimal_polynomial(f, module.t_action)
    m = mu.degree
    class_ops = [ring.action_matrix(ring.class_sums[a], module.g_action) for a in range(c)]
    t_powers = [np.eye(d, dtype=np.int64)]
    for _ in range(1, m):
        t_powers.append(f.dot(t_powers[-1], module.t_action))
    columns = [f.dot(t_powers[j], class_ops[a]).reshape(-1) for a in range(c) for j in range(m)]
    kernel = linalg.nullspace(f, np.stack(columns, axis=1))
    vectors = [[FqPoly(f, v[a * m:(a + 1) * m]) for a in range(c)] for v in kernel]
    vectors += [[mu if k == a else FqPoly(f) for k in range(c)] for a in range(c)]
    return CentralIdeal(ring, hnf(vectors, c, f))


def minimal_polynomial(field, matrix) -> FqPoly:
    """Monic minimal polynomial of a square matrix over F_q."""
    d = matrix.shape[0]
    powers = [np.eye(d, dtype=np.int64).reshape(-1)]
    current = np.eye(d, dtype=np.int64)
    for k in range(1, d + 1):
        current = field.dot(current, matrix)
        sol = linalg.solve(field, np.stack(powers, axis=1), current.reshape(-1))
        if sol is not None:
            return FqPoly(field, list(field.neg(sol)) + [1])
        powers.append(current.reshape(-1))
    raise ValueError("Minimal polynomial search exceeded the dimension")
