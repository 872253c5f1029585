"""
Group rings F_q[G], A[G] and F_inf[G].

An element of F_q[G] is a vector indexed by group ids. An element of A[G]
is an integer array of shape (D, |G|): row k holds the coefficient of t^k.
Elements of F_inf[G] are LaurentSeries over `GroupRing.algebra`.
"""
import logging
from functools import cached_property

import numpy as np

from equivcnf.algebra import linalg
from equivcnf.algebra.field import FqField
from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.laurent import LaurentSeries, _convolve
from equivcnf.algebra.poly import FqPoly
from equivcnf.groups.group import FiniteGroup

logger = logging.getLogger(__name__)


class GroupRing:
    def __init__(self, field: FqField, group: FiniteGroup):
        self.field = field
        self.group = group
        self.order = group.order
        self.algebra = FiniteAlgebra.from_table(field, group.table, labels=group.labels,
                                                name=f"F_{field.q}[{group.name}]")

    def __repr__(self) -> str:
        return f"GroupRing({self.algebra.name})"

    @property
    def is_abelian(self) -> bool:
        return self.group.is_abelian

    def element(self, g: int, c: int = 1) -> np.ndarray:
        v = np.zeros(self.order, dtype=np.int64)
        v[g] = self.field.element(c)
        return v

    def augmentation(self, x) -> int:
        return int(self.field.sum(np.asarray(x, dtype=np.int64), axis=-1))

    def norm_element(self) -> np.ndarray:
        return np.ones(self.order, dtype=np.int64)

    # center

    @cached_property
    def class_sums(self) -> np.ndarray:
        """Class sums C_c as rows of a (classes, |G|) 0/1 array."""
        classes = self.group.conjugacy_classes
        out = np.zeros((len(classes), self.order), dtype=np.int64)
        for c, members in enumerate(classes):
            out[c, members] = 1
        return out

    @cached_property
    def class_representatives(self) -> list[int]:
        return [members[0] for members in self.group.conjugacy_classes]

    @property
    def center_dim(self) -> int:
        return self.class_sums.shape[0]

    @cached_property
    def center_structure(self) -> np.ndarray:
        """Structure constants of Z(F_q[G]) in the class-sum basis."""
        c = self.center_dim
        prods = self.algebra.mul(self.class_sums[:, None, :], self.class_sums[None, :, :])
        return prods[:, :, self.class_representatives].reshape(c, c, c)

    @cached_property
    def center(self) -> FiniteAlgebra:
        one = np.zeros(self.center_dim, dtype=np.int64)
        one[0] = 1
        labels = [f"C[{self.group.labels[r]}]" for r in self.class_representatives]
        return FiniteAlgebra(self.field, self.center_structure, one, labels=labels,
                             name=f"Z({self.algebra.name})")

    def is_central(self, x) -> bool:
        x = np.asarray(x, dtype=np.int64)
        return all(np.array_equal(self.algebra.mul(x, b), self.algebra.mul(b, x))
                   for b in np.eye(self.order, dtype=np.int64))

    def to_center(self, x) -> np.ndarray:
        """Class-sum coordinates of central elements (..., |G|) -> (..., classes)."""
        return np.asarray(x, dtype=np.int64)[..., self.class_representatives]

    def from_center(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64)
        return self.field.sum(self.field.mul(z[..., :, None], self.class_sums), axis=-2)

    # A[G]

    def ag_mul(self, a, b) -> np.ndarray:
        return _convolve(self.algebra, np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def ag_constant(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64)[None, :]

    def ag_from_poly(self, f: FqPoly, x=None) -> np.ndarray:
        """The A[G] element f*x (x defaults to 1)."""
        x = self.algebra.one if x is None else np.asarray(x, dtype=np.int64)
        return self.field.mul(f.array()[:, None], x[None, :])

    def ag_to_center_polys(self, a) -> list[FqPoly]:
        """Coordinates of a central A[G] element as one polynomial per class sum."""
        coords = self.to_center(np.asarray(a, dtype=np.int64))
        return [FqPoly(self.field, coords[:, c]) for c in range(self.center_dim)]

    def ag_from_center_polys(self, polys) -> np.ndarray:
        D = max((p.degree + 1 for p in polys if not p.is_zero), default=1)
        coords = np.stack([p.array(D) for p in polys], axis=1)
        return self.from_center(coords)

    def ag_to_laurent(self, a) -> LaurentSeries:
        return LaurentSeries(self.algebra, np.asarray(a, dtype=np.int64), 0)

    def action_matrix(self, x, g_action) -> np.ndarray:
        """F_q matrix of a group-ring element acting through per-element matrices S_g."""
        x = np.asarray(x, dtype=np.int64)
        return self.field.sum(self.field.mul(x[:, None, None], g_action), axis=0)

    def regular_module_basis(self) -> np.ndarray:
        """The basis of F_q[G] as left module: columns of left_matrix(g) for every g."""
        return np.stack([self.algebra.left_matrix(self.element(g)) for g in range(self.order)])

    def center_membership(self, x) -> bool:
        """Whether an F_q[G] element lies in the span of the class sums."""
        z = self.to_center(x)
        return np.array_equal(self.from_center(z), np.asarray(x, dtype=np.int64) % self.field.q)

    def center_solve(self, target):
        """Class-sum coordinates of a central element, or None."""
        return linalg.solve(self.field, self.class_sums.T, target)
