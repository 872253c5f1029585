"""
The cover K = F_q(t)[x]/(g) with its Galois group and A-lattices in K.

Elements of K are lists of RationalFunction in the power basis 1, x, ..., x^(n-1).
A Lattice is an A-lattice in K given by a basis; it carries the data every
later stage works in: the G-action on its coordinates and the matrix Omega
whose column j holds the coordinates of mu_j^q.
"""
import logging
from functools import cached_property

import numpy as np

from equivcnf.algebra.field import FqField
from equivcnf.algebra.linalg import object_inverse
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.rational import RationalFunction
from equivcnf.config import SessionConfig, GroupConfig, entry_to_rational
from equivcnf.errors import CayleyMismatch, ConfigError, InvertZero, NotAutomorphism, NotSeparable
from equivcnf.groups.decomposition import catalog_group
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


def _rf_matmul(a, b):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    zero = RationalFunction(FqPoly(a[0][0].field)) if n and m else None
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = zero
            for s in range(m):
                if not a[i][s].is_zero and not b[s][j].is_zero:
                    acc = acc + a[i][s] * b[s][j]
            row.append(acc)
        out.append(row)
    return out


def _rf_apply(matrix, vector):
    return [row[0] for row in _rf_matmul(matrix, [[v] for v in vector])]


def rf_det(matrix) -> RationalFunction:
    """Determinant over F_q(t) by elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    field = m[0][0].field
    det = RationalFunction.constant(field, 1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if not m[r][c].is_zero), None)
        if pivot is None:
            return RationalFunction(FqPoly(field))
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            if m[r][c].is_zero:
                continue
            factor = m[r][c] * inv
            m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return det


def _kpoly_trim(a):
    a = list(a)
    while a and a[-1].is_zero:
        a.pop()
    return a


def _kpoly_mod(a, b):
    a = _kpoly_trim(a)
    b = _kpoly_trim(b)
    lead_inv = b[-1].inverse()
    while len(a) >= len(b):
        c = a[-1] * lead_inv
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = a[shift + i] - c * y
        a = _kpoly_trim(a)
    return a


def kpoly_gcd_degree(a, b) -> int:
    """Degree in x of gcd(a, b) for polynomials with coefficients in F_q(t)."""
    a, b = _kpoly_trim(a), _kpoly_trim(b)
    while b:
        a, b = b, _kpoly_mod(a, b)
    return len(a) - 1


def build_group(config: GroupConfig | None) -> FiniteGroup:
    if config is None or config.kind == "trivial":
        return FiniteGroup.trivial()
    if config.kind == "cyclic":
        return FiniteGroup.cyclic(config.order)
    if config.kind == "catalog":
        return catalog_group(config.name)
    return FiniteGroup(config.table, labels=config.labels, name=config.name or "")


class GaloisCover:
    def __init__(self, field: FqField, group: FiniteGroup, g: list[FqPoly], basis=None,
                 generator_actions: dict | None = None, maximal: bool = True, name: str = ""):
        self.field = field
        self.group = group
        self.ring = GroupRing(field, group)
        self.g = [RationalFunction(c) for c in g]
        self.degree = len(g) - 1
        self.maximal = maximal
        self.name = name or f"cover(deg={self.degree}, G={group.name})"
        if self.degree != group.order:
            raise ConfigError(f"[K : F_q(t)] = {self.degree} differs from |G| = {group.order}")
        self._check_separable()
        n = self.degree
        if basis is None:
            basis = [[self.one if i == j else self.zero for i in range(n)] for j in range(n)]
        self.basis = [list(b) for b in basis]
        self.basis_matrix = [[self.basis[j][i] for j in range(n)] for i in range(n)]
        try:
            self.basis_inverse = object_inverse(self.basis_matrix, self.zero, self.one)
        except InvertZero as e:
            logger.error(f"{self.name}: O_K basis is singular")
            raise ConfigError("The supplied O_K basis is not a basis of K") from e
        self.actions = self._element_actions(generator_actions or {})
        self.power_actions = [_rf_matmul(_rf_matmul(self.basis_matrix, S), self.basis_inverse) for S in self.actions]
        self._check_automorphisms()
        if not maximal:
            logger.warning(f"{self.name}: the supplied order is not asserted maximal; invariants are relative to it")
        self.integral = Lattice(self, self.basis, name="O_K")

    @classmethod
    def trivial(cls, field: FqField) -> "GaloisCover":
        return cls(field, FiniteGroup.trivial(), [FqPoly(field), FqPoly.constant(field, 1)], name="trivial")

    def __repr__(self) -> str:
        return f"GaloisCover({self.name})"

    @cached_property
    def zero(self) -> RationalFunction:
        return RationalFunction(FqPoly(self.field))

    @cached_property
    def one(self) -> RationalFunction:
        return RationalFunction.constant(self.field, 1)

    # arithmetic in K

    def k_mul(self, a, b):
        n = self.degree
        prod = [self.zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if x.is_zero:
                continue
            for j, y in enumerate(b):
                if not y.is_zero:
                    prod[i + j] = prod[i + j] + x * y
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c.is_zero:
                continue
            for i in range(n):
                prod[k - n + i] = prod[k - n + i] - c * self.g[i]
        return prod[:n]

    def k_power(self, a, e: int):
        result = [self.one] + [self.zero] * (self.degree - 1)
        base = list(a)
        while e:
            if e & 1:
                result = self.k_mul(result, base)
            base = self.k_mul(base, base)
            e >>= 1
        return result

    def mult_matrix(self, a):
        n = self.degree
        cols = []
        xj = [self.one] + [self.zero] * (n - 1)
        for _ in range(n):
            cols.append(self.k_mul(a, xj))
            xj = self.k_mul(xj, [self.zero, self.one] + [self.zero] * (n - 2)) if n > 1 else xj
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def trace(self, a) -> RationalFunction:
        m = self.mult_matrix(a)
        acc = self.zero
        for i in range(self.degree):
            acc = acc + m[i][i]
        return acc

    def discriminant(self) -> FqPoly:
        """det(Tr(w_i w_j)) of the O_K basis, made monic."""
        n = self.degree
        gram = [[self.trace(self.k_mul(self.basis[i], self.basis[j])) for j in range(n)] for i in range(n)]
        d = rf_det(gram)
        if not d.is_polynomial:
            raise ConfigError(f"{self.name}: discriminant {d} is not a polynomial; the basis is not integral")
        return d.num.monic()

    def apply(self, g: int, a):
        return _rf_apply(self.power_actions[g], a)

    # validation

    def _check_separable(self):
        n = self.degree
        deriv = [self.g[k] * RationalFunction.constant(self.field, k) for k in range(1, n + 1)]
        if not _kpoly_trim(deriv) or kpoly_gcd_degree(self.g, deriv) > 0:
            raise NotSeparable(f"{self.name}: g is not separable over F_q(t)")

    def _element_actions(self, generator_actions: dict):
        n, group = self.degree, self.group
        identity = [[self.one if i == j else self.zero for j in range(n)] for i in range(n)]
        mats = {0: identity}
        gens = {}
        for label, matrix in generator_actions.items():
            gens[group.index(label)] = matrix
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for gid, S in gens.items():
                y = group.mul(gid, x)
                prod = _rf_matmul(S, mats[x])
                if y in mats:
                    if mats[y] != prod:
                        raise CayleyMismatch(f"{self.name}: action of {group.labels[y]} is not well defined")
                    continue
                mats[y] = prod
                frontier.append(y)
        if len(mats) != group.order:
            raise CayleyMismatch(f"{self.name}: the generator actions reach {len(mats)} of {group.order} elements")
        actions = [mats[g] for g in range(group.order)]
        for g in range(group.order):
            for h in range(group.order):
                if _rf_matmul(actions[g], actions[h]) != actions[group.mul(g, h)]:
                    raise CayleyMismatch(
                        f"{self.name}: S({group.labels[g]}) S({group.labels[h]}) != S({group.labels[group.mul(g, h)]})")
            if not all(x.is_polynomial for row in actions[g] for x in row):
                raise NotAutomorphism(f"{self.name}: {group.labels[g]} does not preserve O_K", pair=(group.labels[g],))
        return actions

    def _check_automorphisms(self):
        n = self.degree
        unit = [self.one] + [self.zero] * (n - 1)
        for g in range(self.group.order):
            label = self.group.labels[g]
            if self.apply(g, unit) != unit:
                raise NotAutomorphism(f"{self.name}: {label} does not fix 1", pair=(label, "1"))
            images = [self.apply(g, w) for w in self.basis]
            for i in range(n):
                for j in range(i, n):
                    lhs = self.apply(g, self.k_mul(self.basis[i], self.basis[j]))
                    rhs = self.k_mul(images[i], images[j])
                    if lhs != rhs:
                        raise NotAutomorphism(f"{self.name}: {label} is not multiplicative on basis pair ({i}, {j})",
                                              pair=(label, i, j))

    def lattice(self, basis, name: str = "M") -> "Lattice":
        return Lattice(self, basis, name=name)


class Lattice:
    """An A-lattice in K with G-action and q-power map in its own coordinates."""

    def __init__(self, cover: GaloisCover, basis, name: str = "M"):
        self.cover = cover
        self.name = name
        n = cover.degree
        self.rank = n
        self.basis = [list(b) for b in basis]
        self.matrix = [[self.basis[j][i] for j in range(n)] for i in range(n)]
        try:
            self.inverse = object_inverse(self.matrix, cover.zero, cover.one)
        except InvertZero as e:
            logger.error(f"Lattice {name}: basis is singular")
            raise ConfigError(f"Lattice {name}: basis is not a basis of K") from e
        self.actions = [_rf_matmul(_rf_matmul(self.inverse, P), self.matrix) for P in cover.power_actions]
        for g, S in enumerate(self.actions):
            if not all(x.is_polynomial for row in S for x in row):
                raise ConfigError(f"Lattice {name} is not stable under {cover.group.labels[g]}")
        q = cover.field.q
        omega = []
        for j in range(n):
            coords = self.coordinates(cover.k_power(self.basis[j], q))
            if not all(x.is_polynomial for x in coords):
                raise ConfigError(f"Lattice {name} is not stable under x -> x^q (basis element {j})")
            omega.append([x.num for x in coords])
        self.omega = [[omega[j][i] for j in range(n)] for i in range(n)]
        self.labels = [f"{name}{j}" for j in range(n)]

    def __repr__(self) -> str:
        return f"Lattice({self.name}, rank={self.rank})"

    @property
    def field(self) -> FqField:
        return self.cover.field

    @property
    def ring(self) -> GroupRing:
        return self.cover.ring

    def coordinates(self, x) -> list[RationalFunction]:
        return _rf_apply(self.inverse, x)

    def element(self, coords):
        return _rf_apply(self.matrix, coords)

    def poly_actions(self) -> list[list[list[FqPoly]]]:
        return [[[x.num for x in row] for row in S] for S in self.actions]

    @cached_property
    def constant_actions(self) -> np.ndarray | None:
        """G-action on coordinates as F_q matrices (|G|, n, n), or None when some entry is not constant."""
        out = np.zeros((self.cover.group.order, self.rank, self.rank), dtype=np.int64)
        for g, S in enumerate(self.actions):
            for i, row in enumerate(S):
                for j, x in enumerate(row):
                    if x.num.degree > 0:
                        return None
                    out[g, i, j] = x.num.coefficient(0)
        return out

    @cached_property
    def omega_degree(self) -> int:
        """Largest degree among the entries of Omega (0 for an all-constant matrix)."""
        return max((x.degree for row in self.omega for x in row if not x.is_zero), default=0)

    def sub_coordinates(self, other: "Lattice") -> list[list[FqPoly]] | None:
        """Columns: the basis of `other` in these coordinates, or None if other is not contained."""
        cols = [self.coordinates(b) for b in other.basis]
        if not all(x.is_polynomial for col in cols for x in col):
            return None
        return [[cols[j][i].num for j in range(other.rank)] for i in range(self.rank)]


def build_cover(config: SessionConfig) -> GaloisCover:
    """Validated cover from a session config; errors name the first violated identity."""
    field = config.field.build()
    cover_cfg = config.require_cover()
    group = build_group(cover_cfg.group)
    g = [FqPoly.from_ints(field, c) for c in cover_cfg.g]
    basis = None
    if cover_cfg.basis is not None:
        basis = [[entry_to_rational(field, e) for e in row] for row in cover_cfg.basis]
    actions = {label: [[entry_to_rational(field, e) for e in row] for row in matrix]
               for label, matrix in cover_cfg.action.items()}
    cover = GaloisCover(field, group, g, basis=basis, generator_actions=actions, maximal=cover_cfg.maximal,
                        name=config.name)
    logger.info(f"Built {cover!r}")
    return cover
