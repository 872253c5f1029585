import logging

import numpy as np

from equivcnf.algebra import linalg
from equivcnf.algebra.poly import FqPoly
from equivcnf.errors import CayleyMismatch, ConfigError
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


class FiniteAGModule:
    """
    A finite A[G]-module given on an F_q-basis.

    Matrices act on column vectors: `t_action @ v` is t*v and `g_action[g] @ v`
    is g*v. `frobenius`, when present, is the matrix of x -> x^q on a module that
    is a quotient ring of a lattice in K.
    """

    def __init__(self, ring: GroupRing, t_action, g_action=None, frobenius=None, labels=None, name: str = ""):
        f = ring.field
        T = np.asarray(t_action, dtype=np.int64) % f.q
        d = T.shape[0]
        if T.shape != (d, d):
            raise ConfigError(f"t-action must be square, got shape {T.shape}")
        if g_action is None:
            S = np.broadcast_to(np.eye(d, dtype=np.int64), (ring.order, d, d)).copy()
        else:
            S = np.asarray(g_action, dtype=np.int64) % f.q
        if S.shape != (ring.order, d, d):
            raise ConfigError(f"Expected {ring.order} action matrices of size {d}, got shape {S.shape}")
        self.ring = ring
        self.field = f
        self.dim = d
        self.t_action = T
        self.g_action = S
        self.frobenius = None if frobenius is None else np.asarray(frobenius, dtype=np.int64) % f.q
        self.labels = list(labels) if labels is not None else [f"m{i}" for i in range(d)]
        self.name = name or f"module(dim={d})"
        self._validate()

    def _validate(self):
        f, S, T = self.field, self.g_action, self.t_action
        d = self.dim
        if d == 0:
            return
        if not np.array_equal(S[0], np.eye(d, dtype=np.int64)):
            raise CayleyMismatch(f"{self.name}: the identity does not act trivially")
        table = self.ring.group.table
        prods = f.dot(S[:, None], S[None, :])
        for g in range(self.ring.order):
            for h in range(self.ring.order):
                if not np.array_equal(prods[g, h], S[table[g, h]]):
                    raise CayleyMismatch(
                        f"{self.name}: action of {self.ring.group.labels[g]}*{self.ring.group.labels[h]} "
                        f"does not match the Cayley table")
        for g in range(self.ring.order):
            if not np.array_equal(f.dot(T, S[g]), f.dot(S[g], T)):
                raise ConfigError(f"{self.name}: t-action does not commute with {self.ring.group.labels[g]}")
        if self.frobenius is not None:
            F = self.frobenius
            Tq = np.eye(d, dtype=np.int64)
            for _ in range(f.q):
                Tq = f.dot(Tq, T)
            if not np.array_equal(f.dot(F, T), f.dot(Tq, F)):
                raise ConfigError(f"{self.name}: Frobenius is not compatible with the t-action (F t = t^q F)")
            for g in range(self.ring.order):
                if not np.array_equal(f.dot(F, S[g]), f.dot(S[g], F)):
                    raise ConfigError(f"{self.name}: Frobenius does not commute with {self.ring.group.labels[g]}")

    def __repr__(self) -> str:
        return f"FiniteAGModule({self.name}, dim={self.dim}, G={self.ring.group.name})"

    @classmethod
    def regular(cls, ring: GroupRing, t_matrix, name: str = "") -> "FiniteAGModule":
        """
        F_q[G]^r with t acting as x -> x*T for an r x r matrix T over F_q[G].

        Coordinate s*|G| + g is the coefficient of g in the s-th component.
        """
        T = np.asarray(t_matrix, dtype=np.int64)
        r, n = T.shape[0], ring.order
        alg = ring.algebra
        t_action = np.zeros((r * n, r * n), dtype=np.int64)
        for s in range(r):
            for u in range(r):
                t_action[u * n:(u + 1) * n, s * n:(s + 1) * n] = alg.right_matrix(T[s, u])
        left = np.stack([alg.left_matrix(ring.element(g)) for g in range(n)])
        g_action = np.stack([np.kron(np.eye(r, dtype=np.int64), left[g]) for g in range(n)])
        return cls(ring, t_action, g_action, name=name or f"F_q[G]^{r}")

    @property
    def has_frobenius(self) -> bool:
        return self.frobenius is not None

    def action_of(self, x) -> np.ndarray:
        return self.ring.action_matrix(x, self.g_action)

    def poly_action(self, f: FqPoly) -> np.ndarray:
        """Matrix of f(t) acting on the module (Horner)."""
        fld = self.field
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        eye = np.eye(self.dim, dtype=np.int64)
        for c in reversed(f.coeffs):
            out = fld.add(fld.dot(out, self.t_action), fld.mul(eye, c))
        return out

    def with_t_action(self, t_action, name: str = "") -> "FiniteAGModule":
        return FiniteAGModule(self.ring, t_action, self.g_action, frobenius=None, labels=self.labels,
                              name=name or f"{self.name}'")

    def direct_sum(self, other: "FiniteAGModule") -> "FiniteAGModule":
        d, e = self.dim, other.dim
        T = np.zeros((d + e, d + e), dtype=np.int64)
        T[:d, :d], T[d:, d:] = self.t_action, other.t_action
        S = np.zeros((self.ring.order, d + e, d + e), dtype=np.int64)
        S[:, :d, :d], S[:, d:, d:] = self.g_action, other.g_action
        return FiniteAGModule(self.ring, T, S, name=f"{self.name}+{other.name}")

    def is_zero(self) -> bool:
        return self.dim == 0

    def presentation(self) -> np.ndarray:
        """
        Generator-relation presentation over A[G] on the F_q-basis.

        Rows are the relations t*e_i - sum T_ji e_j and g*e_i - sum (S_g)_ji e_j,
        as an array of shape (rows, dim, 2, |G|) of degree-one A[G] entries.
        """
        f, n, d = self.field, self.ring.order, self.dim
        rows = []
        for i in range(d):
            row = np.zeros((d, 2, n), dtype=np.int64)
            row[i, 1, 0] = 1
            row[:, 0, 0] = f.neg(self.t_action[:, i])
            rows.append(row)
        for g in range(1, n):
            for i in range(d):
                row = np.zeros((d, 2, n), dtype=np.int64)
                row[:, 0, 0] = f.neg(self.g_action[g][:, i])
                row[i, 0, g] = f.add(row[i, 0, g], 1)
                rows.append(row)
        return np.stack(rows) if rows else np.zeros((0, d, 2, n), dtype=np.int64)

    def kernel_dim(self, matrix) -> int:
        return self.dim - linalg.rank(self.field, matrix)
