"""Searching F_q[G]-bases of finite modules, with Tate-cohomology certificates on failure."""
import logging
from dataclasses import dataclass
from itertools import chain

import numpy as np

from equivcnf import constants
from equivcnf.algebra import linalg
from equivcnf.errors import NotFree

logger = logging.getLogger(__name__)


@dataclass
class ModuleBasis:
    """
    Generators m_1..m_r of a module over a subring eF_q[G].

    `ring_basis` holds F_q[G] elements b_1..b_k spanning eF_q[G]; column
    j*k + i of `change` is b_i*m_j. For a free F_q[G]-basis e = 1 and the b_i
    are the group elements.
    """
    idempotent: np.ndarray
    ring_basis: np.ndarray
    generators: np.ndarray
    change: np.ndarray

    @property
    def rank(self) -> int:
        return self.generators.shape[0]

    def coordinates(self, module, v) -> np.ndarray:
        """Coefficients (r, |G|) of v = sum x_j m_j with x_j in eF_q[G]."""
        f = module.field
        c = linalg.solve(f, self.change, np.asarray(v, dtype=np.int64))
        if c is None:
            raise NotFree(f"Vector is outside the span of the basis of {module.name}")
        k = self.ring_basis.shape[0]
        c = c.reshape(self.rank, k)
        return f.dot(c, self.ring_basis)

    def endomorphism_matrix(self, module, endo) -> np.ndarray:
        """
        Matrix (r, r, |G|) of a G-equivariant endomorphism, row convention.

        Entry [s, u] is the coefficient of m_u in endo(m_s).
        """
        f = module.field
        images = f.dot(np.asarray(endo, dtype=np.int64), self.generators.T).T
        return np.stack([self.coordinates(module, w) for w in images]) if self.rank else \
            np.zeros((0, 0, module.ring.order), dtype=np.int64)

    def to_report(self) -> dict:
        return {"rank": self.rank, "generators": self.generators.tolist()}


def _greedy_basis(module, ring_basis, projector, target_dim, rng, trials) -> ModuleBasis | None:
    f = module.field
    d = module.dim
    ops = [module.action_of(b) for b in ring_basis]
    k = len(ops)
    cols = np.zeros((d, 0), dtype=np.int64)
    gens = []
    candidates = (f.dot(projector, f.random(rng, d)) for _ in range(trials))
    fallback = (projector[:, i] for i in range(d))
    for v in chain(candidates, fallback):
        if cols.shape[1] >= target_dim:
            break
        if not np.any(v):
            continue
        block = np.stack([f.dot(op, v) for op in ops], axis=1)
        cand = np.concatenate([cols, block], axis=1)
        if linalg.rank(f, cand) == cols.shape[1] + k:
            cols = cand
            gens.append(v)
    if cols.shape[1] != target_dim:
        return None
    gens = np.stack(gens) if gens else np.zeros((0, d), dtype=np.int64)
    return ModuleBasis(idempotent=None, ring_basis=np.asarray(ring_basis), generators=gens, change=cols)


def tate_certificate(module) -> dict:
    """Nonvanishing Tate cohomology of a cyclic l-subgroup, or an empty dict."""
    f = module.field
    d = module.dim
    group = module.ring.group
    eye = np.eye(d, dtype=np.int64)
    for g, members in group.cyclic_p_subgroups(f.char):
        S = module.g_action
        norm = f.sum(S[members], axis=0)
        diff = f.sub(S[g], eye)
        rk_norm, rk_diff = linalg.rank(f, norm), linalg.rank(f, diff)
        h0 = (d - rk_diff) - rk_norm
        h_minus = (d - rk_norm) - rk_diff
        if h0 or h_minus:
            logger.debug(f"{module.name}: Tate cohomology of <{group.labels[g]}> has dims ({h0}, {h_minus})")
            return {"subgroup_generator": group.labels[g], "subgroup_order": len(members),
                    "h0_dim": int(h0), "h_minus1_dim": int(h_minus)}
    return {}


def ct_free_basis(module, seed: int = constants.DEFAULT_SEED) -> ModuleBasis:
    """
    An F_q[G]-basis of a finite module.

    Random generators are tried against the rank of their orbit columns;
    FREENESS_TRIALS_PER_ELEMENT * |G| trials are made, then the standard basis.
    """
    n, d = module.ring.order, module.dim
    if d % n:
        raise NotFree(f"{module.name}: dimension {d} is not divisible by |G| = {n}",
                      certificate={"reason": "dimension", "dim": d, "order": n})
    rng = np.random.default_rng(seed)
    ring_basis = np.eye(n, dtype=np.int64)
    trials = constants.FREENESS_TRIALS_PER_ELEMENT * n
    basis = _greedy_basis(module, ring_basis, np.eye(d, dtype=np.int64), d, rng, trials)
    if basis is None:
        certificate = tate_certificate(module) or {"reason": "search exhausted", "trials": trials}
        raise NotFree(f"{module.name} has no F_q[G]-basis", certificate=certificate)
    basis.idempotent = module.ring.algebra.one
    logger.debug(f"{module.name}: free of rank {basis.rank}")
    return basis


def component_bases(module, seed: int = constants.DEFAULT_SEED) -> list[ModuleBasis]:
    """
    Bases of e*M over e*F_q[G] for every primitive idempotent e of a commutative F_q[G].

    This is the projective substitute for a free basis: c.t. modules are free
    over each local factor even when the ranks differ between factors.
    """
    alg = module.ring.algebra
    f = module.field
    rng = np.random.default_rng(seed)
    out = []
    for e in alg.idempotents:
        projector = module.action_of(e)
        ideal = linalg.row_space_basis(f, alg.mul(np.eye(alg.dim, dtype=np.int64), e))
        k = ideal.shape[0]
        d_e = linalg.rank(f, projector)
        if d_e % k:
            raise NotFree(f"{module.name}: component of dimension {d_e} is not free over a factor of dimension {k}",
                          certificate={"reason": "component dimension", "dim": d_e, "factor_dim": k})
        trials = constants.FREENESS_TRIALS_PER_ELEMENT * module.ring.order
        basis = _greedy_basis(module, ideal, projector, d_e, rng, trials)
        if basis is None:
            raise NotFree(f"{module.name}: a local component is not free",
                          certificate=tate_certificate(module) or {"reason": "search exhausted"})
        basis.idempotent = e
        out.append(basis)
    return out
