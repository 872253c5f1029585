import logging
from dataclasses import dataclass

import numpy as np

from equivcnf import constants
from equivcnf.algebra.laurent import LaurentSeries
from equivcnf.algebra.poly import FqPoly
from equivcnf.algebra.truncated import charpoly
from equivcnf.covers.module import FiniteAGModule
from equivcnf.errors import NotFree
from equivcnf.groups.decomposition import DecompositionData, trim_ag
from equivcnf.groups.freeness import ModuleBasis, component_bases, ct_free_basis
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


@dataclass
class CharClass:
    """
    The characteristic class c_G(M) as a central A[G] element (rows are t-coefficients).

    For non-abelian G this is the reduced norm Nrd(tI - T) through the decomposition.
    `t_matrix` is the t-action in a free basis when one was used.
    """
    coefficients: np.ndarray
    rank: int | None
    t_matrix: np.ndarray | None = None
    route: str = "free"

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    def to_laurent(self, ring: GroupRing) -> LaurentSeries:
        return ring.ag_to_laurent(self.coefficients)

    def augmentation(self, ring: GroupRing) -> FqPoly:
        """Image under G -> 1; for a free module, the characteristic polynomial of t on the coinvariants."""
        return FqPoly(ring.field, ring.field.sum(self.coefficients, axis=-1))

    def to_report(self) -> dict:
        return {"coefficients": self.coefficients.tolist(), "rank": self.rank, "route": self.route}


def _component_class(module: FiniteAGModule, seed: int) -> CharClass:
    """Sum over primitive idempotents e of e * det(t - T_e) over eF_q[G]."""
    alg = module.ring.algebra
    f = module.field
    parts = []
    for basis in component_bases(module, seed=seed):
        T_e = basis.endomorphism_matrix(module, module.t_action)
        parts.append(alg.mul(charpoly(alg, T_e), basis.idempotent))
    length = max(p.shape[0] for p in parts)
    total = alg.zeros((length,))
    for p in parts:
        total[:p.shape[0]] = f.add(total[:p.shape[0]], p)
    return CharClass(trim_ag(total), None, route="components")


def char_class(module: FiniteAGModule, decomposition: DecompositionData | None = None,
               basis: ModuleBasis | None = None, seed: int = constants.DEFAULT_SEED) -> CharClass:
    """
    c_G(M) = Nrd(t*I - T_t) for the t-action T_t in an F_q[G]-basis of M.

    An abelian G whose module is only free componentwise falls back to the
    idempotent decomposition; a non-abelian G needs an honest free basis.
    """
    ring = module.ring
    D = decomposition or DecompositionData.for_ring(ring)
    if basis is None:
        try:
            basis = ct_free_basis(module, seed=seed)
        except NotFree:
            if not ring.is_abelian:
                raise
            logger.debug(f"{module.name} is not free; using the componentwise class")
            return _component_class(module, seed)
    T = basis.endomorphism_matrix(module, module.t_action)
    return CharClass(D.nrd_charpoly(T), basis.rank, T)


def char_class_additivity(ring: GroupRing, T1, T2, coupling, decomposition: DecompositionData | None = None,
                          seed: int = constants.DEFAULT_SEED) -> bool:
    """
    c_G of the extension with t-action [[T1, 0], [C, T2]] equals c_G(T1) * c_G(T2).

    The first block spans a t-stable submodule, the second block its quotient.
    """
    D = decomposition or DecompositionData.for_ring(ring)
    T1, T2, C = (np.asarray(x, dtype=np.int64) for x in (T1, T2, coupling))
    a, b = T1.shape[0], T2.shape[0]
    middle = ring.algebra.zeros((a + b, a + b))
    middle[:a, :a] = T1
    middle[a:, :a] = C
    middle[a:, a:] = T2
    modules = [FiniteAGModule.regular(ring, T, name=name) for T, name in ((T1, "sub"), (T2, "quotient"),
                                                                         (middle, "extension"))]
    sub, quotient, ext = (char_class(m, D, seed=seed) for m in modules)
    product = trim_ag(ring.ag_mul(sub.coefficients, quotient.coefficients))
    holds = np.array_equal(product, ext.coefficients)
    if not holds:
        logger.warning(f"Characteristic classes are not multiplicative on an extension of ranks {a}, {b}")
    return holds
