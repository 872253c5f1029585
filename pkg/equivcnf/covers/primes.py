import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra.normal_forms import hnf, hnf_reduce
from equivcnf.algebra.poly import FqPoly, enumerate_monic_irreducibles
from equivcnf.covers.cover import GaloisCover, Lattice
from equivcnf.covers.module import FiniteAGModule
from equivcnf.errors import ConfigError, NotFree
from equivcnf.groups.freeness import ct_free_basis
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


@dataclass
class PrimeData:
    p: FqPoly
    residue: FiniteAGModule
    tame: bool | None = None
    certificate: dict = dc_field(default_factory=dict)

    def to_report(self) -> dict:
        return {"p": list(self.p.coeffs), "dim": self.residue.dim, "tame": self.tame, "certificate": self.certificate}


def polynomial_quotient(ring: GroupRing, sub_columns, g_actions, labels, name: str, omega=None) -> FiniteAGModule:
    """
    The finite A[G]-module A^n / L' with t-, G- and (optionally) Frobenius actions.

    `sub_columns` is an n x m matrix over A whose columns generate L'.
    `g_actions[g]` and `omega` are n x n matrices over A acting on A^n. The
    F_q-basis is t^k mu_c for k below the degree of the c-th Hermite pivot.
    """
    f = ring.field
    n = len(sub_columns)
    rows = [[sub_columns[i][j] for i in range(n)] for j in range(len(sub_columns[0]))]
    H = hnf(rows, n, f)
    if len(H) != n:
        raise ConfigError(f"{name} is not finite: the sublattice has rank {len(H)} < {n}")
    degrees = [H[c][c].degree for c in range(n)]
    offsets = np.concatenate([[0], np.cumsum(degrees)]).astype(int)
    dim = int(offsets[-1])

    def reduce(vec) -> np.ndarray:
        rem = hnf_reduce(H, vec)
        out = np.zeros(dim, dtype=np.int64)
        for c in range(n):
            out[offsets[c]:offsets[c + 1]] = rem[c].array(degrees[c])
        return out

    zero = FqPoly(f)
    units = [(c, k) for c in range(n) for k in range(degrees[c])]

    def unit_vector(c, poly):
        return [poly if i == c else zero for i in range(n)]

    t_action = np.zeros((dim, dim), dtype=np.int64)
    for idx, (c, k) in enumerate(units):
        t_action[:, idx] = reduce(unit_vector(c, FqPoly.monomial(f, k + 1)))
    g_action = np.zeros((ring.order, dim, dim), dtype=np.int64)
    for g, S in enumerate(g_actions):
        for idx, (c, k) in enumerate(units):
            mono = FqPoly.monomial(f, k)
            g_action[g, :, idx] = reduce([S[i][c] * mono for i in range(n)])
    frobenius = None
    if omega is not None:
        frobenius = np.zeros((dim, dim), dtype=np.int64)
        for idx, (c, k) in enumerate(units):
            mono = FqPoly.monomial(f, k * f.q)
            frobenius[:, idx] = reduce([omega[i][c] * mono for i in range(n)])
    return FiniteAGModule(ring, t_action, g_action, frobenius=frobenius,
                          labels=[f"t^{k}*{labels[c]}" for c, k in units], name=name)


def lattice_quotient(lattice: Lattice, sub_columns, name: str = "") -> FiniteAGModule:
    """The finite A[G]-module L / L' for a sublattice L' given by generator columns in the coordinates of L."""
    return polynomial_quotient(lattice.ring, sub_columns, lattice.poly_actions(), lattice.labels,
                               name or f"{lattice.name}/L'", omega=lattice.omega)


def residue_module(cover: GaloisCover, p: FqPoly, lattice: Lattice | None = None) -> PrimeData:
    """The residue module M/pM of a lattice (default O_K) at a prime p of A."""
    lattice = lattice or cover.integral
    n = lattice.rank
    zero = FqPoly(cover.field)
    columns = [[p if i == j else zero for j in range(n)] for i in range(n)]
    module = lattice_quotient(lattice, columns, name=f"{lattice.name}/({p!r})")
    if module.dim != p.degree * n:
        raise ConfigError(f"Residue module at {p!r} has dimension {module.dim}, expected {p.degree * n}")
    return PrimeData(p=p, residue=module)


def tame_test(cover: GaloisCover, p: FqPoly, seed: int = constants.DEFAULT_SEED) -> PrimeData:
    """Whether O_K/pO_K is F_q[G]-free; the NotFree certificate is kept as the witness."""
    data = residue_module(cover, p)
    try:
        basis = ct_free_basis(data.residue, seed=seed)
        data.tame = True
        data.certificate = basis.to_report()
    except NotFree as e:
        data.tame = False
        data.certificate = e.certificate
    logger.debug(f"Prime {p!r}: tame={data.tame}")
    return data


def prime_divisors(f: FqPoly) -> list[FqPoly]:
    """Monic irreducible divisors of a nonzero polynomial, by trial division."""
    if f.degree <= 0:
        return []
    out = []
    rest = f.monic()
    for p in enumerate_monic_irreducibles(f.field, f.degree):
        if p.degree > rest.degree:
            break
        if p.divides(rest):
            out.append(p)
            while p.divides(rest):
                rest = rest // p
    return out


def ramified_primes(cover: GaloisCover) -> list[FqPoly]:
    return prime_divisors(cover.discriminant())


def wild_primes(cover: GaloisCover, seed: int = constants.DEFAULT_SEED) -> list[FqPoly]:
    return [p for p in ramified_primes(cover) if not tame_test(cover, p, seed=seed).tame]
