import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from equivcnf import constants
from equivcnf.algebra import linalg
from equivcnf.algebra.laurent import LaurentSeries, laurent_det
from equivcnf.covers.cover import Lattice
from equivcnf.drinfeld.exponential import coordinate_map
from equivcnf.drinfeld.module import DrinfeldModule
from equivcnf.errors import PrecisionExhausted, RankNotReached, UNotFree
from equivcnf.invariants.class_module import exponential_image
from equivcnf.invariants.image import Coords, ExponentialImage, fractional

logger = logging.getLogger(__name__)


@dataclass
class UnitLattice:
    """
    U(E/M) = exp^-1(M) with a reduced A-basis.

    `windows` holds the basis on the F_q-window t^start..t^level; the leading
    vectors of the basis are independent, so deg det = sum of `tops`.
    """
    basis: list[Coords]
    windows: np.ndarray
    tops: list[int]
    level: int
    kernel_dims: dict[int, int]
    image: ExponentialImage = dc_field(repr=False)
    generator: Coords | None = None

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ball(self) -> int:
        return self.image.ball

    @property
    def floor(self) -> int:
        return max(c.floor for u in self.basis for c in u if c.floor is not None)

    @property
    def covolume_degree(self) -> int:
        return sum(self.tops)

    def to_report(self) -> dict:
        out = {"rank": self.rank, "tops": self.tops, "level": self.level, "ball": self.ball,
               "floor": self.floor, "kernel_dims": {str(k): v for k, v in self.kernel_dims.items()},
               "basis": [[c.terms() for c in u] for u in self.basis]}
        if self.generator is not None:
            out["generator"] = [c.terms() for c in self.generator]
        return out


def unit_lattice(E: DrinfeldModule, lattice: Lattice, ball: int | None = None,
                 precision: int = constants.SessionDefaults.precision,
                 budget: int = constants.SessionDefaults.ball_budget,
                 extra_ball: int = constants.SessionDefaults.extra_ball,
                 image: ExponentialImage | None = None) -> UnitLattice:
    """
    A reduced A-basis of exp^-1(M), each element known to `precision` below its window.

    Level by level, a kernel vector of the window map joins the basis when its
    leading F_q^n-vector is independent of the leading vectors already chosen.
    """
    image = image or exponential_image(E, lattice, ball, precision, budget, extra_ball)
    f = image.field
    n = image.rank
    leads = np.zeros((0, n), dtype=np.int64)
    chosen: list[tuple[np.ndarray, int]] = []
    kernel_dims: dict[int, int] = {}
    s = image.start
    while len(chosen) < n:
        if s > image.budget:
            raise RankNotReached(f"exp^-1({lattice.name}) reached rank {len(chosen)} < {n} "
                                 f"by level {image.budget}")
        K = linalg.nullspace(f, image.ev_matrix(s))
        kernel_dims[s] = int(K.shape[0])
        block = slice((s - image.start) * n, (s - image.start + 1) * n)
        for y in K:
            lead = y[block]
            if not lead.any():
                continue
            candidate = np.vstack([leads, lead[None, :]])
            if linalg.rank(f, candidate) > leads.shape[0]:
                leads = candidate
                chosen.append((y, s))
                if len(chosen) == n:
                    break
        s += 1
    level = s - 1
    size = n * (level - image.start + 1)
    windows = np.zeros((n, size), dtype=np.int64)
    for i, (y, _) in enumerate(chosen):
        windows[i, :y.shape[0]] = y
    basis = [image.unit_from_window(w, level) for w in windows]
    tops = [top for _, top in chosen]
    logger.info(f"exp^-1({lattice.name}) for {E.name}: reduced basis with tops {tops}, "
                f"kernel dims {list(kernel_dims.values())}")
    return UnitLattice(basis, windows, tops, level, kernel_dims, image)


def unit_checks(units: UnitLattice) -> dict:
    """exp(u) lies in M, exp(t*u) lies in M, and each u has the window it was built from."""
    image = units.image
    floor = units.floor
    in_lattice = t_stable = windows = True
    for u, y in zip(units.basis, units.windows):
        in_lattice &= all(c.is_zero for c in fractional(image.exp(u, floor)))
        tu = [c.shift(1) for c in u]
        t_stable &= all(c.is_zero for c in fractional(image.exp(tu, floor + 1)))
        windows &= bool(np.array_equal(image.window_of(u, units.level), y))
    return {"in_lattice": bool(in_lattice), "t_stable": bool(t_stable), "windows": bool(windows)}


def span_degree(units: UnitLattice, w: Coords) -> int | None:
    """deg det(g*w)_g, the covolume degree of A[G]w; None when the g*w are dependent or too imprecise."""
    image = units.image
    S = image.lattice.constant_actions
    order = image.ring.order
    if image.rank != order:
        return None
    columns = [coordinate_map(image.field, S[g], w) for g in range(order)]
    matrix = [[columns[g][i] for g in range(order)] for i in range(image.rank)]
    try:
        det = laurent_det(image.field.algebra, matrix)
    except PrecisionExhausted:
        return None
    return None if det.is_zero else det.top


def is_generator(units: UnitLattice, w: Coords) -> bool:
    """A[G]w = U iff deg det(g*w)_g equals the covolume degree of the reduced basis."""
    return span_degree(units, w) == units.covolume_degree


def _idempotent_generator(units: UnitLattice) -> Coords:
    """Sum over primitive idempotents e of a lowest element of eU."""
    image = units.image
    f, ring = image.field, image.ring
    n, level = image.rank, units.level
    S = image.lattice.constant_actions
    K = linalg.nullspace(f, image.ev_matrix(level))
    levels = level - image.start + 1
    descending = np.concatenate([np.arange(j * n, (j + 1) * n) for j in reversed(range(levels))])
    total = np.zeros(n * levels, dtype=np.int64)
    for e in ring.algebra.idempotents:
        action = np.kron(np.eye(levels, dtype=np.int64), ring.action_matrix(e, S))
        rows = f.dot(K, action.T)
        reduced, pivots = linalg.rref(f, rows[:, descending])
        if not pivots:
            continue
        lowest = np.zeros_like(total)
        lowest[descending] = reduced[len(pivots) - 1]
        total = f.add(total, lowest)
    return image.unit_from_window(total, level)


def _search_generator(units: UnitLattice, seed: int) -> Coords | None:
    """Reduced basis elements first, then random A[G]-combinations of them."""
    for w in _candidates(units, np.random.default_rng(seed)):
        if is_generator(units, w):
            return w
    return None


def free_generator(units: UnitLattice, seed: int = constants.DEFAULT_SEED) -> Coords:
    """An A[G]-generator of U, or UNotFree."""
    if units.generator is not None:
        return units.generator
    ring = units.image.ring
    f = units.image.field
    if ring.order == 1:
        w = units.basis[0]
    elif ring.is_abelian and ring.order % f.char:
        w = _idempotent_generator(units)
    else:
        w = _search_generator(units, seed)
    if w is None or not is_generator(units, w):
        raise UNotFree(f"exp^-1({units.image.lattice.name}) has no A[G]-generator "
                       f"among {constants.FREENESS_TRIALS_PER_ELEMENT * ring.order} trials")
    units.generator = w
    logger.debug(f"A[G]-generator of exp^-1({units.image.lattice.name}): {w}")
    return w


def _candidates(units: UnitLattice, rng: np.random.Generator):
    image = units.image
    f, ring = image.field, image.ring
    S = image.lattice.constant_actions
    alg = f.algebra
    yield from units.basis
    top = max(units.tops)
    for _ in range(constants.FREENESS_TRIALS_PER_ELEMENT * ring.order):
        w = [LaurentSeries.zero(alg) for _ in range(image.rank)]
        for u, d in zip(units.basis, units.tops):
            c = int(f.random(rng))
            if not c:
                continue
            moved = coordinate_map(f, S[int(rng.integers(ring.order))], u)
            shift = int(rng.integers(top - d + 1))
            w = [a + b.shift(shift).scale(alg.scalar(c)) for a, b in zip(w, moved)]
        if not all(c.is_zero for c in w):
            yield w


def sublattice_generator(units: UnitLattice, seed: int = constants.DEFAULT_SEED) -> Coords:
    """
    u in U with A[G]u of finite index in U, the index as small as the search finds.

    The index is q^(span_degree(u) - covolume_degree).
    """
    best, best_degree = None, None
    for u in _candidates(units, np.random.default_rng(seed)):
        d = span_degree(units, u)
        if d is None or (best_degree is not None and d >= best_degree):
            continue
        best, best_degree = u, d
        if d == units.covolume_degree:
            break
    if best is None:
        raise UNotFree(f"exp^-1({units.image.lattice.name}) contains no free A[G]-sublattice of full rank "
                       f"among {constants.FREENESS_TRIALS_PER_ELEMENT * units.image.ring.order} trials")
    logger.debug(f"Free sublattice of exp^-1({units.image.lattice.name}) with index "
                 f"q^{best_degree - units.covolume_degree}")
    return best
