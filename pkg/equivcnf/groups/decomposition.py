"""
Decompositions F_q[G] = sum_i M_{n_i}(R_i) with commutative R_i, and reduced determinants.

A decomposition is loaded from the bundled catalog (or built for abelian G),
verified once by linear algebra, and then used to push matrices over F_q[G],
A[G], F_q[G][Z]/Z^N and F_inf[G] into blocks where ordinary determinants
make sense. Results come back to Z(F_q[G]) through the center map.
"""
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from equivcnf import constants
from equivcnf.algebra import linalg
from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.laurent import LaurentSeries, laurent_det
from equivcnf.algebra.truncated import TruncatedRing, charpoly, det_commutative, matmul
from equivcnf.errors import ConfigError, DecompositionInvalid, HypothesisViolated, NotIsomorphism
from equivcnf.groups.group import FiniteGroup
from equivcnf.groups.group_ring import GroupRing

logger = logging.getLogger(__name__)


@dataclass
class Block:
    size: int
    ring: FiniteAlgebra
    images: np.ndarray
    label: str = ""

    @property
    def dim(self) -> int:
        return self.size * self.size * self.ring.dim

    def identity(self) -> np.ndarray:
        out = self.ring.zeros((self.size, self.size))
        for i in range(self.size):
            out[i, i] = self.ring.one
        return out


def load_catalog(path: Path = constants.CATALOG_PATH) -> dict:
    try:
        with open(path) as fh:
            return yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Failed to read decomposition catalog {path}: {e}")
        raise ConfigError(f"Cannot read decomposition catalog {path}") from e


def catalog_group(name: str, path: Path = constants.CATALOG_PATH) -> FiniteGroup:
    groups = load_catalog(path).get("groups", {})
    if name not in groups:
        raise ConfigError(f"Group {name!r} is not in the catalog (known: {sorted(groups)})")
    return FiniteGroup.from_permutations(groups[name]["permutations"], name=name)


class DecompositionData:
    def __init__(self, ring: GroupRing, blocks: list[Block], name: str = ""):
        self.ring = ring
        self.blocks = blocks
        self.name = name or f"decomposition of {ring.algebra.name}"
        self.verified = False
        self.center_map = None
        self.center_inverse = None

    def __repr__(self) -> str:
        sizes = ", ".join(f"M_{b.size}({b.ring.name})" for b in self.blocks)
        return f"DecompositionData({self.ring.algebra.name} = {sizes})"

    @property
    def is_trivial(self) -> bool:
        """One 1x1 block over F_q[G] itself, the abelian case."""
        return len(self.blocks) == 1 and self.blocks[0].size == 1 and self.blocks[0].ring is self.ring.algebra

    @classmethod
    def abelian(cls, ring: GroupRing) -> "DecompositionData":
        if not ring.is_abelian:
            raise HypothesisViolated(f"{ring.group.name} is not abelian")
        images = np.eye(ring.order, dtype=np.int64)[:, None, None, :]
        return cls(ring, [Block(1, ring.algebra, images, label="abelian")], name=f"{ring.algebra.name} (identity)")

    @classmethod
    def from_dict(cls, ring: GroupRing, data: dict, name: str = "") -> "DecompositionData":
        f = ring.field
        if int(data.get("characteristic", f.char)) != f.char:
            raise ConfigError(f"Decomposition {name!r} is for characteristic {data['characteristic']}, not {f.char}")
        blocks = []
        try:
            for spec in data["blocks"]:
                rdata = spec["ring"]
                R = FiniteAlgebra.from_table(f, rdata["table"], labels=rdata.get("labels"), name=rdata.get("name", ""))
                n_i = int(spec["size"])
                images = np.zeros((ring.order, n_i, n_i, R.dim), dtype=np.int64)
                for label, matrix in spec["images"].items():
                    images[ring.group.index(label)] = np.asarray(matrix, dtype=np.int64).reshape(n_i, n_i, R.dim)
                blocks.append(Block(n_i, R, images % f.q, label=spec.get("label", "")))
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"Malformed decomposition entry {name!r}: {e}")
            raise ConfigError(f"Malformed decomposition entry {name!r}") from e
        return cls(ring, blocks, name=name)

    @classmethod
    def for_ring(cls, ring: GroupRing, path: Path = constants.CATALOG_PATH) -> "DecompositionData":
        """The identity decomposition for abelian G, otherwise the matching catalog entry, verified."""
        if ring.is_abelian:
            return cls.abelian(ring).verify()
        for name, entry in load_catalog(path).get("decompositions", {}).items():
            if entry.get("group") == ring.group.name and int(entry.get("characteristic", -1)) == ring.field.char:
                return cls.from_dict(ring, entry, name=name).verify()
        raise ConfigError(f"No catalog decomposition for {ring.algebra.name}")

    # verification

    def violations(self) -> list[str]:
        try:
            self.verify()
        except NotIsomorphism as e:
            return [f"{e} (witness {e.witness})"]
        return []

    def verify(self) -> "DecompositionData":
        ring, f = self.ring, self.ring.field
        group = ring.group
        if group.commutator_order % f.char == 0:
            raise HypothesisViolated(f"l = {f.char} divides |G'| = {group.commutator_order}")
        for i, b in enumerate(self.blocks):
            if not np.array_equal(b.images[0], b.identity()):
                raise NotIsomorphism(f"Block {i} does not send the identity to 1", witness=("e",))
            for g in range(group.order):
                for h in range(group.order):
                    prod = matmul(b.ring, b.images[g], b.images[h])
                    if not np.array_equal(prod, b.images[group.table[g, h]]):
                        raise NotIsomorphism(f"Block {i} is not multiplicative",
                                             witness=(group.labels[g], group.labels[h]))
        total = sum(b.dim for b in self.blocks)
        if total != group.order:
            raise NotIsomorphism(f"Dimension count {total} differs from |G| = {group.order}", witness=("dim", total))
        flat = np.concatenate([b.images.reshape(group.order, -1) for b in self.blocks], axis=1)
        if linalg.rank(f, flat) != group.order:
            raise NotIsomorphism("Decomposition map has a nonzero kernel", witness=("kernel",))
        self._build_center_map()
        self.verified = True
        logger.info(f"Verified {self!r}")
        return self

    def _build_center_map(self):
        f = self.ring.field
        columns = []
        for c, csum in enumerate(self.ring.class_sums):
            col = []
            for i, b in enumerate(self.blocks):
                img = self.block_image(i, csum)
                scalar = img[0, 0]
                if not np.array_equal(img, self._scalar_matrix(b, scalar)):
                    raise NotIsomorphism(f"Class sum {c} is not central in block {i}", witness=("center", c, i))
                col.append(scalar)
            columns.append(np.concatenate(col))
        phi = np.stack(columns, axis=1)
        if phi.shape[0] != phi.shape[1]:
            raise NotIsomorphism(f"Block centers have dimension {phi.shape[0]}, Z(F_q[G]) has {phi.shape[1]}",
                                 witness=("center", phi.shape))
        self.center_map = phi
        self.center_inverse = linalg.inverse(f, phi)

    @staticmethod
    def _scalar_matrix(block: Block, value) -> np.ndarray:
        out = block.ring.zeros((block.size, block.size))
        for i in range(block.size):
            out[i, i] = value
        return out

    def _require(self):
        if not self.verified:
            raise DecompositionInvalid(f"{self.name} has not been verified")

    # images

    def block_image(self, i: int, x) -> np.ndarray:
        """Image (..., n_i, n_i, d_i) of F_q[G] elements (..., |G|) in block i."""
        f = self.ring.field
        x = np.asarray(x, dtype=np.int64)
        imgs = self.blocks[i].images
        return f.sum(f.mul(x[..., :, None, None, None], imgs), axis=-4)

    def matrix_block(self, i: int, T) -> np.ndarray:
        """
        Block-i image of a matrix over F_q[G] (r, c, |G|) or over A[G] (r, c, D, |G|).

        The result is (r n_i, c n_i, d_i), respectively (r n_i, c n_i, D, d_i).
        """
        T = np.asarray(T, dtype=np.int64)
        n_i = self.blocks[i].size
        img = self.block_image(i, T)
        r, c = T.shape[:2]
        if T.ndim == 3:
            return img.transpose(0, 2, 1, 3, 4).reshape(r * n_i, c * n_i, -1)
        D = T.shape[2]
        return img.transpose(0, 3, 1, 4, 2, 5).reshape(r * n_i, c * n_i, D, -1)

    def pullback(self, values: list) -> np.ndarray:
        """Central F_q[G] elements from per-block values (..., d_i) of the block centers."""
        self._require()
        f = self.ring.field
        v = np.concatenate([np.asarray(x, dtype=np.int64) for x in values], axis=-1)
        z = f.sum(f.mul(v[..., None, :], self.center_inverse), axis=-1)
        return self.ring.from_center(z)

    def block_pullback_matrix(self, i: int) -> np.ndarray:
        """F_q matrix (|G|, d_i) sending block-i center values to F_q[G]."""
        offset = sum(b.ring.dim for b in self.blocks[:i])
        part = self.center_inverse[:, offset:offset + self.blocks[i].ring.dim]
        return self.ring.field.dot(self.ring.class_sums.T, part)

    # reduced determinants

    def nrd(self, T) -> np.ndarray:
        """Reduced determinant of a square matrix over F_q[G]."""
        self._require()
        values = [det_commutative(b.ring, self.matrix_block(i, T)) for i, b in enumerate(self.blocks)]
        return self.pullback(values)

    def nrd_truncated(self, T) -> np.ndarray:
        """Reduced determinant of a matrix over F_q[G][Z]/Z^N given as (r, r, N, |G|); returns (N, |G|)."""
        self._require()
        N = np.asarray(T).shape[2]
        values = []
        for i, b in enumerate(self.blocks):
            ring = TruncatedRing(b.ring, N)
            values.append(det_commutative(ring, self.matrix_block(i, T)))
        return self.pullback(values)

    def nrd_poly(self, T) -> np.ndarray:
        """Reduced determinant of a matrix over A[G] given as (r, r, D, |G|); returns an A[G] element."""
        self._require()
        T = np.asarray(T, dtype=np.int64)
        r, D = T.shape[0], T.shape[2]
        values = []
        P = max(b.size for b in self.blocks) * r * max(D - 1, 0) + 1
        for i, b in enumerate(self.blocks):
            ring = TruncatedRing(b.ring, P)
            block = self.matrix_block(i, T)
            padded = np.zeros(block.shape[:2] + (P, b.ring.dim), dtype=np.int64)
            padded[:, :, :D] = block
            values.append(det_commutative(ring, padded))
        return trim_ag(self.pullback(values))

    def nrd_charpoly(self, T) -> np.ndarray:
        """Nrd(t*I - T) for T over F_q[G], as an A[G] element (monic of degree r*n_i in block i)."""
        self._require()
        polys = [charpoly(b.ring, self.matrix_block(i, T)) for i, b in enumerate(self.blocks)]
        L = max(p.shape[0] for p in polys)
        values = []
        for p, b in zip(polys, self.blocks):
            padded = np.zeros((L, b.ring.dim), dtype=np.int64)
            padded[:p.shape[0]] = p
            values.append(padded)
        return trim_ag(self.pullback(values))

    def nrd_laurent(self, matrix, floor: int | None = None) -> LaurentSeries:
        """Reduced determinant of a square matrix of series over F_inf[G]."""
        self._require()
        alg = self.ring.algebra
        if self.is_trivial:
            return laurent_det(alg, matrix, floor)
        r = len(matrix)
        result = LaurentSeries.zero(alg)
        for i, b in enumerate(self.blocks):
            n_i = b.size
            rows = []
            for s in range(r):
                for a in range(n_i):
                    row = []
                    for u in range(r):
                        for c in range(n_i):
                            coeff_map = b.images[:, a, c, :].T
                            row.append(matrix[s][u].map_coefficients(coeff_map, b.ring))
                    rows.append(row)
            det = laurent_det(b.ring, rows, floor)
            result = result + det.map_coefficients(self.block_pullback_matrix(i), alg)
        return result

    def to_report(self) -> dict:
        return {"name": self.name, "verified": self.verified,
                "blocks": [{"label": b.label, "size": b.size, "ring": b.ring.name, "ring_dim": b.ring.dim}
                           for b in self.blocks]}


def trim_ag(a) -> np.ndarray:
    """Drop vanishing top t-coefficients of an A[G] element, keeping at least the constant row."""
    a = np.asarray(a, dtype=np.int64)
    nz = np.nonzero(a.any(axis=-1))[0]
    return a[: int(nz[-1]) + 1] if nz.size else a[:1] * 0


def decomposition_verify(decomposition: DecompositionData) -> bool | list[str]:
    """True when the decomposition is an algebra isomorphism, else the list of violations."""
    problems = decomposition.violations()
    return True if not problems else problems
