import logging
from functools import cached_property
from itertools import permutations

import numpy as np

from equivcnf import constants
from equivcnf.errors import ConfigError

logger = logging.getLogger(__name__)


class FiniteGroup:
    """
    A finite group given by its Cayley table.

    Elements are the ids 0..n-1 with 0 the identity; `table[g, h]` is the id of g*h.
    """

    def __init__(self, table, labels=None, name: str = ""):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise ConfigError(f"Cayley table must be a non-empty square array, got shape {table.shape}")
        if table.min() < 0 or table.max() >= n:
            raise ConfigError("Cayley table entries must be element ids 0..n-1")
        ids = np.arange(n)
        if not (np.array_equal(table[0], ids) and np.array_equal(table[:, 0], ids)):
            raise ConfigError("Element 0 must be the identity of the Cayley table")
        for g in range(n):
            if len(set(table[g].tolist())) != n or len(set(table[:, g].tolist())) != n:
                raise ConfigError(f"Row or column {g} of the Cayley table is not a permutation")
        if n <= constants.ASSOCIATIVITY_CHECK_LIMIT:
            left = table[table[:, :, None], ids[None, None, :]]
            right = table[ids[:, None, None], table[None, :, :]]
            if not np.array_equal(left, right):
                a, b, c = (int(x[0]) for x in np.nonzero(left != right))
                raise ConfigError(f"Cayley table is not associative at ({a}, {b}, {c})")
        self.table = table
        self.order = n
        self.labels = [str(x) for x in labels] if labels is not None else [f"g{i}" for i in range(n)]
        self.name = name or f"G{n}"
        self.inverse = np.array([int(np.nonzero(table[g] == 0)[0][0]) for g in range(n)], dtype=np.int64)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], labels=["e"], name="1")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        ids = np.arange(n)
        labels = ["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
        return cls((ids[:, None] + ids[None, :]) % n, labels=labels, name=f"C{n}")

    @classmethod
    def from_permutations(cls, perms: dict[str, list[int]], name: str = "") -> "FiniteGroup":
        """Group of permutations composed as (g*h)(i) = g(h(i)); the first entry must be the identity."""
        labels = list(perms)
        images = [tuple(perms[k]) for k in labels]
        index = {p: i for i, p in enumerate(images)}
        if len(index) != len(images):
            raise ConfigError("Duplicate permutations in group definition")
        table = np.zeros((len(images), len(images)), dtype=np.int64)
        for i, g in enumerate(images):
            for j, h in enumerate(images):
                comp = tuple(g[h[k]] for k in range(len(h)))
                if comp not in index:
                    raise ConfigError(f"Permutations are not closed under composition: {labels[i]}*{labels[j]}")
                table[i, j] = index[comp]
        return cls(table, labels=labels, name=name)

    @classmethod
    def symmetric(cls, degree: int = 3) -> "FiniteGroup":
        perms = {"".join(map(str, p)): list(p) for p in permutations(range(degree))}
        return cls.from_permutations(perms, name=f"S{degree}")

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError as e:
            raise ConfigError(f"Unknown group element {label!r} in {self.name}") from e

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def generated_subgroup(self, gens) -> list[int]:
        members = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(self.table[x, g])
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return sorted(members)

    @cached_property
    def commutator_order(self) -> int:
        """Order of the commutator subgroup G'."""
        comms = {int(self.table[self.table[a, b], self.table[self.inverse[a], self.inverse[b]]])
                 for a in range(self.order) for b in range(self.order)}
        return len(self.generated_subgroup(comms))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.table[x, g])
            k += 1
        return k

    def powers(self, g: int) -> list[int]:
        out, x = [0], g
        while x != 0:
            out.append(x)
            x = int(self.table[x, g])
        return out

    @cached_property
    def conjugacy_classes(self) -> list[list[int]]:
        seen, classes = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            cls_ = sorted({int(self.table[self.table[h, g], self.inverse[h]]) for h in range(self.order)})
            seen.update(cls_)
            classes.append(cls_)
        return classes

    def cyclic_p_subgroups(self, p: int) -> list[tuple[int, list[int]]]:
        """Nontrivial cyclic subgroups of p-power order, as (generator, members)."""
        out, seen = [], set()
        for g in range(1, self.order):
            k = self.element_order(g)
            while k % p == 0:
                k //= p
            if k != 1:
                continue
            members = tuple(sorted(self.powers(g)))
            if members not in seen:
                seen.add(members)
                out.append((g, list(members)))
        return out
