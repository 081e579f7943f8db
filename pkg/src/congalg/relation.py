"""Binary relations on {0..n-1} stored as one integer bitset per row."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError
from .partition import Partition


@dataclass(frozen=True)
class Relation:
    size: int
    rows: tuple[int, ...]

    @classmethod
    def empty(cls, n: int) -> Relation:
        return cls(n, (0,) * n)

    @classmethod
    def diagonal(cls, n: int) -> Relation:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> Relation:
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Relation:
        rows = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"pair ({a}, {b}) outside carrier of size {n}")
            rows[a] |= 1 << b
        return cls(n, tuple(rows))

    @classmethod
    def from_partition(cls, p: Partition) -> Relation:
        masks: dict[int, int] = {}
        for i, lab in enumerate(p.labels):
            masks[lab] = masks.get(lab, 0) | (1 << i)
        return cls(p.size, tuple(masks[lab] for lab in p.labels))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> Relation:
        n = m.shape[0]
        packed = np.packbits(np.asarray(m, dtype=bool), axis=1, bitorder="little")
        return cls(n, tuple(int.from_bytes(r.tobytes(), "little") for r in packed))

    def to_matrix(self) -> np.ndarray:
        n = self.size
        nbytes = (n + 7) // 8
        raw = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in self.rows),
                            dtype=np.uint8).reshape(n, nbytes)
        return np.unpackbits(raw, axis=1, count=n, bitorder="little").astype(bool)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return bool(self.rows[a] >> b & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for a, r in enumerate(self.rows):
            b = 0
            while r:
                if r & 1:
                    yield (a, b)
                r >>= 1
                b += 1

    def __len__(self):
        return sum(bin(r).count("1") for r in self.rows)

    def __le__(self, other: Relation) -> bool:
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))

    def issubset(self, other: Relation) -> bool:
        return self <= other

    def __or__(self, other: Relation) -> Relation:
        return Relation(self.size, tuple(r | s for r, s in zip(self.rows, other.rows)))

    def __and__(self, other: Relation) -> Relation:
        return Relation(self.size, tuple(r & s for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: Relation) -> Relation:
        return Relation(self.size, tuple(r & ~s for r, s in zip(self.rows, other.rows)))

    def converse(self) -> Relation:
        return Relation.from_pairs(self.size, ((b, a) for a, b in self.pairs()))

    def transitive_closure(self) -> Relation:
        """Warshall's algorithm on row bitsets."""
        rows = list(self.rows)
        n = self.size
        for k in range(n):
            bit = 1 << k
            rk = rows[k]
            for i in range(n):
                if rows[i] & bit:
                    rows[i] |= rk
        return Relation(n, tuple(rows))

    def is_reflexive(self) -> bool:
        return all(r >> i & 1 for i, r in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return self == self.converse()

    def is_transitive(self) -> bool:
        return self.transitive_closure() == self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def to_partition(self) -> Partition:
        if not self.is_equivalence():
            raise InputError("relation is not an equivalence relation")
        return Partition(tuple((r & -r).bit_length() - 1 for r in self.rows))

    def __str__(self):
        return "{" + ", ".join(f"({a},{b})" for a, b in self.pairs()) + "}"


def as_relation(theta) -> Relation:
    return theta if isinstance(theta, Relation) else Relation.from_partition(theta)
