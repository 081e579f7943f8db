"""Partitions of a carrier {0, ..., n-1} in minimum-representative form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError


def _canonical(parent: list[int]) -> tuple[int, ...]:
    # parent is any labelling; rewrite to block minima
    first: dict[int, int] = {}
    out = []
    for i, lab in enumerate(parent):
        if lab not in first:
            first[lab] = i
        out.append(first[lab])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """An equivalence relation stored as ``labels[i] = min(block of i)``.

    Equality and hashing work on the canonical labels, so two partitions
    built from different block listings compare equal.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        n = len(labels)
        for i, lab in enumerate(labels):
            if not 0 <= lab < n:
                raise InputError(f"label {lab} out of range for size {n}")
        canon = _canonical(list(labels))
        object.__setattr__(self, "labels", canon)

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def identity(cls, n: int) -> Partition:
        return cls(tuple(range(n)))

    @classmethod
    def full(cls, n: int) -> Partition:
        return cls((0,) * n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        """Build from (possibly partial) blocks; missing elements become singletons."""
        lab = list(range(n))
        seen: set[int] = set()
        for block in blocks:
            block = list(block)
            if not block:
                continue
            for e in block:
                if not 0 <= e < n:
                    raise InputError(f"element {e} out of range for size {n}")
                if e in seen:
                    raise InputError(f"element {e} occurs in two blocks")
                seen.add(e)
            m = min(block)
            for e in block:
                lab[e] = m
        return cls(tuple(lab))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> Partition:
        return cls(tuple(int(v) for v in labels))

    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(i)
        return [tuple(b) for b in out.values()]

    def nontrivial_blocks(self) -> list[tuple[int, ...]]:
        return [b for b in self.blocks() if len(b) > 1]

    def block_count(self) -> int:
        return len(set(self.labels))

    def same(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def is_identity(self) -> bool:
        return all(lab == i for i, lab in enumerate(self.labels))

    def is_full(self) -> bool:
        return all(lab == 0 for lab in self.labels)

    def refines(self, other: Partition) -> bool:
        """True when self is contained in other as a relation."""
        _check_same_size(self, other)
        mapping: dict[int, int] = {}
        for lab, olab in zip(self.labels, other.labels):
            if mapping.setdefault(lab, olab) != olab:
                return False
        return True

    def meet(self, other: Partition) -> Partition:
        _check_same_size(self, other)
        keys: dict[tuple[int, int], int] = {}
        lab = [keys.setdefault((x, y), i) for i, (x, y) in enumerate(zip(self.labels, other.labels))]
        return Partition(tuple(lab))

    def join(self, other: Partition) -> Partition:
        _check_same_size(self, other)
        parent = list(self.labels)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, lab in enumerate(other.labels):
            ra, rb = find(i), find(lab)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return Partition(tuple(find(i) for i in range(self.size)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.intp)

    def format(self, names: Sequence[str] | None = None, omit_singletons=True) -> str:
        """Render as a literal such as ``0 2 | 1 | 3 4``."""
        name = (lambda e: names[e]) if names is not None else str
        blocks = self.blocks()
        if omit_singletons and len(blocks) < self.size:
            blocks = [b for b in blocks if len(b) > 1]
        return " | ".join(" ".join(name(e) for e in b) for b in blocks)

    def __str__(self):
        return "{" + self.format(omit_singletons=False) + "}"


def _check_same_size(p: Partition, q: Partition):
    if p.size != q.size:
        raise InputError(f"partition sizes differ: {p.size} vs {q.size}")


def parse_partition(text: str, n: int, names: Sequence[str] | None = None) -> Partition:
    """Parse ``0 2 | 1 | 3 4`` or ``{0 2 | 1}``; omitted elements are singletons."""
    lookup = {nm: i for i, nm in enumerate(names)} if names is not None else {}
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    blocks = []
    for chunk in text.split("|"):
        block = []
        for tok in chunk.split():
            block.append(parse_element(tok, n, lookup))
        blocks.append(block)
    return Partition.from_blocks(n, blocks)


def parse_element(tok: str, n: int, lookup: dict[str, int] | None = None) -> int:
    if lookup and tok in lookup:
        return lookup[tok]
    try:
        e = int(tok)
    except ValueError:
        raise InputError(f"unknown element {tok!r}") from None
    if not 0 <= e < n:
        raise InputError(f"element {e} out of range for size {n}")
    return e


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of {0..n-1}, via restricted growth strings in lex order."""
    if n == 0:
        yield Partition(())
        return
    rgs = [0] * n
    maxes = [0] * n  # maxes[i] = max(rgs[:i+1])

    while True:
        # rgs -> min-representative labels
        firsts: list[int] = []
        labels = []
        for i, r in enumerate(rgs):
            if r == len(firsts):
                firsts.append(i)
            labels.append(firsts[r])
        yield Partition(tuple(labels))
        i = n - 1
        while i > 0 and rgs[i] > maxes[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[i]


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
