"""Congruence generation, enumeration, quotients and monoliths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .algebra import FiniteAlgebra, slot_table
from .errors import InputError, PreconditionError, ResourceError
from .partition import Partition, all_partitions

DEFAULT_EXHAUSTIVE_CAP = 6


class UnionFind:
    """Union-find with path compression; roots are always block minima."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def partition(self) -> Partition:
        return Partition(tuple(self.find(i) for i in range(len(self.parent))))


@dataclass(frozen=True)
class CongruenceCertificate:
    """Result of a compatibility test.

    When ``compatible`` is false, ``counterexample`` is ``(op, u, v)``: two
    argument tuples differing in one coordinate, whose differing entries are
    in one block while ``op(u)`` and ``op(v)`` are not.
    """

    partition: Partition
    compatible: bool
    counterexample: Optional[tuple[int, tuple[int, ...], tuple[int, ...]]] = None


def _check_size(A: FiniteAlgebra, p: Partition):
    if p.size != A.size:
        raise InputError(f"partition has size {p.size}, algebra has size {A.size}")


def is_congruence(A: FiniteAlgebra, p: Partition) -> CongruenceCertificate:
    _check_size(A, p)
    n = A.size
    lab = p.as_array()
    for j, (_, ar) in enumerate(A.signature):
        for slot in range(ar):
            st = slot_table(A.tables[j], slot)          # (n^(k-1), n)
            img = lab[st]
            bad = img != img[:, lab]                    # compare u with rep(u)
            if bad.any():
                r, u = np.argwhere(bad)[0]
                v = int(lab[u])
                rest = np.unravel_index(int(r), (n,) * (ar - 1)) if ar > 1 else ()
                rest = [int(e) for e in rest]
                tu = tuple(rest[:slot] + [int(u)] + rest[slot:])
                tv = tuple(rest[:slot] + [v] + rest[slot:])
                return CongruenceCertificate(p, False, (j, tu, tv))
    return CongruenceCertificate(p, True)


def _validate_pairs(A: FiniteAlgebra, pairs):
    out = []
    for a, b in pairs:
        a, b = int(a), int(b)
        if not (0 <= a < A.size and 0 <= b < A.size):
            raise InputError(f"pair ({a}, {b}) outside carrier of size {A.size}")
        out.append((a, b))
    return out


def generate_congruence(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest congruence containing ``pairs`` (union-find + FIFO worklist)."""
    pairs = _validate_pairs(A, pairs)
    cols = A.elementary.columns
    uf = UnionFind(A.size)
    work = deque()
    for a, b in pairs:
        if uf.union(a, b):
            work.append((a, b))
    while work:
        u, v = work.popleft()
        fu, fv = cols[u], cols[v]
        diff = fu != fv
        for x, y in zip(fu[diff].tolist(), fv[diff].tolist()):
            if uf.union(x, y):
                work.append((x, y))
    return uf.partition()


def principal_congruence(A: FiniteAlgebra, a: int, b: int) -> Partition:
    return generate_congruence(A, [(a, b)])


def principal_congruences(A: FiniteAlgebra) -> dict[tuple[int, int], Partition]:
    """theta(a, b) for every a < b."""
    return {(a, b): generate_congruence(A, [(a, b)])
            for a in range(A.size) for b in range(a + 1, A.size)}


def all_congruences(A: FiniteAlgebra, cap: int = DEFAULT_EXHAUSTIVE_CAP,
                    method: str = "enumerate") -> list[Partition]:
    """Every congruence of A, sorted by canonical labels.

    ``method="enumerate"`` filters all partitions through :func:`is_congruence`;
    ``method="join"`` closes the principal congruences and the identity under join.
    """
    if A.size > cap:
        raise ResourceError(
            f"algebra size {A.size} exceeds exhaustive cap {cap}; use principal-only mode", cap)
    if method not in ("enumerate", "join"):
        raise InputError(f"unknown method {method!r}")
    return list(_all_congruences(A, method))


@lru_cache(maxsize=4096)
def _all_congruences(A: FiniteAlgebra, method: str) -> tuple[Partition, ...]:
    if method == "enumerate":
        found = [p for p in all_partitions(A.size) if is_congruence(A, p).compatible]
    else:
        found = _join_closure(A)
    return tuple(sorted(found, key=lambda p: p.labels))


def _join_closure(A: FiniteAlgebra) -> list[Partition]:
    gens = set(principal_congruences(A).values())
    seen = {Partition.identity(A.size)} | gens
    frontier = list(seen)
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p.join(g)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    return list(seen)


def quotient(A: FiniteAlgebra, c: Partition) -> tuple[FiniteAlgebra, list[int]]:
    """A/c with blocks numbered by ascending minimum; returns (algebra, element map)."""
    _check_size(A, c)
    cert = is_congruence(A, c)
    if not cert.compatible:
        raise PreconditionError(f"partition is not a congruence: {cert.counterexample}", cert)
    reps = sorted(set(c.labels))
    index = {r: i for i, r in enumerate(reps)}
    emap = [index[lab] for lab in c.labels]
    emap_arr = np.asarray(emap, dtype=np.intp)
    reps_arr = np.asarray(reps, dtype=np.intp)
    tables = []
    for (_, ar), tab in zip(A.signature, A.tables):
        sub = tab[np.ix_(*([reps_arr] * ar))] if ar else tab
        qt = emap_arr[sub]
        if __debug__ and ar:
            # well-definedness: any choice of block members gives the same block
            full = emap_arr[tab]
            assert np.array_equal(full, qt[np.ix_(*([emap_arr] * ar))])
        tables.append(qt)
    labels = None
    if A.labels is not None:
        labels = ["/".join(A.labels[e] for e in b) for b in c.blocks()]
        labels = [lbl if "/" not in lbl else "[" + lbl + "]" for lbl in labels]
    B = FiniteAlgebra(A.signature, len(reps), tables, name=f"{A.name}/c", labels=labels)
    return B, emap


def monolith(A: FiniteAlgebra) -> Optional[Partition]:
    """Intersection of all theta(a, b), a != b, if that is not the identity."""
    mu = Partition.full(A.size)
    for p in principal_congruences(A).values():
        mu = mu.meet(p)
        if mu.is_identity():
            return None
    return None if mu.is_identity() else mu
