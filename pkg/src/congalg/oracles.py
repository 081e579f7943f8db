"""Brute-force reference computations.

Nothing here reuses the union-find, pair-graph or trie machinery; these
routines enumerate directly and are only meant for small algebras.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .algebra import FiniteAlgebra
from .partition import Partition
from .terms import TermSet


def set_partitions(n: int):
    """All partitions of range(n) as lists of blocks (recursive insertion)."""
    if n == 0:
        yield []
        return
    for smaller in set_partitions(n - 1):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + [n - 1]] + smaller[i + 1:]
        yield smaller + [[n - 1]]


def _block_of(blocks, n):
    lab = [0] * n
    for i, b in enumerate(blocks):
        for e in b:
            lab[e] = i
    return lab


def brute_is_congruence(A: FiniteAlgebra, blocks_or_partition) -> bool:
    """Compatibility over all pairs of related argument tuples (not just one coordinate)."""
    n = A.size
    if isinstance(blocks_or_partition, Partition):
        lab = list(blocks_or_partition.labels)
    else:
        lab = _block_of(blocks_or_partition, n)
    for (_, ar), tab in zip(A.signature, A.tables):
        if ar == 0:
            continue
        for u in itertools.product(range(n), repeat=ar):
            for v in itertools.product(range(n), repeat=ar):
                if all(lab[x] == lab[y] for x, y in zip(u, v)) and lab[tab[u]] != lab[tab[v]]:
                    return False
    return True


def brute_congruences(A: FiniteAlgebra) -> list[Partition]:
    out = []
    for blocks in set_partitions(A.size):
        if brute_is_congruence(A, blocks):
            out.append(Partition.from_blocks(A.size, blocks))
    return out


def _contains_pairs(p: Partition, pairs) -> bool:
    return all(p.labels[a] == p.labels[b] for a, b in pairs)


def smallest_congruence_containing(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest congruence containing pairs, by search over all partitions."""
    pairs = list(pairs)
    cands = [p for p in brute_congruences(A) if _contains_pairs(p, pairs)]
    best = [p for p in cands if all(p.refines(q) for q in cands)]
    assert len(best) == 1
    return best[0]


def fixpoint_congruence(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest congruence containing pairs, by naive fixpoint: apply every
    operation to every pair of related argument tuples, close transitively,
    repeat until nothing changes."""
    n = A.size
    rel = {(i, i) for i in range(n)}
    for x, y in pairs:
        rel |= {(x, y), (y, x)}
    while True:
        new = set(rel)
        for (_, ar), tab in zip(A.signature, A.tables):
            if ar == 0:
                continue
            for u in itertools.product(range(n), repeat=ar):
                for v in itertools.product(range(n), repeat=ar):
                    if all((x, y) in rel for x, y in zip(u, v)):
                        new.add((int(tab[u]), int(tab[v])))
        changed = True
        while changed:
            extra = {(x, z) for (x, y) in new for (y2, z) in new if y == y2} - new
            changed = bool(extra)
            new |= extra
        if new == rel:
            break
        rel = new
    lab = [min(y for (x, y) in rel if x == i) for i in range(n)]
    return Partition(tuple(lab))


def syn_oracle(A: FiniteAlgebra, theta: Partition) -> Partition:
    """Refinement-maximum of the congruences contained in theta."""
    below = [c for c in brute_congruences(A) if c.refines(theta)]
    top = [c for c in below if all(d.refines(c) for d in below)]
    assert len(top) == 1
    return top[0]


def brute_translation_maps(A: FiniteAlgebra, F: TermSet) -> set[tuple[int, ...]]:
    """Every map a -> t(a, e), evaluating each term on each assignment."""
    n = A.size
    out = set()
    for t in F:
        for e in itertools.product(range(n), repeat=t.param_count):
            out.add(tuple(t.evaluate(A, a, e) for a in range(n)))
    return out


def brute_monoid(A: FiniteAlgebra) -> set[tuple[int, ...]]:
    """Closure of identity and one-step translations under composition, by
    repeated all-pairs composition."""
    n = A.size
    gens = set()
    for (_, ar), tab in zip(A.signature, A.tables):
        for slot in range(ar):
            for rest in itertools.product(range(n), repeat=ar - 1):
                gens.add(tuple(int(tab[rest[:slot] + (a,) + rest[slot:]]) for a in range(n)))
    maps = {tuple(range(n))} | gens
    while True:
        new = {tuple(f[g[a]] for a in range(n)) for f in maps for g in maps} | maps
        if new == maps:
            return maps
        maps = new


def brute_upper(A: FiniteAlgebra, F: TermSet, a: int, b: int) -> set[tuple[int, int]]:
    """theta^F(a, b) as a pair set: diagonal plus transitive closure of the
    symmetric step pairs, by naive iteration."""
    n = A.size
    rel = {(i, i) for i in range(n)}
    for f in brute_translation_maps(A, F):
        rel.add((f[a], f[b]))
        rel.add((f[b], f[a]))
    while True:
        new = rel | {(x, z) for (x, y) in rel for (y2, z) in rel if y == y2}
        if new == rel:
            return rel
        rel = new


def pair_image_closure(A: FiniteAlgebra, a: int, b: int, depth: int) -> set[tuple[int, int]]:
    """Pairs (f(a), f(b)) for translations f of term depth <= depth, obtained
    by pushing the pair itself through one-step translations."""
    n = A.size
    steps = []
    for (_, ar), tab in zip(A.signature, A.tables):
        for slot in range(ar):
            for rest in itertools.product(range(n), repeat=ar - 1):
                steps.append(lambda v, tab=tab, slot=slot, rest=rest: int(tab[rest[:slot] + (v,) + rest[slot:]]))
    level = {(a, b)}
    seen = set(level)
    for _ in range(depth):
        level = {(f(u), f(v)) for (u, v) in level for f in steps} - seen
        seen |= level
    return seen


def closure_contains(pairs: set[tuple[int, int]], c: int, d: int) -> bool:
    """Is (c, d) in the reflexive-symmetric-transitive closure of pairs?"""
    if c == d:
        return True
    adj: dict[int, set[int]] = {}
    for u, v in pairs:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen, stack = {c}, [c]
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return d in seen
