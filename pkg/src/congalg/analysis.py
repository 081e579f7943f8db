"""theta^F, theta_F and syntactic congruences; determination checkers and
executable checks of the lemmas connecting them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .congruence import (DEFAULT_EXHAUSTIVE_CAP, UnionFind, all_congruences, generate_congruence,
                         is_congruence, quotient)
from .errors import InputError, ResourceError
from .partition import Partition, all_partitions
from .relation import Relation, as_relation
from .terms import DEFAULT_BUDGET, TermSet, TermX, compose_sets, translation_table


@dataclass(frozen=True)
class Verdict:
    """Outcome of a checker; truthy iff the property holds."""

    holds: bool
    counterexample: Any = None
    detail: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class MalcevWitness:
    """A chain certifying ``(c, d)`` in theta^F(a, b).

    Step i contributes the pair ``(t_i(a, e_i), t_i(b, e_i))``, reversed when
    ``swapped``; consecutive pairs must link up from c to d.
    """

    steps: tuple[tuple[TermX, tuple[int, ...], bool], ...]
    endpoints: tuple[int, int]
    generators: tuple[int, int]

    def step_pairs(self, A: FiniteAlgebra) -> list[tuple[int, int]]:
        a, b = self.generators
        out = []
        for term, assignment, swapped in self.steps:
            u, v = term.evaluate(A, a, assignment), term.evaluate(A, b, assignment)
            out.append((v, u) if swapped else (u, v))
        return out


def failing_link(A: FiniteAlgebra, w: MalcevWitness) -> Optional[int]:
    """Index of the first broken link (0 = start, len(steps) = end), or None."""
    if not w.steps:
        return 0
    try:
        pairs = w.step_pairs(A)
    except (InputError, IndexError, ValueError):
        return 0
    c, d = w.endpoints
    if pairs[0][0] != c:
        return 0
    for i in range(1, len(pairs)):
        if pairs[i - 1][1] != pairs[i][0]:
            return i
    if pairs[-1][1] != d:
        return len(pairs)
    return None


def verify_witness(A: FiniteAlgebra, w: MalcevWitness) -> bool:
    return failing_link(A, w) is None


def _check_elements(A, *elems):
    for e in elems:
        if not 0 <= e < A.size:
            raise InputError(f"element {e} outside carrier of size {A.size}")


def _step_edges(maps: np.ndarray, a: int, b: int):
    """Directed step edges (u, v, row, swapped) in canonical order, no loops."""
    us, vs = maps[:, a].tolist(), maps[:, b].tolist()
    edges = []
    seen = set()
    for r, (u, v) in enumerate(zip(us, vs)):
        if u == v:
            continue
        for x, y, sw in ((u, v, False), (v, u, True)):
            if (x, y) not in seen:
                seen.add((x, y))
                edges.append((x, y, r, sw))
    return edges


def _upper_partition(maps: np.ndarray, n: int, a: int, b: int) -> Partition:
    uf = UnionFind(n)
    us, vs = maps[:, a], maps[:, b]
    diff = us != vs
    for u, v in zip(us[diff].tolist(), vs[diff].tolist()):
        uf.union(u, v)
    return uf.partition()


def _bounded_reach(n: int, edges, max_steps: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for u, v, _, _ in edges:
        adj[u, v] = True
    reach = np.eye(n, dtype=bool)
    for _ in range(max_steps):
        nxt = reach | ((reach.astype(np.int64) @ adj.astype(np.int64)) > 0)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return reach


def theta_upper(A: FiniteAlgebra, F: TermSet, a: int, b: int, with_witness: bool = False,
                budget: float = DEFAULT_BUDGET, max_steps: Optional[int] = None):
    """theta^F(a, b): the diagonal plus all pairs joined by a chain of steps
    ``(t(a, e), t(b, e))`` (either orientation) with t in F.

    With ``max_steps`` only chains of at most that many steps count. With
    ``with_witness`` returns ``(relation, {(c, d): MalcevWitness})`` where each
    witness has the fewest steps, found breadth-first over steps taken in
    canonical term order.
    """
    if len(F) == 0:
        raise InputError("theta_upper needs a nonempty term set")
    _check_elements(A, a, b)
    n = A.size
    maps, prov = translation_table(A, F, budget)
    if not with_witness and max_steps is None:
        return Relation.from_partition(_upper_partition(maps, n, a, b))
    edges = _step_edges(maps, a, b)
    if not with_witness:
        return Relation.from_matrix(_bounded_reach(n, edges, max_steps))
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(n)]
    for u, v, r, sw in edges:
        adj[u].append((v, r, sw))
    limit = n if max_steps is None else max_steps
    pairs = [(i, i) for i in range(n)]
    witnesses = {}
    for c in range(n):
        parent = {c: None}
        dist = {c: 0}
        queue = deque([c])
        while queue:
            u = queue.popleft()
            if dist[u] >= limit:
                continue
            for v, r, sw in adj[u]:
                if v not in parent:
                    parent[v] = (u, r, sw)
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for d in parent:
            if d == c:
                continue
            chain = []
            x = d
            while parent[x] is not None:
                u, r, sw = parent[x]
                term, assignment = prov[r]
                chain.append((term, tuple(assignment), sw))
                x = u
            chain.reverse()
            witnesses[(c, d)] = MalcevWitness(tuple(chain), (c, d), (a, b))
            pairs.append((c, d))
    return Relation.from_pairs(n, pairs), witnesses


def _labels_of(theta, n: int) -> np.ndarray:
    if isinstance(theta, Relation):
        theta = theta.to_partition()
    if theta.size != n:
        raise InputError(f"relation has size {theta.size}, algebra has size {n}")
    return theta.as_array()


def _kernel_partition(cols: np.ndarray) -> Partition:
    # elements with identical column vectors share a block
    if cols.shape[0] == 0:
        return Partition.full(cols.shape[1])
    first: dict[tuple, int] = {}
    return Partition(tuple(first.setdefault(c, i) for i, c in enumerate(map(tuple, cols.T.tolist()))))


def theta_lower_partition(A: FiniteAlgebra, F: TermSet, theta, budget: float = DEFAULT_BUDGET) -> Partition:
    lab = _labels_of(theta, A.size)
    maps, _ = translation_table(A, F, budget)
    return _kernel_partition(lab[maps])


def theta_lower(A: FiniteAlgebra, F: TermSet, theta, budget: float = DEFAULT_BUDGET) -> Relation:
    """theta_F = {(a, b) : (f(a), f(b)) in theta for every translation f of F}.

    ``theta`` may be a Partition or an equivalence Relation.
    """
    return Relation.from_partition(theta_lower_partition(A, F, theta, budget))


# --------------------------------------------------------------------------
# syntactic congruence


class PairGraph:
    """Reverse step graph on unordered pairs {u < v}: an edge p -> q whenever
    some elementary translation sends p onto q. Pairs sent onto the diagonal
    carry no edge (the diagonal is never bad)."""

    def __init__(self, A: FiniteAlgebra):
        n = A.size
        self.n = n
        maps = A.elementary.maps
        U, V = np.triu_indices(n, k=1)
        U = U.astype(np.intp)
        V = V.astype(np.intp)
        src_ids = U * n + V
        srcs, tgts = [], []
        chunk = max(1, 2_000_000 // max(1, len(U)))
        for k0 in range(0, len(maps), chunk):
            block = maps[k0:k0 + chunk]
            FU, FV = block[:, U], block[:, V]
            mask = FU != FV
            lo, hi = np.minimum(FU, FV)[mask], np.maximum(FU, FV)[mask]
            srcs.append(np.broadcast_to(src_ids, FU.shape)[mask])
            tgts.append(lo * n + hi)
        src = np.concatenate(srcs) if srcs else np.empty(0, dtype=np.intp)
        tgt = np.concatenate(tgts) if tgts else np.empty(0, dtype=np.intp)
        key = np.unique(tgt * (n * n) + src)
        tgt, src = np.divmod(key, n * n)
        self.pred = src
        self.indptr = np.concatenate([[0], np.cumsum(np.bincount(tgt, minlength=n * n))])
        self.upper = (U, V)
        self.edge_count = len(src)

    def bad_closure(self, bad: np.ndarray) -> np.ndarray:
        """Propagate badness to every pair that reaches a bad pair."""
        bad = bad.copy()
        frontier = np.flatnonzero(bad)
        indptr, pred = self.indptr, self.pred
        while len(frontier):
            starts, ends = indptr[frontier], indptr[frontier + 1]
            lens = ends - starts
            total = int(lens.sum())
            if total == 0:
                break
            offs = np.repeat(starts - np.cumsum(lens) + lens, lens)
            cand = pred[np.arange(total) + offs]
            cand = cand[~bad[cand]]
            frontier = np.unique(cand)
            bad[frontier] = True
        return bad


@lru_cache(maxsize=64)
def pair_graph(A: FiniteAlgebra) -> PairGraph:
    return PairGraph(A)


def syn(A: FiniteAlgebra, theta, method: str = "pairgraph") -> Partition:
    """Largest congruence of A contained in the equivalence ``theta``.

    ``pairgraph`` marks pairs outside theta bad and propagates badness
    backwards along elementary translations; ``refine`` splits blocks by the
    blocks of their images until stable.
    """
    lab = _labels_of(theta, A.size)
    return _syn(A, tuple(lab.tolist()), method)


@lru_cache(maxsize=1 << 16)
def _syn(A: FiniteAlgebra, labels: tuple[int, ...], method: str) -> Partition:
    n = A.size
    lab = np.asarray(labels, dtype=np.intp)
    if method == "pairgraph":
        g = pair_graph(A)
        U, V = g.upper
        bad = np.zeros(n * n, dtype=bool)
        bad[(U * n + V)[lab[U] != lab[V]]] = True
        bad = g.bad_closure(bad).reshape(n, n)
        good = ~bad
        good[np.tril_indices(n, k=-1)] = False
        out = Partition(tuple(np.argmax(good, axis=0).tolist()))
        if __debug__:
            same = out.as_array()
            sym = np.triu(good, 1)
            assert np.array_equal(sym, np.triu(same[:, None] == same[None, :], 1)), \
                "syn result is not transitive"
    elif method == "refine":
        out = _syn_refine(A, lab)
    else:
        raise InputError(f"unknown syn method {method!r}")
    if __debug__:
        assert is_congruence(A, out).compatible, "syn result is not a congruence"
        assert out.refines(Partition(tuple(lab.tolist())))
    return out


def _syn_refine(A: FiniteAlgebra, lab: np.ndarray) -> Partition:
    maps = A.elementary.maps
    cur = Partition(tuple(lab.tolist()))
    while True:
        arr = cur.as_array()
        cols = np.vstack([arr[None, :], arr[maps]]) if len(maps) else arr[None, :]
        nxt = _kernel_partition(cols)
        if nxt == cur:
            return cur
        cur = nxt


# --------------------------------------------------------------------------
# determination checkers


def determines_principal(A: FiniteAlgebra, F: TermSet, budget: float = DEFAULT_BUDGET) -> Verdict:
    """theta(a, b) == theta^F(a, b) for all a, b.

    Counterexample: ``((a, b), (c, d))`` with (c, d) in theta(a, b) only.
    """
    if len(F) == 0:
        raise InputError("empty term set")
    n = A.size
    maps, _ = translation_table(A, F, budget)
    for a in range(n):
        for b in range(a + 1, n):
            full = generate_congruence(A, [(a, b)])
            up = _upper_partition(maps, n, a, b)
            if full != up:
                diff = Relation.from_partition(full) - Relation.from_partition(up)
                return Verdict(False, ((a, b), next(diff.pairs())))
    return Verdict(True)


def determines_syntactic(A: FiniteAlgebra, F: TermSet, mode: str = "exhaustive",
                         cap: int = DEFAULT_EXHAUSTIVE_CAP, budget: float = DEFAULT_BUDGET) -> Verdict:
    """syn(theta) == theta_F for every equivalence theta.

    ``principal`` mode answers through :func:`determines_principal`, which is
    equivalent; ``exhaustive`` mode sweeps every partition.
    """
    if mode == "principal":
        return determines_principal(A, F, budget)
    if mode != "exhaustive":
        raise InputError(f"unknown mode {mode!r}")
    if A.size > cap:
        raise ResourceError(f"algebra size {A.size} exceeds exhaustive cap {cap}; use principal-only mode", cap)
    maps, _ = translation_table(A, F, budget)
    for theta in all_partitions(A.size):
        lower = _kernel_partition(theta.as_array()[maps])
        if lower != syn(A, theta):
            return Verdict(False, theta)
    return Verdict(True)


def determines_principal_subcongruences(A: FiniteAlgebra, F: TermSet, G: TermSet,
                                        budget: float = DEFAULT_BUDGET) -> Verdict:
    """For all a != b some c != d in theta^F(a, b) has theta(c, d) == theta^G(c, d).

    Counterexample: the first failing pair (a, b).
    """
    if len(F) == 0 or len(G) == 0:
        raise InputError("empty term set")
    n = A.size
    fmaps, _ = translation_table(A, F, budget)
    gmaps, _ = translation_table(A, G, budget)
    good_cd = {}

    def determined(c, d):
        if (c, d) not in good_cd:
            good_cd[(c, d)] = generate_congruence(A, [(c, d)]) == _upper_partition(gmaps, n, c, d)
        return good_cd[(c, d)]

    for a in range(n):
        for b in range(a + 1, n):
            up = _upper_partition(fmaps, n, a, b)
            found = None
            for c in range(n):
                for d in range(c + 1, n):
                    if up.same(c, d) and determined(c, d):
                        found = (c, d)
                        break
                if found:
                    break
            if found is None:
                return Verdict(False, (a, b))
    return Verdict(True)


def _bounded_union(A, family, a, b, budget):
    n = A.size
    reach = np.eye(n, dtype=bool)
    for F, length in family:
        if length < 1:
            raise InputError("chain-length bounds must be >= 1")
        maps, _ = translation_table(A, F, budget)
        reach |= _bounded_reach(n, _step_edges(maps, a, b), length)
    return reach


def check_dpsc_witness(A: FiniteAlgebra, P: Sequence[tuple[TermSet, int]],
                       R: Sequence[tuple[TermSet, int]], budget: float = DEFAULT_BUDGET) -> Verdict:
    """Bounded-formula version of principal subcongruence determination.

    ``P`` and ``R`` list (term set, max chain steps); a formula counts when all
    its terms come from the set and its chain has at most that many steps.
    """
    n = A.size
    principal = {}
    for a in range(n):
        for b in range(a + 1, n):
            left = _bounded_union(A, P, a, b, budget)
            ok = False
            for c in range(n):
                for d in range(c + 1, n):
                    if not left[c, d]:
                        continue
                    if (c, d) not in principal:
                        full = Relation.from_partition(generate_congruence(A, [(c, d)]))
                        principal[(c, d)] = full == Relation.from_matrix(_bounded_union(A, R, c, d, budget))
                    if principal[(c, d)]:
                        ok = True
                        break
                if ok:
                    break
            if not ok:
                return Verdict(False, (a, b))
    return Verdict(True)


# --------------------------------------------------------------------------
# executable lemma checks


def verify_comp(A: FiniteAlgebra, F: TermSet, G: TermSet, theta, budget: float = DEFAULT_BUDGET) -> bool:
    """theta_{F o G} == (theta_F)_G."""
    lhs = theta_lower(A, compose_sets(F, G), theta, budget)
    rhs = theta_lower(A, G, theta_lower(A, F, theta, budget), budget)
    return lhs == rhs


def quotient_relation(theta: Partition, emap: Sequence[int], m: int) -> Partition:
    """theta / eta on A/eta, given the quotient map of eta (eta inside theta)."""
    lab = list(range(m))
    for a, blk in enumerate(emap):
        lab[blk] = emap[theta.labels[a]]
    return Partition(tuple(lab))


def verify_quotient_lemma(A: FiniteAlgebra, F: TermSet, theta, budget: float = DEFAULT_BUDGET) -> bool:
    """(a, b) in theta_F iff their classes are in (theta/syn)_F on A/syn(theta),
    and syn(theta/syn(theta)) is the identity."""
    if isinstance(theta, Relation):
        theta = theta.to_partition()
    s = syn(A, theta)
    B, emap = quotient(A, s)
    eta = quotient_relation(theta, emap, B.size)
    lower_a = theta_lower(A, F, theta, budget)
    lower_b = theta_lower(B, F, eta, budget)
    for a in range(A.size):
        for b in range(A.size):
            if ((a, b) in lower_a) != ((emap[a], emap[b]) in lower_b):
                return False
    return syn(B, eta).is_identity()


def transfer_status(A: FiniteAlgebra, F: TermSet, G: TermSet, cap: int = DEFAULT_EXHAUSTIVE_CAP,
                    budget: float = DEFAULT_BUDGET) -> str:
    """``confirmed``, ``vacuous`` (hypothesis fails) or ``refuted``.

    The hypothesis is checked on A and every quotient of A.
    """
    congs = all_congruences(A, cap)
    for c in congs:
        B = A if c.is_identity() else quotient(A, c)[0]
        if not determines_principal_subcongruences(B, F, G, budget):
            return "vacuous"
    ok = determines_syntactic(A, compose_sets(G, F), "exhaustive", cap, budget)
    return "confirmed" if ok else "refuted"


def verify_prop_3_2(A: FiniteAlgebra, F: TermSet, G: TermSet, cap: int = DEFAULT_EXHAUSTIVE_CAP,
                    budget: float = DEFAULT_BUDGET) -> bool:
    return transfer_status(A, F, G, cap, budget) != "refuted"
