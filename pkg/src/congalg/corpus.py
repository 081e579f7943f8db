"""Built-in algebra corpus and the sampled term-set family for property sweeps."""

from __future__ import annotations

import itertools
import random
from math import comb

from .algebra import FiniteAlgebra, make_algebra
from .qomega import make_qn
from .terms import TermSet, enumerate_terms

DEFAULT_SEED = 20170715
BINARY_CAP = 500
FAMILY_CAP = 200


def binary_algebra(size: int, flat) -> FiniteAlgebra:
    code = "".join(map(str, flat))
    return make_algebra(size, [("op", 2, list(flat))], name=f"B{size}_{code}")


def binary_algebras(seed: int = DEFAULT_SEED, cap: int = BINARY_CAP) -> list[FiniteAlgebra]:
    """Every one-binary-operation table on 1 and 2 elements, then a fixed-seed
    sample of 3-element tables up to ``cap`` algebras in total."""
    out = [binary_algebra(1, (0,))]
    out += [binary_algebra(2, t) for t in itertools.product(range(2), repeat=4)]
    rng = random.Random(seed)
    codes = rng.sample(range(3 ** 9), cap - len(out))
    for code in codes:
        flat = []
        for _ in range(9):
            code, r = divmod(code, 3)
            flat.append(r)
        out.append(binary_algebra(3, tuple(reversed(flat))))
    return out


def semilattice2() -> FiniteAlgebra:
    return make_algebra(2, [("meet", 2, [0, 0, 0, 1])], name="SL2")


def constant_unary2() -> FiniteAlgebra:
    """Two elements, constant 0 and a unary operation sending both to 0."""
    return make_algebra(2, [("zero", 0, [0]), ("f", 1, [0, 0])], name="CU2")


def corpus(seed: int = DEFAULT_SEED, max_size: int | None = None) -> list[FiniteAlgebra]:
    algs = binary_algebras(seed) + [semilattice2(), constant_unary2()]
    algs += [make_qn(n).algebra for n in range(2, 6)]
    if max_size is not None:
        algs = [A for A in algs if A.size <= max_size]
    return algs


def family_depth(n_terms_at, want: int = FAMILY_CAP, max_subset: int = 3, start: int = 2,
                 limit: int = 16) -> int:
    d = start
    while d < limit:
        k = n_terms_at(d)
        if sum(comb(k, r) for r in range(1, max_subset + 1)) >= want:
            return d
        d += 1
    return d


def term_family(sig, seed: int = DEFAULT_SEED, cap: int = FAMILY_CAP,
                max_subset: int = 3) -> list[TermSet]:
    """Nonempty subsets of at most ``max_subset`` terms, drawn from terms of
    depth <= 2 (deeper when that gives fewer than ``cap`` subsets), shuffled
    with a fixed seed and cut at ``cap``."""
    d = family_depth(lambda k: len(enumerate_terms(sig, k)), cap, max_subset)
    pool = enumerate_terms(sig, d).terms
    subsets = [c for r in range(1, max_subset + 1) for c in itertools.combinations(pool, r)]
    rng = random.Random(seed)
    rng.shuffle(subsets)
    return [TermSet(sig, s) for s in subsets[:cap]]
