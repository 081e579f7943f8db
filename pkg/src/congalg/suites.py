"""Property sweeps over the built-in corpus.

Each suite returns a :class:`SuiteResult`; any entry in ``refutations`` is a
bug in the library, not a data outcome.
"""

from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import oracles
from .algebra import FiniteAlgebra
from .analysis import (_upper_partition, determines_principal, determines_syntactic, transfer_status, syn,
                       theta_lower, theta_lower_partition, theta_upper, verify_comp, verify_quotient_lemma,
                       verify_witness)
from .congruence import DEFAULT_EXHAUSTIVE_CAP, generate_congruence
from .corpus import DEFAULT_SEED, corpus, term_family
from .partition import Partition, all_partitions
from .relation import Relation
from .terms import TermSet, X, enumerate_terms, stabilization_depth, translation_table


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    refutations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.refutations

    def line(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in sorted(self.counts.items()))
        status = "PASS" if self.ok else "FAIL"
        return (f"{status}\t{self.name}\tchecked={self.checked}\trefuted={len(self.refutations)}"
                f"{extra}\t{self.seconds:.1f}s")


def _partitions(A: FiniteAlgebra, rng: random.Random, sample: int, exhaustive_to: int = 5):
    if A.size <= exhaustive_to:
        return list(all_partitions(A.size))
    out = [Partition.identity(A.size), Partition.full(A.size)]
    for _ in range(sample):
        k = rng.randint(1, A.size)
        out.append(Partition(tuple(rng.randrange(k) for _ in range(A.size))))
    return out


def _timed(fn):
    @functools.wraps(fn)
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    return run


@_timed
def suite_syn(algebras=None, seed=DEFAULT_SEED) -> SuiteResult:
    """Pair-graph syn equals the brute-force oracle for every partition (size <= 5)."""
    res = SuiteResult("syn-oracle")
    for A in algebras if algebras is not None else corpus(seed, max_size=5):
        for theta in all_partitions(A.size):
            res.checked += 1
            got, want = syn(A, theta), oracles.syn_oracle(A, theta)
            if got != want:
                res.refutations.append((A.name, str(theta), str(got), str(want)))
    return res


@_timed
def suite_malcev(algebras=None, seed=DEFAULT_SEED) -> SuiteResult:
    """theta^F at stabilization depth equals theta(a, b); every witness verifies."""
    res = SuiteResult("malcev")
    witnesses = 0
    for A in algebras if algebras is not None else corpus(seed):
        d = stabilization_depth(A)
        F = enumerate_terms(A.signature, d)
        for a in range(A.size):
            for b in range(A.size):
                res.checked += 1
                rel, wit = theta_upper(A, F, a, b, with_witness=True, budget=float("inf"))
                if rel != Relation.from_partition(generate_congruence(A, [(a, b)])):
                    res.refutations.append((A.name, (a, b), "relation differs"))
                for (c, d_), w in wit.items():
                    witnesses += 1
                    if not verify_witness(A, w) or not all(t in F for t, _, _ in w.steps):
                        res.refutations.append((A.name, (a, b), (c, d_), "witness fails"))
    res.counts["witnesses"] = witnesses
    return res


@_timed
def suite_lemma22(algebras=None, seed=DEFAULT_SEED, per_algebra=200) -> SuiteResult:
    """Exhaustive and principal modes of determines_syntactic agree."""
    res = SuiteResult("lemma22")
    holds = 0
    for A in algebras if algebras is not None else corpus(seed, max_size=5):
        for F in term_family(A.signature, seed)[:per_algebra]:
            res.checked += 1
            ex = determines_syntactic(A, F, "exhaustive")
            pr = determines_syntactic(A, F, "principal")
            holds += bool(ex)
            if bool(ex) != bool(pr):
                res.refutations.append((A.name, repr(F), bool(ex), bool(pr)))
    res.counts["determining"] = holds
    return res


@_timed
def suite_comp(algebras=None, seed=DEFAULT_SEED, per_algebra=3) -> SuiteResult:
    """theta_{F o G} == (theta_F)_G on random instances plus {x} degenerate cases."""
    res = SuiteResult("comp")
    rng = random.Random(seed)
    for A in algebras if algebras is not None else corpus(seed):
        fam = term_family(A.signature, seed)
        ident = TermSet(A.signature, [X])
        parts = _partitions(A, rng, 4)
        cases = []
        for _ in range(per_algebra):
            cases.append((rng.choice(fam), rng.choice(fam), rng.choice(parts)))
        F = rng.choice(fam)
        theta = rng.choice(parts)
        cases += [(ident, F, theta), (F, ident, theta)]
        for F, G, theta in cases:
            res.checked += 1
            if not verify_comp(A, F, G, theta, budget=float("inf")):
                res.refutations.append((A.name, repr(F), repr(G), str(theta)))
    return res


@_timed
def suite_lemma24(algebras=None, seed=DEFAULT_SEED, per_algebra=20) -> SuiteResult:
    """(a, b) in theta_F implies theta^F(a, b) is inside theta."""
    res = SuiteResult("lemma24")
    rng = random.Random(seed + 1)
    for A in algebras if algebras is not None else corpus(seed):
        fam = term_family(A.signature, seed)
        sample = fam if len(fam) <= per_algebra else rng.sample(fam, per_algebra)
        parts = _partitions(A, rng, 8)
        for F in sample:
            maps, _ = translation_table(A, F, float("inf"))
            for theta in parts:
                lower = theta_lower_partition(A, F, theta, float("inf"))
                for a in range(A.size):
                    for b in range(a + 1, A.size):
                        if not lower.same(a, b):
                            continue
                        res.checked += 1
                        up = theta_upper(A, F, a, b, budget=float("inf"))
                        if not up <= Relation.from_partition(theta):
                            res.refutations.append((A.name, repr(F), str(theta), (a, b)))
    return res


@_timed
def suite_quotient(algebras=None, seed=DEFAULT_SEED, per_algebra=10) -> SuiteResult:
    """Lemma on theta_F through A/syn(theta), and syn(theta/syn(theta)) = identity."""
    res = SuiteResult("quotient")
    rng = random.Random(seed + 2)
    for A in algebras if algebras is not None else corpus(seed):
        fam = term_family(A.signature, seed)
        parts = _partitions(A, rng, per_algebra)
        for _ in range(per_algebra):
            F, theta = rng.choice(fam), rng.choice(parts)
            res.checked += 1
            if not verify_quotient_lemma(A, F, theta, budget=float("inf")):
                res.refutations.append((A.name, repr(F), str(theta)))
    return res


@_timed
def suite_prop32(algebras=None, seed=DEFAULT_SEED, per_algebra=10,
                 cap=DEFAULT_EXHAUSTIVE_CAP) -> SuiteResult:
    """Principal subcongruence determination by (F, G) on A and its quotients
    implies G o F determines syntactic congruences on A."""
    res = SuiteResult("prop32")
    rng = random.Random(seed + 3)
    counts = {"confirmed": 0, "vacuous": 0}
    for A in algebras if algebras is not None else corpus(seed, max_size=cap):
        fam = term_family(A.signature, seed)
        for _ in range(per_algebra):
            F, G = rng.choice(fam), rng.choice(fam)
            res.checked += 1
            status = transfer_status(A, F, G, cap, budget=float("inf"))
            if status == "refuted":
                res.refutations.append((A.name, repr(F), repr(G)))
            else:
                counts[status] += 1
    res.counts.update(counts)
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "syn": suite_syn,
    "malcev": suite_malcev,
    "lemma22": suite_lemma22,
    "comp": suite_comp,
    "lemma24": suite_lemma24,
    "quotient": suite_quotient,
    "prop32": suite_prop32,
}


def _run_named(name: str, seed: int) -> SuiteResult:
    return SUITES[name](seed=seed)


def run_suites(names, seed=DEFAULT_SEED, threads=1) -> list[SuiteResult]:
    names = list(SUITES) if "all" in names else list(names)
    if threads > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(_run_named, nm, seed) for nm in names]
            return [f.result() for f in futs]
    return [SUITES[nm](seed=seed) for nm in names]
