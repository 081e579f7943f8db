from congalg.corpus import (BINARY_CAP, FAMILY_CAP, binary_algebras, constant_unary2, corpus, semilattice2,
                            term_family)
from congalg.qomega import make_qn
from congalg.suites import SUITES, SuiteResult, run_suites, suite_comp, suite_syn


def test_corpus_contents():
    algs = corpus()
    assert len(algs) == BINARY_CAP + 2 + 4
    sizes = [A.size for A in binary_algebras()]
    assert sizes.count(1) == 1 and sizes.count(2) == 16 and sizes.count(3) == BINARY_CAP - 17
    assert len({A for A in binary_algebras()}) == BINARY_CAP
    assert [A.size for A in corpus(max_size=5)][-1] == 5


def test_corpus_is_reproducible():
    assert corpus() == corpus()
    assert binary_algebras(seed=1) != binary_algebras(seed=2)


def test_term_family_sizes():
    for A in (binary_algebras()[5], semilattice2(), constant_unary2(), make_qn(2).algebra):
        fam = term_family(A.signature)
        assert len(fam) == FAMILY_CAP
        assert len(set(fam)) == FAMILY_CAP
        assert all(1 <= len(F) <= 3 for F in fam)
    assert max(F.max_depth() for F in term_family(constant_unary2().signature)) <= 10


def test_suite_result_line():
    res = SuiteResult("demo", checked=3, counts={"k": 1}, seconds=0.25)
    assert res.ok and res.line() == "PASS\tdemo\tchecked=3\trefuted=0 k=1\t0.2s"
    res.refutations.append("x")
    assert res.line().startswith("FAIL")


def test_suites_on_small_input():
    algs = [semilattice2(), make_qn(2).algebra]
    assert suite_syn(algs).checked == 2 + 52
    assert suite_comp(algs).ok
    assert set(SUITES) == {"syn", "malcev", "lemma22", "comp", "lemma24", "quotient", "prop32"}


def test_run_suites_parallel_matches_serial():
    serial = run_suites(["syn", "malcev"])
    parallel = run_suites(["syn", "malcev"], threads=2)
    assert [(r.name, r.checked, r.counts) for r in serial] == [(r.name, r.checked, r.counts) for r in parallel]
