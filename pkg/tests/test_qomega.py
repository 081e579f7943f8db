import numpy as np
import pytest

from congalg import oracles
from congalg.algebra import make_algebra
from congalg.congruence import all_congruences, generate_congruence, monolith
from congalg.errors import InputError
from congalg.partition import Partition
from congalg.qomega import (a, audit_tables, b, check_sentence_1, check_sentence_2, depth_growth_experiment,
                            embedding_exceptions, make_qn, minimal_depth, qn_congruence_report, qn_labels)

DEPTHS = [2, 3, 4, 5, 6]  # least depth for i = 1..5, cross-checked below


def test_q1_is_three_element():
    A = make_qn(1).algebra
    assert A.size == 3 and A.labels == ("0", "a0", "b0")
    assert not np.asarray(A.tables[1]).any()


def test_q2_tables(q2):
    assert q2.op("prod", a(0), b(1)) == b(0)
    assert q2.op("meet", a(1), a(1)) == a(1)
    assert q2.op("meet", a(1), b(1)) == 0
    nz = np.argwhere(np.asarray(q2.tables[1]))
    assert nz.tolist() == [[a(0), b(1)]]


def test_q3_products():
    A = make_qn(3).algebra
    assert A.size == 7
    assert A.op("prod", a(1), b(2)) == b(1)
    assert A.op("prod", a(0), b(2)) == 0


def test_make_qn_rejects_nonpositive():
    with pytest.raises(InputError):
        make_qn(0)


def test_labels():
    assert qn_labels(3) == ["0", "a0", "b0", "a1", "b1", "a2", "b2"]


@pytest.mark.parametrize("n", [1, 2, 3, 10, 40])
def test_sentences_hold(n):
    A = make_qn(n).algebra
    assert check_sentence_1(A, "prod")
    assert check_sentence_2(A, "prod")


def test_sentence_2_fails_on_chain():
    # 3-element chain under min with bottom 0: 1 min 2 == 1 min 1
    A = make_algebra(3, [("min", 2, [0, 0, 0, 0, 1, 1, 0, 1, 2]), ("z", 0, [0])])
    assert check_sentence_1(A, "min")
    v = check_sentence_2(A, "min")
    assert not v
    x, y, x2, y2 = v.counterexample
    T = np.asarray(A.tables[0])
    assert T[x, y] == T[x2, y2] != 0 and (x, y) != (x2, y2)


def test_sentence_1_fails_when_zero_absorbs_badly():
    A = make_algebra(2, [("op", 2, [1, 0, 0, 0]), ("z", 0, [0])])
    assert check_sentence_1(A, "op").counterexample == (0, 0)


def test_sentence_inputs():
    A = make_algebra(2, [("op", 2, [0, 0, 0, 1])])
    with pytest.raises(InputError):
        check_sentence_1(A, "op")
    with pytest.raises(InputError):
        check_sentence_2(make_qn(2).algebra, "zero")


def test_audit_clean():
    for n in range(1, 30):
        assert audit_tables(n) == []


@pytest.mark.parametrize("n", range(1, 12))
def test_embedding(n):
    assert embedding_exceptions(n) == []
    big = make_qn(n + 1).algebra
    new = [tuple(p) for p in np.argwhere(np.asarray(big.tables[1])) if max(p) >= 2 * n + 1]
    assert new == [(a(n - 1), b(n))]


def test_depth_golden_against_independent_closure():
    for i, want in zip(range(1, 6), DEPTHS):
        A = make_qn(i + 2).algebra
        reach = [oracles.closure_contains(oracles.pair_image_closure(A, 0, a(i), d), 0, b(0)) for d in range(want + 1)]
        assert reach[-1] and not any(reach[:-1])


def test_depth_growth_experiment():
    rows = depth_growth_experiment(5)
    assert [r.depth for r in rows] == DEPTHS
    assert all(r.verified and r.error == "" for r in rows)
    for r in rows:
        assert r.witness.endpoints == (0, b(0))


def test_minimal_depth_reports_budget():
    row = minimal_depth(4, budget=50)
    assert row.depth is None and "budget" in row.error


def test_minimal_depth_limit():
    row = minimal_depth(3, max_depth=2)
    assert row.depth is None and row.error


def test_depth_growth_input():
    with pytest.raises(InputError):
        depth_growth_experiment(0)


def test_q2_congruences(q2):
    congs = all_congruences(q2)
    assert len(congs) == 10
    assert set(congs) == set(oracles.brute_congruences(q2))
    assert monolith(q2) is None


def test_q2_principal_examples(q2):
    assert generate_congruence(q2, [(a(0), b(0))]) == Partition.from_blocks(5, [[0, a(0), b(0)]])
    assert generate_congruence(q2, [(a(1), b(1))]) == Partition.from_blocks(5, [[0, b(0), a(1), b(1)]])


@pytest.mark.parametrize("n", [2, 3, 6])
def test_report(n):
    rep = qn_congruence_report(n)
    size = 2 * n + 1
    assert len(rep.principal) == size * (size - 1) // 2
    assert rep.monolith is None and rep.intersection.is_identity()
    for (x, y), p in rep.principal:
        assert p.same(x, y)
