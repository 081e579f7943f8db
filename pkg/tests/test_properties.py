"""Randomized cross-checks of the core algorithms against brute-force oracles."""

import itertools

from hypothesis import given, settings, strategies as st

from congalg import oracles
from congalg.congruence import all_congruences, generate_congruence, is_congruence, quotient
from congalg.partition import Partition

from strategies import algebras, partitions_of


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_generate_matches_fixpoint(data):
    A = data.draw(algebras())
    n = A.size
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    got = generate_congruence(A, pairs)
    assert got == oracles.fixpoint_congruence(A, pairs)
    assert is_congruence(A, got).compatible
    assert all(got.same(x, y) for x, y in pairs)


@settings(max_examples=60, deadline=None)
@given(algebras(max_size=4))
def test_all_congruences_match_brute(A):
    want = set(oracles.brute_congruences(A))
    assert set(all_congruences(A)) == want
    assert set(all_congruences(A, method="join")) == want


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_is_congruence_matches_brute(data):
    A = data.draw(algebras())
    p = data.draw(partitions_of(A.size))
    cert = is_congruence(A, p)
    assert cert.compatible == oracles.brute_is_congruence(A, p)
    if not cert.compatible:
        j, u, v = cert.counterexample
        assert all(p.same(x, y) for x, y in zip(u, v))
        assert not p.same(A.op(j, *u), A.op(j, *v))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_generate_monotone(data):
    A = data.draw(algebras())
    n = A.size
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    extra = data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
    assert generate_congruence(A, pairs).refines(generate_congruence(A, pairs + [extra]))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_quotient_map_is_homomorphism(data):
    A = data.draw(algebras())
    c = generate_congruence(A, [data.draw(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)))])
    B, emap = quotient(A, c)
    assert B.size == c.block_count()
    for j, (_, ar) in enumerate(A.signature):
        for args in itertools.product(range(A.size), repeat=ar):
            assert emap[A.op(j, *args)] == B.op(j, *(emap[x] for x in args))
    assert Partition(tuple(emap)) == c
