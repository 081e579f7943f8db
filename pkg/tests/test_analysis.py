import itertools

import pytest
from hypothesis import given, settings, strategies as st

from congalg import oracles
from congalg.algebra import make_algebra
from congalg.analysis import (MalcevWitness, check_dpsc_witness, determines_principal,
                              determines_principal_subcongruences, determines_syntactic, failing_link,
                              transfer_status, syn, theta_lower, theta_lower_partition, theta_upper,
                              verify_comp, verify_quotient_lemma, verify_witness)
from congalg.congruence import generate_congruence
from congalg.errors import InputError, ResourceError
from congalg.partition import Partition, all_partitions, parse_partition
from congalg.qomega import a, b, make_qn
from congalg.relation import Relation
from congalg.terms import TermSet, X, enumerate_terms, parse_terms

from strategies import algebras, partitions_of, term_sets


def upper_pairs(A, F, x, y, **kw):
    return set(theta_upper(A, F, x, y, **kw).pairs())


def bounded_brute(A, F, x, y, k):
    """Pairs joined by at most k symmetric steps, by naive relational powers."""
    n = A.size
    step = set()
    for f in oracles.brute_translation_maps(A, F):
        if f[x] != f[y]:
            step |= {(f[x], f[y]), (f[y], f[x])}
    reach = {(i, i) for i in range(n)}
    for _ in range(k):
        reach |= {(u, w) for (u, v) in reach for (v2, w) in step if v == v2}
    return reach


# theta^F(a, b)

def test_upper_identity_terms_gives_the_pair(q2):
    F = TermSet(q2.signature, [X])
    assert upper_pairs(q2, F, 1, 3) == {(i, i) for i in range(5)} | {(1, 3), (3, 1)}


def test_upper_depth_one_q2(q2):
    F = enumerate_terms(q2.signature, 1)
    got = theta_upper(q2, F, 0, a(1)).to_partition()
    assert got == Partition.from_blocks(5, [[0, a(1)]])
    assert upper_pairs(q2, F, 0, a(1)) == oracles.brute_upper(q2, F, 0, a(1))


def test_upper_contains_diagonal_even_when_a_equals_b(q2):
    F = enumerate_terms(q2.signature, 1)
    assert upper_pairs(q2, F, 2, 2) == {(i, i) for i in range(5)}


def test_upper_empty_terms_rejected(q2):
    with pytest.raises(InputError):
        theta_upper(q2, TermSet(q2.signature, []), 0, 1)
    with pytest.raises(InputError):
        theta_upper(q2, enumerate_terms(q2.signature, 1), 0, 7)


def test_upper_stabilizes_to_principal(q4):
    d = 3
    F = enumerate_terms(q4.signature, d)
    for x, y in itertools.combinations(range(q4.size), 2):
        assert theta_upper(q4, F, x, y).to_partition() == generate_congruence(q4, [(x, y)])


def test_witnesses_verify_and_are_shortest(q2):
    F = enumerate_terms(q2.signature, 2)
    rel, wit = theta_upper(q2, F, 0, a(0), with_witness=True)
    assert set(wit) == {p for p in rel.pairs() if p[0] != p[1]}
    for (c, d), w in wit.items():
        assert verify_witness(q2, w)
        assert w.endpoints == (c, d)
        # no shorter chain exists
        assert (c, d) not in bounded_brute(q2, F, 0, a(0), len(w.steps) - 1)


def test_perturbed_witness_fails(q2):
    F = enumerate_terms(q2.signature, 2)
    _, wit = theta_upper(q2, F, 0, a(0), with_witness=True)
    (c, d), w = next(iter(wit.items()))
    other = next(e for e in range(5) if e not in (c, d))
    bad = MalcevWitness(w.steps, (c, other), w.generators)
    assert not verify_witness(q2, bad)
    assert failing_link(q2, bad) == len(w.steps)
    assert failing_link(q2, MalcevWitness((), (c, d), w.generators)) == 0


def test_bounded_chain_length(q2):
    F = enumerate_terms(q2.signature, 2)
    for k in (1, 2, 3):
        for x, y in [(0, a(0)), (a(0), b(0)), (0, a(1))]:
            assert upper_pairs(q2, F, x, y, max_steps=k) == bounded_brute(q2, F, x, y, k)


# theta_F

def test_lower_q2(q2):
    F = enumerate_terms(q2.signature, 1)
    theta = parse_partition("{0 b0 a1}", 5, ["0", "a0", "b0", "a1", "b1"])
    lower = theta_lower_partition(q2, F, theta)
    assert lower.refines(theta)
    # brute kernel
    maps = oracles.brute_translation_maps(q2, F)
    for x, y in itertools.combinations(range(5), 2):
        same = all(theta.same(f[x], f[y]) for f in maps)
        assert lower.same(x, y) == same


def test_lower_accepts_relation(q2):
    F = enumerate_terms(q2.signature, 1)
    theta = Partition.from_blocks(5, [[0, 2]])
    assert theta_lower(q2, F, Relation.from_partition(theta)) == theta_lower(q2, F, theta)
    with pytest.raises(InputError):
        theta_lower(q2, F, Relation.from_pairs(5, [(0, 2)]))


def test_lower_identity_term_is_theta(q2):
    theta = Partition.from_blocks(5, [[1, 2, 4]])
    assert theta_lower_partition(q2, TermSet(q2.signature, [X]), theta) == theta


# syn

NAMES = ["0", "a0", "b0", "a1", "b1"]


@pytest.mark.parametrize("text,want", [
    ("{0 b0 a1}", "{0 b0 a1}"),      # already a congruence
    ("{a0 b0}", ""),
    ("{0 a0 b0}", "{0 a0 b0}"),
    ("{0 a0 b0 a1 b1}", "{0 a0 b0 a1 b1}"),
])
def test_syn_examples_q2(q2, text, want):
    theta = parse_partition(text, 5, NAMES)
    got = syn(q2, theta)
    assert got == parse_partition(want, 5, NAMES)
    assert got == oracles.syn_oracle(q2, theta)


def test_syn_methods_agree_on_q3():
    A = make_qn(3).algebra
    congs = oracles.brute_congruences(A)
    for theta in itertools.islice(all_partitions(A.size), 0, None, 7):
        below = [c for c in congs if c.refines(theta)]
        top = [c for c in below if all(d.refines(c) for d in below)]
        assert syn(A, theta, "pairgraph") == syn(A, theta, "refine") == top[0]


def test_syn_unknown_method(q2):
    with pytest.raises(InputError):
        syn(q2, Partition.identity(5), "magic")


# determination checkers

def test_q4_depth_one_not_principal_determining(q4):
    v = determines_principal(q4, enumerate_terms(q4.signature, 1))
    assert not v
    assert v.counterexample == ((0, a(1)), (0, b(0)))
    # cross-check the pair (0, a2) against the oracles
    F = enumerate_terms(q4.signature, 1)
    assert oracles.brute_upper(q4, F, 0, a(2)) == {(i, i) for i in range(9)} | {
        (x, y) for x in (0, a(2), b(2)) for y in (0, a(2), b(2))}
    full = oracles.fixpoint_congruence(q4, [(0, a(2))])
    assert full == Partition.from_blocks(9, [[0, b(0), a(2), b(1), b(2)]])


def test_full_depth_determines(q4):
    F = enumerate_terms(q4.signature, 3)
    assert determines_principal(q4, F)
    assert determines_syntactic(q4, F, "exhaustive", cap=9)


def test_syntactic_modes_agree_q4(q4):
    F = enumerate_terms(q4.signature, 1)
    assert not determines_syntactic(q4, F, "principal")
    assert not determines_syntactic(q4, F, "exhaustive", cap=9)


def test_exhaustive_cap(q4):
    with pytest.raises(ResourceError) as exc:
        determines_syntactic(q4, enumerate_terms(q4.signature, 1), "exhaustive")
    assert "principal" in str(exc.value)


def test_semilattice_small_family(semilattice2):
    F = parse_terms(["x", "meet(x,_)"], semilattice2.signature)
    assert determines_principal(semilattice2, F)
    assert determines_syntactic(semilattice2, F)


def test_constant_map_needs_only_x(constant_map2):
    assert determines_principal(constant_map2, TermSet(constant_map2.signature, [X]))


def test_subcongruences_q4(q4):
    F1 = enumerate_terms(q4.signature, 1)
    v = determines_principal_subcongruences(q4, F1, F1)
    assert not v and v.counterexample == (0, a(2))
    # brute quantifier sweep over (c, d) inside theta^F(0, a2)
    inside = oracles.brute_upper(q4, F1, 0, a(2))
    for c, d in inside:
        if c < d:
            full = oracles.fixpoint_congruence(q4, [(c, d)])
            upper = oracles.brute_upper(q4, F1, c, d)
            assert {(x, y) for x in range(9) for y in range(9) if full.same(x, y)} != upper


def test_subcongruences_hold_at_full_depth(q4):
    F = enumerate_terms(q4.signature, 3)
    assert determines_principal_subcongruences(q4, F1 := enumerate_terms(q4.signature, 1), F)
    assert F1.issubset(F)


def test_dpsc_witness_q3():
    A = make_qn(3).algebra
    F2 = enumerate_terms(A.signature, 2)
    got = check_dpsc_witness(A, [(F2, 2)], [(F2, 2)])
    # oracle: literal quantifier sweep with bounded brute closures
    n = A.size
    ok = True
    for x, y in itertools.combinations(range(n), 2):
        left = bounded_brute(A, F2, x, y, 2)
        found = False
        for c, d in left:
            if c < d:
                full = oracles.fixpoint_congruence(A, [(c, d)])
                if {(u, v) for u in range(n) for v in range(n) if full.same(u, v)} == bounded_brute(A, F2, c, d, 2):
                    found = True
                    break
        if not found:
            ok = False
            break
    assert bool(got) == ok


def test_dpsc_witness_rejects_zero_bound(q2):
    with pytest.raises(InputError):
        check_dpsc_witness(q2, [(enumerate_terms(q2.signature, 1), 0)], [(enumerate_terms(q2.signature, 1), 1)])


# lemma checks

def test_comp_with_identity_terms(q2):
    F = enumerate_terms(q2.signature, 1)
    I = TermSet(q2.signature, [X])
    theta = Partition.from_blocks(5, [[0, 2, 3]])
    assert verify_comp(q2, F, I, theta)
    assert verify_comp(q2, I, F, theta)


def test_quotient_lemma_q2(q2):
    F = enumerate_terms(q2.signature, 1)
    for theta in all_partitions(5):
        assert verify_quotient_lemma(q2, F, theta)


def test_transfer_status_values(q2, semilattice2):
    F1 = enumerate_terms(q2.signature, 1)
    F2 = enumerate_terms(q2.signature, 2)
    assert transfer_status(q2, F2, F2) in ("confirmed", "vacuous")
    G = parse_terms(["x", "meet(x,_)"], semilattice2.signature)
    assert transfer_status(semilattice2, G, G) == "confirmed"
    assert transfer_status(q2, F1, TermSet(q2.signature, [X])) in ("confirmed", "vacuous")


# properties on random algebras

@settings(max_examples=60, deadline=None)
@given(st.data())
def test_upper_matches_brute(data):
    A = data.draw(algebras())
    F = data.draw(term_sets(A))
    x, y = data.draw(st.integers(0, A.size - 1)), data.draw(st.integers(0, A.size - 1))
    assert upper_pairs(A, F, x, y) == oracles.brute_upper(A, F, x, y)
    rel, wit = theta_upper(A, F, x, y, with_witness=True)
    assert all(verify_witness(A, w) for w in wit.values())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_upper_monotone_in_terms(data):
    A = data.draw(algebras())
    F, G = data.draw(term_sets(A)), data.draw(term_sets(A))
    x, y = data.draw(st.integers(0, A.size - 1)), data.draw(st.integers(0, A.size - 1))
    assert upper_pairs(A, F, x, y) <= upper_pairs(A, F | G, x, y)
    assert upper_pairs(A, F, x, y) <= set(Relation.from_partition(generate_congruence(A, [(x, y)])).pairs())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lower_antitone_in_terms(data):
    A = data.draw(algebras())
    F, G = data.draw(term_sets(A)), data.draw(term_sets(A))
    theta = data.draw(partitions_of(A.size))
    big = theta_lower_partition(A, F, theta)
    assert theta_lower_partition(A, F | G, theta).refines(big)
    assert syn(A, theta).refines(big)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_syn_properties(data):
    A = data.draw(algebras())
    theta = data.draw(partitions_of(A.size))
    s = syn(A, theta)
    assert s == syn(A, theta, "refine") == oracles.syn_oracle(A, theta)
    assert s.refines(theta)
    assert syn(A, s) == s


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_comp_identity_random(data):
    A = data.draw(algebras())
    F, G = data.draw(term_sets(A)), data.draw(term_sets(A))
    theta = data.draw(partitions_of(A.size))
    assert verify_comp(A, F, G, theta)
    assert verify_quotient_lemma(A, F, theta)
