import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from posetk.poset import (
    Poset,
    antichain,
    antichains_in,
    canonical_key,
    chain,
    components,
    covers,
    disjoint_union,
    dual,
    format_poset,
    induced,
    is_antichain,
    is_interval,
    is_isomorphic,
    is_y_free_below,
    lb,
    lex_sum,
    maximal,
    minimal,
    parse_poset,
    remove,
    transitive_closure,
    ub,
)


def all_ascending_pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def random_poset(rng, n, p=0.4):
    pairs = [pr for pr in all_ascending_pairs(n) if rng.random() < p]
    return transitive_closure(pairs, n)


def brute_isomorphic(P, Q):
    if P.n != Q.n or len(P.rel) != len(Q.rel):
        return False
    labels = range(1, P.n + 1)
    for perm in itertools.permutations(labels):
        sigma = dict(zip(labels, perm))
        if all((sigma[i], sigma[j]) in Q.rel for i, j in P.rel):
            return True
    return False


def relabel_by_extension(P, rng):
    # Random linear extension; relabeling by it keeps labels topological.
    remaining = set(range(1, P.n + 1))
    order = []
    while remaining:
        mins = [x for x in remaining if not (lb(P, x) & remaining)]
        order.append(rng.choice(sorted(mins)))
        remaining.discard(order[-1])
    sigma = {x: k + 1 for k, x in enumerate(order)}
    return Poset(P.n, frozenset((sigma[i], sigma[j]) for i, j in P.rel))


@st.composite
def posets(draw, max_n=7):
    n = draw(st.integers(min_value=0, max_value=max_n))
    universe = all_ascending_pairs(n)
    if universe:
        pairs = draw(st.lists(st.sampled_from(universe), max_size=len(universe)))
    else:
        pairs = []
    return transitive_closure(pairs, n)


class TestConstruction:
    def test_closure_of_cover_pairs(self):
        P = transitive_closure([(1, 2), (2, 3), (3, 4), (2, 5)], 5)
        assert P.rel == frozenset(
            [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4)]
        )

    def test_descending_generator_rejected(self):
        with pytest.raises(ValueError):
            transitive_closure([(3, 2)], 3)
        with pytest.raises(ValueError):
            transitive_closure([(1, 4)], 3)

    def test_unclosed_rel_rejected(self):
        with pytest.raises(ValueError):
            Poset(3, frozenset([(1, 2), (2, 3)]))

    def test_chain_and_antichain(self):
        assert len(chain(5).rel) == 10
        assert antichain(4).rel == frozenset()
        assert maximal(chain(4)) == (4,)
        assert minimal(chain(4)) == (1,)
        assert maximal(antichain(3)) == (1, 2, 3)

    def test_covers_of_closure(self):
        P = transitive_closure([(1, 2), (2, 3), (3, 4), (2, 5)], 5)
        assert covers(P) == frozenset([(1, 2), (2, 3), (3, 4), (2, 5)])


class TestCombinators:
    def test_disjoint_union_rel_count(self):
        P, Q = chain(3), chain(4)
        assert len(disjoint_union(P, Q).rel) == len(P.rel) + len(Q.rel)

    def test_lex_sum_rel_count(self):
        P, Q = chain(3), antichain(4)
        R = lex_sum(P, Q)
        assert len(R.rel) == len(P.rel) + len(Q.rel) + P.n * Q.n
        assert maximal(R) == (4, 5, 6, 7)

    def test_lex_sum_of_chains_is_chain(self):
        assert lex_sum(chain(2), chain(3)).rel == chain(5).rel

    def test_dual_involution(self):
        P = transitive_closure([(1, 2), (2, 3), (3, 4), (2, 5)], 5)
        assert dual(dual(P)) == P
        assert dual(chain(6)) == chain(6)

    def test_induced_and_remove(self):
        P = transitive_closure([(1, 2), (2, 3), (3, 4), (2, 5)], 5)
        assert induced(P, [2, 3, 4]).rel == chain(3).rel
        Q = remove(P, 3)
        assert Q.n == 4
        # survivors 1,2,4,5 relabel to 1,2,3,4; (2,4) and (2,5) become (2,3),(2,4)
        assert Q.rel == frozenset([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])

    def test_components(self):
        P = disjoint_union(chain(2), disjoint_union(antichain(1), chain(3)))
        assert components(P) == ((1, 2), (3,), (4, 5, 6))
        assert components(chain(4)) == ((1, 2, 3, 4),)


class TestQueries:
    def test_lb_ub(self):
        P = transitive_closure([(1, 2), (1, 3), (2, 4), (3, 4), (4, 5)], 5)
        assert lb(P, 5) == frozenset([1, 2, 3, 4])
        assert lb(P, 4) == frozenset([1, 2, 3])
        assert ub(P, 1) == frozenset([2, 3, 4, 5])
        assert ub(P, 5) == frozenset()

    def test_antichain_enumeration_order(self):
        P = transitive_closure([(1, 2), (1, 3), (2, 4), (3, 4), (4, 5)], 5)
        got = antichains_in(P, lb(P, 5))
        assert got == [
            frozenset(),
            frozenset([1]),
            frozenset([2]),
            frozenset([3]),
            frozenset([4]),
            frozenset([2, 3]),
        ]

    def test_antichains_of_full_antichain(self):
        P = antichain(3)
        got = antichains_in(P, [1, 2, 3])
        assert len(got) == 8
        assert got[0] == frozenset()
        assert got[-1] == frozenset([1, 2, 3])

    def test_is_antichain(self):
        P = chain(3)
        assert is_antichain(P, [2])
        assert not is_antichain(P, [1, 3])

    def test_y_free_below(self):
        # one top, one middle, two incomparable bottoms
        Y = transitive_closure([(1, 3), (2, 3), (3, 4)], 4)
        assert not is_y_free_below(Y, 4)
        assert is_y_free_below(Y, 3)
        assert is_y_free_below(chain(5), 5)
        V = transitive_closure([(1, 3), (2, 3)], 3)
        assert is_y_free_below(V, 3)

    def test_interval_characterizations(self):
        assert is_interval(chain(5))
        assert is_interval(antichain(4))
        assert not is_interval(disjoint_union(chain(2), chain(2)))
        N = transitive_closure([(1, 3), (1, 4), (2, 4)], 4)
        assert is_interval(N)

    def test_interval_matches_dual(self):
        rng = random.Random(7)
        for _ in range(40):
            P = random_poset(rng, rng.randint(1, 7))
            assert is_interval(P) == is_interval(dual(P))


class TestCanonicalForm:
    def test_key_invariant_under_relabeling(self):
        rng = random.Random(11)
        for _ in range(60):
            P = random_poset(rng, rng.randint(1, 7))
            Q = relabel_by_extension(P, rng)
            assert canonical_key(P) == canonical_key(Q)

    def test_key_agrees_with_brute_force(self):
        rng = random.Random(13)
        for _ in range(120):
            n = rng.randint(1, 6)
            P = random_poset(rng, n, p=rng.choice([0.2, 0.4, 0.6]))
            Q = random_poset(rng, n, p=rng.choice([0.2, 0.4, 0.6]))
            assert is_isomorphic(P, Q) == brute_isomorphic(P, Q)

    def test_key_separates_same_invariants(self):
        # same size and relation count, different shapes
        P = disjoint_union(chain(3), antichain(1))
        Q = transitive_closure([(1, 4), (2, 4), (3, 4)], 4)
        assert len(P.rel) == len(Q.rel) == 3
        assert not is_isomorphic(P, Q)

    def test_dual_key_of_self_dual(self):
        diamond = transitive_closure([(1, 2), (1, 3), (2, 4), (3, 4)], 4)
        assert canonical_key(diamond) == canonical_key(dual(diamond))


class TestTextFormat:
    def test_parse_basic(self):
        text = "# demo\n5\n1 2\n2 3\n3 4\n\n2 5\n"
        P = parse_poset(text)
        assert P.n == 5
        assert len(P.rel) == 8

    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(20):
            P = random_poset(rng, rng.randint(0, 7))
            assert parse_poset(format_poset(P)) == P

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_poset("")
        with pytest.raises(ValueError):
            parse_poset("x\n")
        with pytest.raises(ValueError):
            parse_poset("3\n1 2 3\n")


@given(posets())
@settings(max_examples=120, deadline=None)
def test_dual_is_involution(P):
    assert dual(dual(P)) == P


@given(posets())
@settings(max_examples=120, deadline=None)
def test_closure_idempotent(P):
    assert transitive_closure(P.rel, P.n) == P


@given(posets())
@settings(max_examples=120, deadline=None)
def test_components_partition_labels(P):
    seen = sorted(x for comp in components(P) for x in comp)
    assert seen == list(range(1, P.n + 1))


@given(posets(max_n=6), posets(max_n=6))
@settings(max_examples=60, deadline=None)
def test_union_key_is_symmetric(P, Q):
    assert canonical_key(disjoint_union(P, Q)) == canonical_key(disjoint_union(Q, P))


@given(posets(max_n=5))
@settings(max_examples=60, deadline=None)
def test_cover_closure_round_trip(P):
    assert transitive_closure(covers(P), P.n) == P
