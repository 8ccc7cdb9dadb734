import itertools
import json
import random
import time

import pytest

from posetk.embed import (
    EmbeddingCertificate,
    EmbeddingStep,
    add_top_cert,
    antichain_to_chain_cert,
    cert_from_json,
    cert_to_json,
    chain_univ_cert,
    lift_cert,
    max_el_cert,
    p_diamond,
    p_diamond_c59_cert,
    two_chains_cert,
    verify,
)
from posetk.engine import apply_D
from posetk.poset import (
    antichain,
    canonical_key,
    chain,
    covers,
    disjoint_union,
    lb,
    lex_sum,
    maximal,
    minimal,
    remove,
    transitive_closure,
)
from posetk.posetgen import nonisomorphic_posets


def brute_isomorphic(P, Q):
    if P.n != Q.n or len(P.rel) != len(Q.rel):
        return False
    labels = range(1, P.n + 1)
    for perm in itertools.permutations(labels):
        sigma = dict(zip(labels, perm))
        if all((sigma[i], sigma[j]) in Q.rel for i, j in P.rel):
            return True
    return False


def atomic_steps(cert):
    out = []
    for s in cert.steps:
        if s.rule in ("strong-D", "dual"):
            out.append(s)
        else:
            out.extend(s.substeps)
    return out


# max_el_cert


def test_max_el_two_points():
    c = max_el_cert(antichain(2), 2)
    assert c.length == 1
    assert c.target.n == 3
    assert verify(c).ok


def test_max_el_on_chain_is_identity():
    c = max_el_cert(chain(4), 4)
    assert c.length == 0
    assert canonical_key(c.target) == canonical_key(chain(4))
    assert verify(c).ok


def test_max_el_topped_y_is_identity():
    Y = transitive_closure([(1, 3), (2, 3), (3, 4)], 4)
    c = max_el_cert(Y, 4)
    assert c.length == 0
    assert canonical_key(c.target) == canonical_key(Y)


def test_max_el_rejects_non_maximal():
    with pytest.raises(ValueError):
        max_el_cert(chain(3), 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_max_el_all_classes(n):
    for P in nonisomorphic_posets(n):
        for m in maximal(P):
            c = max_el_cert(P, m)
            k = P.n - len(lb(P, m)) - 1
            assert c.length == k
            assert c.target.n == P.n + k
            assert verify(c).ok


def test_max_el_numeric_small():
    P = transitive_closure([(1, 3), (2, 4)], 4)
    c = max_el_cert(P, 4)
    assert c.length == 2
    r = verify(c, numeric=True, qs=(2, 3))
    assert r.ok
    assert r.numeric_checked > 0


# two_chains_cert


def test_two_chains_zero_is_identity():
    c = two_chains_cert(0, 5)
    assert c.length == 0
    assert canonical_key(c.source) == canonical_key(chain(5))


def test_two_chains_one_one():
    c = two_chains_cert(1, 1)
    assert c.length == 1
    assert canonical_key(c.target) == canonical_key(chain(3))
    step = c.steps[0]
    assert step.system.m == 3
    assert step.system.antichain == frozenset({1})
    assert verify(c).ok


def test_two_chains_three_nine():
    c = two_chains_cert(3, 9)
    assert c.length == 3
    assert canonical_key(c.target) == canonical_key(chain(15))
    assert verify(c).ok


@pytest.mark.parametrize("a,b", [(1, 0), (1, 2), (2, 1), (2, 2), (3, 2)])
def test_two_chains_numeric(a, b):
    c = two_chains_cert(a, b)
    assert c.length == a
    assert c.target.n == 2 * a + b
    r = verify(c, numeric=True, qs=(2,))
    assert r.ok
    assert r.numeric_checked >= 1


# antichain_to_chain_cert


def test_antichain_single_point():
    c = antichain_to_chain_cert(1)
    assert c.length == 0
    assert c.target.n == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_antichain_to_chain_shape(n):
    c = antichain_to_chain_cert(n)
    assert c.length == n - 1
    assert canonical_key(c.source) == canonical_key(antichain(n))
    assert canonical_key(c.target) == canonical_key(chain(2 * n - 1))
    assert verify(c).ok


def test_antichain_six_is_five_steps():
    c = antichain_to_chain_cert(6)
    assert c.kind == "strong"
    assert c.length == 5
    assert all(s.rule == "strong-D" for s in c.steps)
    assert c.target.n == 11


# add_top_cert


def test_add_top_identity_inner():
    inner = two_chains_cert(0, 3)
    c = add_top_cert(inner, chain(2))
    assert c.length == 0
    assert canonical_key(c.source) == canonical_key(chain(5))


def test_add_top_doubles_length():
    inner = two_chains_cert(1, 1)
    c = add_top_cert(inner, chain(2))
    assert c.length == 2
    assert canonical_key(c.source) == canonical_key(lex_sum(antichain(2), chain(2)))
    assert canonical_key(c.target) == canonical_key(chain(6))
    r = verify(c, numeric=True, qs=(2,))
    assert r.ok


def test_add_top_empty_context():
    inner = two_chains_cert(2, 1)
    c = add_top_cert(inner, chain(0))
    assert c.length == 4
    assert canonical_key(c.target) == canonical_key(chain(7))
    assert verify(c).ok


def test_add_top_rejects_weak_inner():
    weak = EmbeddingCertificate(chain(1), chain(1), "weak", ())
    with pytest.raises(ValueError):
        add_top_cert(weak, chain(1))


# lift_cert


def test_lift_below_keeps_validity():
    base = two_chains_cert(2, 1)
    lifted = lift_cert(base, below=chain(3))
    assert lifted.length == base.length
    assert lifted.source.n == base.source.n + 3
    assert verify(lifted).ok


def test_lift_disjoint_keeps_validity():
    base = two_chains_cert(2, 2)
    lifted = lift_cert(base, disjoint=antichain(2))
    assert lifted.length == base.length
    assert verify(lifted).ok


def test_lift_below_non_chain_context():
    V = transitive_closure([(1, 3), (2, 3)], 3)
    lifted = lift_cert(two_chains_cert(1, 1), below=V)
    assert verify(lifted).ok
    r = verify(lifted, numeric=True, qs=(2,))
    assert r.ok and r.numeric_checked >= 1


# chain_univ_cert


def test_chain_univ_two_points():
    c = chain_univ_cert(antichain(2))
    assert c.length == 2
    assert canonical_key(c.target) == canonical_key(chain(4))
    assert verify(c).ok


def test_chain_univ_chain_is_identity():
    c = chain_univ_cert(chain(5))
    assert c.length == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_chain_univ_size_law(n):
    for P in nonisomorphic_posets(n):
        c = chain_univ_cert(P)
        want = P.n * P.n - 2 * len(P.rel)
        assert c.target.n == want
        assert c.target.rel == chain(want).rel
        assert c.kind == "strong"
        assert verify(c).ok


def test_chain_univ_random_relabelings():
    rng = random.Random(11)
    for _ in range(10):
        n = rng.randint(3, 6)
        pairs = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
            if rng.random() < 0.4
        ]
        P = transitive_closure(pairs, n)
        c = chain_univ_cert(P)
        assert c.target.n == P.n * P.n - 2 * len(P.rel)
        assert verify(c).ok


def test_chain_univ_diamond_fixture():
    P = p_diamond()
    c = chain_univ_cert(P)
    assert c.target.n == 97
    assert verify(c).ok


# the diamond fixture


def test_p_diamond_shape():
    P = p_diamond()
    assert P.n == 13
    assert len(P.rel) == 36
    cov = covers(P)
    assert len(cov) == 24
    assert minimal(P) == (1, 2, 3, 4)
    assert maximal(P) == (11, 12, 13)
    for mid in range(5, 11):
        assert len([c for c in cov if c[1] == mid]) == 2
        assert len([c for c in cov if c[0] == mid]) == 2
    for lo in minimal(P):
        for hi in maximal(P):
            assert (lo, hi) in P.rel


def test_p_diamond_c59_certificate():
    t0 = time.time()
    cert = p_diamond_c59_cert()
    strong = sum(s.atomic_count()[0] for s in cert.steps)
    duals = sum(s.atomic_count()[1] for s in cert.steps)
    assert (strong, duals) == (46, 2)
    assert cert.kind == "weak"
    assert cert.target.rel == chain(59).rel
    res = verify(cert)
    assert res.ok
    assert time.time() - t0 < 60


def test_p_diamond_intermediate_is_three_layer():
    cert = p_diamond_c59_cert()
    # after 18 attach steps and one dual flip the poset is the layered form
    atoms = atomic_steps(cert)
    p_prime = atoms[18].after
    triple = disjoint_union(disjoint_union(chain(3), chain(3)), chain(3))
    quad = disjoint_union(
        disjoint_union(chain(4), chain(4)), disjoint_union(chain(4), chain(4))
    )
    expect = lex_sum(triple, lex_sum(antichain(6), quad))
    assert p_prime.n == 31
    assert canonical_key(p_prime) == canonical_key(expect)


# numeric conservation across small certificates


def test_numeric_conservation_small_relations():
    done = 0
    for P in nonisomorphic_posets(4):
        for m in maximal(P):
            c = max_el_cert(P, m)
            if any(len(s.after.rel) > 12 for s in c.steps):
                continue
            r = verify(c, numeric=True, qs=(2, 3))
            assert r.ok
            done += r.numeric_checked
    assert done > 0


def test_atomic_steps_validated_by_brute_force():
    cert = two_chains_cert(2, 2)
    for s in atomic_steps(cert):
        if s.after.n > 8:
            continue
        reduced = remove(apply_D(s.system), s.system.m)
        assert brute_isomorphic(reduced, s.before)


# tampering and direction


def test_tampered_step_is_reported():
    c = two_chains_cert(2, 1)
    bad_step = EmbeddingStep(
        "strong-D",
        antichain(c.steps[0].before.n),
        c.steps[0].after,
        system=c.steps[0].system,
    )
    tampered = EmbeddingCertificate(
        c.source, c.target, c.kind, (bad_step,) + c.steps[1:]
    )
    res = verify(tampered)
    assert not res.ok
    assert res.failures[0][0] == "step 0"


def test_tampered_target_is_reported():
    c = antichain_to_chain_cert(3)
    wrong = EmbeddingCertificate(c.source, chain(c.target.n + 1), c.kind, c.steps)
    res = verify(wrong)
    assert not res.ok
    assert "target" in res.failures[0][1]


def test_reversed_certificate_fails():
    c = two_chains_cert(1, 1)
    back = EmbeddingCertificate(
        c.target,
        c.source,
        c.kind,
        tuple(
            EmbeddingStep(s.rule, s.after, s.before, system=s.system)
            for s in reversed(c.steps)
        ),
    )
    assert not verify(back).ok


def test_strong_kind_rejects_dual_steps():
    P = chain(3)
    step = EmbeddingStep("dual", P, P)
    cert = EmbeddingCertificate(P, P, "strong", (step,))
    assert not verify(cert).ok


# serialization


def test_json_round_trip_flat():
    c = two_chains_cert(3, 2)
    blob = json.dumps(cert_to_json(c))
    back = cert_from_json(json.loads(blob))
    assert back.length == c.length
    assert canonical_key(back.source) == canonical_key(c.source)
    assert canonical_key(back.target) == canonical_key(c.target)
    assert verify(back).ok


def test_json_round_trip_composite():
    c = p_diamond_c59_cert()
    back = cert_from_json(json.loads(json.dumps(cert_to_json(c))))
    assert back.length == c.length
    assert verify(back).ok
    rules = [s.rule for s in back.steps]
    assert "two-chains" in rules and "add-top" in rules and "dual" in rules
