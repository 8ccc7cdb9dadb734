"""Internal consistency of the checked-in reference tables."""
from __future__ import annotations

from posetk.engine import compute_k
from posetk.fixtures import (
    CHAIN_POLY_COEFFS,
    COUNTS_Q2,
    COUNTS_Q3,
    EULER_A,
    SPRINGER_B,
    all_fixtures,
    chain_degree_bound,
    chain_poly,
    figure_poset,
    p_diamond_count,
)
from posetk.oracle import count_k
from posetk.poset import chain, covers


def test_appendix_tables_agree_with_each_other():
    for n in range(1, 17):
        assert chain_poly(n).eval_at_q(2) == COUNTS_Q2[n - 1]
        assert chain_poly(n).eval_at_q(3) == COUNTS_Q3[n - 1]


def test_chain_poly_degrees_follow_the_law():
    for n in sorted(CHAIN_POLY_COEFFS):
        assert chain_poly(n).degree == chain_degree_bound(n)


def test_counts_dominate_the_comparison_columns():
    for n in range(1, 17):
        assert COUNTS_Q2[n - 1] >= EULER_A[n - 1]
        assert COUNTS_Q3[n - 1] >= SPRINGER_B[n - 1]
    # strict from n = 6 on at q = 2
    assert COUNTS_Q2[5] > EULER_A[5]


def test_engine_reproduces_small_chain_fixtures():
    for n in range(1, 7):
        res = compute_k(chain(n))
        assert res.status == "proven"
        assert res.poly.coeffs == tuple(CHAIN_POLY_COEFFS[n])


def test_diamond_count_values():
    # frozen evaluations of the fixture polynomial plus its parity term
    assert p_diamond_count(2) == 50199460
    assert p_diamond_count(3) == 470526568273
    assert p_diamond_count(5) == 68018326673095921
    # odd primes carry twice the parity term
    from posetk.fixtures import P_DIAMOND_BASE_COEFFS
    from posetk.polyt import PolyT

    base3 = PolyT(P_DIAMOND_BASE_COEFFS).eval_at_t(2)
    assert p_diamond_count(3) - base3 == 2 * 2**12 * 4**6


def test_figure_poset_matches_oracle():
    P = figure_poset()
    assert P.n == 5
    assert covers(P) == frozenset({(1, 2), (2, 3), (3, 4), (2, 5)})
    res = compute_k(P)
    assert res.status == "proven"
    for q in (2, 3):
        assert res.poly.eval_at_q(q) == count_k(P, q)


def test_fixture_inventory():
    fixtures = all_fixtures()
    names = [f.name for f in fixtures]
    assert len(names) == len(set(names))
    assert all(f.source in ("appendix-A", "appendix-B", "figure", "derived") for f in fixtures)
    assert sum(1 for f in fixtures if f.source == "appendix-A") == 16
