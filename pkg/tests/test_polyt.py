import random

import pytest
from hypothesis import given, settings, strategies as st

from posetk.polyt import (
    ONE,
    PolyT,
    T,
    ZERO,
    InterpolationError,
    from_q_basis,
    interpolate,
)

small_polys = st.builds(
    PolyT,
    st.lists(st.integers(min_value=-50, max_value=50), max_size=6).map(tuple),
)


class TestArithmetic:
    def test_basic_ops(self):
        p = PolyT((1, 3, 1))
        assert (p + ZERO) == p
        assert (p * ONE) == p
        assert (T * T).coeffs == (0, 0, 1)
        assert p.scale_tk(2, 1).coeffs == (0, 2, 6, 2)

    def test_trailing_zeros_normalized(self):
        assert PolyT((1, 0, 0)) == PolyT((1,))
        assert PolyT((0, 0)).is_zero()
        assert PolyT().degree == -1
        assert PolyT((5,)).degree == 0

    def test_eval(self):
        p = PolyT((1, 3, 1))
        assert p.eval_at_t(1) == 5
        assert p.eval_at_q(3) == 11
        assert ZERO.eval_at_q(7) == 0

    def test_str(self):
        assert str(PolyT((1, 3, 1))) == "1 + 3t + t^2"
        assert str(ZERO) == "0"
        assert str(PolyT((0, -2))) == "-2t"

    def test_non_int_rejected(self):
        with pytest.raises(TypeError):
            PolyT((1.5,))


class TestBasisChange:
    def test_q_basis_example(self):
        # 1 + 3t + t^2 = q^2 + q - 1
        assert PolyT((1, 3, 1)).to_q_basis() == (-1, 1, 1)

    def test_round_trip(self):
        rng = random.Random(5)
        for _ in range(50):
            coeffs = tuple(rng.randint(-9, 9) for _ in range(rng.randint(0, 7)))
            p = PolyT(coeffs)
            assert from_q_basis(p.to_q_basis()) == p

    def test_json_round_trip(self):
        p = PolyT((1, 28, 266, 10**30))
        assert PolyT.from_json(p.to_json()) == p
        with pytest.raises(ValueError):
            PolyT.from_json({"basis": "q", "coeffs": ["1"]})


class TestInterpolation:
    def test_quadratic_with_holdout(self):
        pts = [(2, 5), (3, 11), (4, 19), (5, 29)]
        assert interpolate(pts, 2) == PolyT((1, 3, 1))

    def test_requires_holdout(self):
        with pytest.raises(ValueError):
            interpolate([(2, 5), (3, 11), (4, 19)], 2)

    def test_duplicate_point_rejected(self):
        with pytest.raises(ValueError):
            interpolate([(2, 5), (2, 5), (3, 11), (4, 19)], 1)

    def test_parity_dependent_counts_fail(self):
        # values flip with parity of q, so no polynomial fits
        pts = [(2, 1), (3, 2), (4, 1), (5, 2), (7, 2)]
        with pytest.raises(InterpolationError) as exc:
            interpolate(pts, 2)
        assert exc.value.residuals
        q, sample, fitted = exc.value.residuals[0]
        assert sample != fitted

    def test_non_integer_fit_fails(self):
        # samples of q/2 rounded: 1,1,2,2 cannot be a degree-1 integer poly
        pts = [(2, 1), (3, 1), (4, 2), (5, 2)]
        with pytest.raises(InterpolationError):
            interpolate(pts, 1)


@given(small_polys, small_polys)
@settings(max_examples=80, deadline=None)
def test_mul_matches_eval(p, q):
    for t in (-2, 0, 1, 3):
        assert (p * q).eval_at_t(t) == p.eval_at_t(t) * q.eval_at_t(t)
        assert (p + q).eval_at_t(t) == p.eval_at_t(t) + q.eval_at_t(t)


@given(small_polys)
@settings(max_examples=80, deadline=None)
def test_q_basis_eval_agreement(p):
    for q in (2, 3, 5):
        direct = p.eval_at_q(q)
        via_q = sum(c * q**i for i, c in enumerate(p.to_q_basis()))
        assert direct == via_q


@given(small_polys)
@settings(max_examples=60, deadline=None)
def test_interpolation_recovers_poly(p):
    deg = max(p.degree, 0)
    qs = list(range(2, 2 + deg + 3))
    pts = [(q, p.eval_at_q(q)) for q in qs]
    assert interpolate(pts, deg) == p
