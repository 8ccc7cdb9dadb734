import random

import numpy as np
import pytest

from posetk.linalg import (
    inverse_table,
    is_prime,
    pack_rows,
    rank_batch,
    rank_batch_packed,
    rank_ref,
    require_prime,
)


def random_batch(rng, B, r, c, p):
    return np.array(
        [[[rng.randrange(p) for _ in range(c)] for _ in range(r)] for _ in range(B)],
        dtype=np.int64,
    )


def test_is_prime():
    assert [p for p in range(2, 20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        require_prime(9)


def test_inverse_table():
    for p in (2, 3, 5, 13):
        inv = inverse_table(p)
        for v in range(1, p):
            assert (v * inv[v]) % p == 1


def test_rank_ref_known():
    assert rank_ref([[1, 0], [0, 1]], 2) == 2
    assert rank_ref([[1, 1], [1, 1]], 2) == 1
    assert rank_ref([[2, 4], [1, 2]], 5) == 1
    assert rank_ref([[0, 0], [0, 0]], 3) == 0
    assert rank_ref([], 3) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 13, 41])
def test_rank_batch_matches_reference(p):
    rng = random.Random(100 + p)
    for _ in range(6):
        B = rng.randint(1, 20)
        r = rng.randint(1, 9)
        c = rng.randint(1, 9)
        mats = random_batch(rng, B, r, c, p)
        got = rank_batch(mats, p)
        want = [rank_ref(mats[b].tolist(), p) for b in range(B)]
        assert got.tolist() == want


def test_rank_batch_degenerate_shapes():
    assert rank_batch(np.zeros((4, 0, 3), dtype=np.int64), 3).tolist() == [0] * 4
    assert rank_batch(np.zeros((4, 3, 0), dtype=np.int64), 2).tolist() == [0] * 4


def test_rank_batch_identity_and_singular():
    eye = np.stack([np.eye(6, dtype=np.int64)] * 3)
    assert rank_batch(eye, 7).tolist() == [6, 6, 6]
    ones = np.ones((2, 5, 5), dtype=np.int64)
    assert rank_batch(ones, 3).tolist() == [1, 1]


def test_packed_path_agrees_with_dense():
    rng = random.Random(9)
    mats = random_batch(rng, 50, 8, 8, 2)
    packed = rank_batch_packed(pack_rows(mats), 8)
    assert packed.tolist() == rank_batch(mats, 2).tolist()


def test_pack_rows_width_limit():
    with pytest.raises(ValueError):
        pack_rows(np.zeros((1, 2, 64), dtype=np.int64))


def test_large_prime_dtype_fallback():
    # growth bound exceeds int16 here, exercising the wide dtype path
    p = 211
    rng = random.Random(17)
    mats = random_batch(rng, 8, 6, 6, p)
    got = rank_batch(mats, p)
    want = [rank_ref(mats[b].tolist(), p) for b in range(8)]
    assert got.tolist() == want
