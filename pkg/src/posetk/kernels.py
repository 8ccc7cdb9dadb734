"""Compiled rank kernels for the Burnside hot loop.

Each group element is an entry vector; the commutator operator matrix
is assembled per element from two gather tables and its rank taken over
F_q, all inside one compiled pass so no batch-sized operator matrices
are ever materialized.  Falls back to the vectorized numpy route when
numba is unavailable.
"""
from __future__ import annotations

import numpy as np

from .linalg import inverse_table, rank_batch

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _ranks_f2(dig, T1, T2, out):
    B = dig.shape[0]
    r = T1.shape[0]
    pivs = np.zeros(r, dtype=np.int64)
    for x in range(B):
        for j in range(r):
            pivs[j] = 0
        rank = 0
        for a in range(r):
            row = np.int64(0)
            for b in range(r):
                v = (dig[x, T1[a, b]] ^ dig[x, T2[a, b]]) & 1
                row |= np.int64(v) << b
            j = r - 1
            while row != 0:
                while (row >> j) & 1 == 0:
                    j -= 1
                if pivs[j] != 0:
                    row ^= pivs[j]
                else:
                    pivs[j] = row
                    rank += 1
                    break
        out[x] = rank
    return out


@njit(cache=True, nogil=True)
def _ranks_odd(dig, T1, T2, p, inv, out):
    B = dig.shape[0]
    r = T1.shape[0]
    M = np.zeros((r, r), dtype=np.int64)
    used = np.zeros(r, dtype=np.uint8)
    for x in range(B):
        for a in range(r):
            for b in range(r):
                v = np.int64(dig[x, T1[a, b]]) - np.int64(dig[x, T2[a, b]])
                if v < 0:
                    v += p
                M[a, b] = v
            used[a] = 0
        rank = 0
        for col in range(r):
            piv = -1
            for i in range(r):
                if used[i] == 0 and M[i, col] % p != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            f = inv[M[piv, col] % p]
            for b in range(col, r):
                M[piv, b] = (M[piv, b] % p) * f % p
            for i in range(r):
                if used[i] == 0 and i != piv:
                    val = M[i, col] % p
                    if val != 0:
                        for b in range(col, r):
                            M[i, b] -= val * M[piv, b]
            used[piv] = 1
            rank += 1
        out[x] = rank
    return out


@njit(cache=True, nogil=True)
def _system_fiber_f2(
    size, n, col_ptr, col_row, col_idx, ucell_i, ucell_j,
    ocell_i, ocell_j, a_ind, below, target, m0, in_r, in_c, free_pos, l0,
):
    r = ucell_i.shape[0]
    d = in_r.shape[0]
    dig = np.zeros(r, dtype=np.int64)
    w = np.zeros(n, dtype=np.int64)
    G = np.zeros((n, n), dtype=np.int64)
    Gi = np.zeros((n, n), dtype=np.int64)
    basis = np.zeros(d + 1, dtype=np.int64)
    stab = np.int64(0)
    fixed = np.int64(0)
    for e in range(size):
        if e > 0:
            pos = 0
            while True:
                dig[pos] += 1
                if dig[pos] == 2:
                    dig[pos] = 0
                    pos += 1
                else:
                    break
        # w = sum over the antichain of rows of g^{-1}, by forward substitution
        for j in range(n):
            w[j] = 0
        for t in range(a_ind.shape[0]):
            w[a_ind[t]] = 1
        for j in range(n):
            acc = w[j]
            for cc in range(col_ptr[j], col_ptr[j + 1]):
                acc ^= w[col_row[cc]] & dig[col_idx[cc]]
            w[j] = acc
        ok = True
        for t in range(below.shape[0]):
            if w[below[t]] != target[t]:
                ok = False
                break
        if not ok:
            continue
        stab += 1
        for i in range(n):
            for j in range(n):
                G[i, j] = 0
                Gi[i, j] = 0
            G[i, i] = 1
            Gi[i, i] = 1
        for t in range(r):
            G[ucell_i[t], ucell_j[t]] = dig[t]
        for i0 in range(n):
            for j in range(i0 + 1, n):
                s = np.int64(0)
                for cc in range(col_ptr[j], col_ptr[j + 1]):
                    s ^= Gi[i0, col_row[cc]] & dig[col_idx[cc]]
                Gi[i0, j] = s
        # augmented fixed-point system, rhs packed at bit 0
        for j in range(d + 1):
            basis[j] = 0
        cnt = 0
        bad = False
        for t in range(r):
            oi = ocell_i[t]
            oj = ocell_j[t]
            row = np.int64(l0[t] ^ (G[oi, m0] & w[oj]))
            for c in range(d):
                v = G[oi, in_r[c]] & Gi[in_c[c], oj]
                if free_pos[c] == t:
                    v ^= 1
                row |= np.int64(v) << (c + 1)
            j = d
            while row != 0:
                while (row >> j) & 1 == 0:
                    j -= 1
                if basis[j] != 0:
                    row ^= basis[j]
                else:
                    basis[j] = row
                    if j == 0:
                        bad = True
                    else:
                        cnt += 1
                    break
            if bad:
                break
        if not bad:
            fixed += np.int64(1) << (d - cnt)
    return stab, fixed


@njit(cache=True, nogil=True)
def _system_fiber_odd(
    size, n, p, inv, col_ptr, col_row, col_idx, ucell_i, ucell_j,
    ocell_i, ocell_j, a_ind, below, target, m0, in_r, in_c, free_pos, l0,
):
    r = ucell_i.shape[0]
    d = in_r.shape[0]
    dig = np.zeros(r, dtype=np.int64)
    w = np.zeros(n, dtype=np.int64)
    G = np.zeros((n, n), dtype=np.int64)
    Gi = np.zeros((n, n), dtype=np.int64)
    M = np.zeros((r, d + 1), dtype=np.int64)
    powp = np.ones(d + 1, dtype=np.int64)
    for c in range(1, d + 1):
        powp[c] = powp[c - 1] * p
    stab = np.int64(0)
    fixed = np.int64(0)
    for e in range(size):
        if e > 0:
            pos = 0
            while True:
                dig[pos] += 1
                if dig[pos] == p:
                    dig[pos] = 0
                    pos += 1
                else:
                    break
        for j in range(n):
            w[j] = 0
        for t in range(a_ind.shape[0]):
            w[a_ind[t]] = 1
        for j in range(n):
            acc = np.int64(0)
            for cc in range(col_ptr[j], col_ptr[j + 1]):
                acc += w[col_row[cc]] * dig[col_idx[cc]]
            w[j] = (w[j] - acc) % p
        ok = True
        for t in range(below.shape[0]):
            if w[below[t]] != target[t]:
                ok = False
                break
        if not ok:
            continue
        stab += 1
        for i in range(n):
            for j in range(n):
                G[i, j] = 0
                Gi[i, j] = 0
            G[i, i] = 1
            Gi[i, i] = 1
        for t in range(r):
            G[ucell_i[t], ucell_j[t]] = dig[t]
        for i0 in range(n):
            for j in range(i0 + 1, n):
                s = np.int64(0)
                for cc in range(col_ptr[j], col_ptr[j + 1]):
                    s += Gi[i0, col_row[cc]] * dig[col_idx[cc]]
                Gi[i0, j] = (-s) % p
        for t in range(r):
            oi = ocell_i[t]
            oj = ocell_j[t]
            M[t, 0] = (l0[t] - G[oi, m0] * w[oj]) % p
            for c in range(d):
                v = G[oi, in_r[c]] * Gi[in_c[c], oj]
                if free_pos[c] == t:
                    v -= 1
                M[t, c + 1] = v % p
        # eliminate coefficient columns first, rhs column last
        rank = 0
        bad = False
        for col in range(1, d + 1):
            piv = -1
            for i in range(rank, r):
                if M[i, col] % p != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            for b in range(d + 1):
                tmp = M[rank, b]
                M[rank, b] = M[piv, b]
                M[piv, b] = tmp
            f = inv[M[rank, col] % p]
            for b in range(d + 1):
                M[rank, b] = (M[rank, b] % p) * f % p
            for i in range(rank + 1, r):
                val = M[i, col] % p
                if val != 0:
                    for b in range(d + 1):
                        M[i, b] -= val * M[rank, b]
            rank += 1
        for i in range(rank, r):
            if M[i, 0] % p != 0:
                bad = True
                break
        if not bad:
            fixed += powp[d - rank]
    return stab, fixed


def system_fiber_burnside(
    size: int,
    n: int,
    q: int,
    col_ptr: np.ndarray,
    col_row: np.ndarray,
    col_idx: np.ndarray,
    ucells: np.ndarray,
    ocells: np.ndarray,
    a_ind: np.ndarray,
    below: np.ndarray,
    target: np.ndarray,
    m0: int,
    in_r: np.ndarray,
    in_c: np.ndarray,
    free_pos: np.ndarray,
    l0: np.ndarray,
) -> "tuple[int, int]":
    """Stabilizer size and total fiber fixed points over the whole group."""
    if q == 2:
        stab, fixed = _system_fiber_f2(
            size, n, col_ptr, col_row, col_idx, ucells[0], ucells[1],
            ocells[0], ocells[1], a_ind, below, target, m0, in_r, in_c, free_pos, l0,
        )
    else:
        stab, fixed = _system_fiber_odd(
            size, n, np.int64(q), inverse_table(q), col_ptr, col_row, col_idx,
            ucells[0], ucells[1], ocells[0], ocells[1], a_ind, below, target,
            m0, in_r, in_c, free_pos, l0,
        )
    return int(stab), int(fixed)


def ranks_from_digits(dig: np.ndarray, T1: np.ndarray, T2: np.ndarray, q: int) -> np.ndarray:
    """Ranks of the commutator operators for a batch of entry vectors.

    `dig` is (B, r+1) with a zero padding column the sentinel index in
    the tables points at.
    """
    B = dig.shape[0]
    r = T1.shape[0]
    out = np.zeros(B, dtype=np.int64)
    if r == 0:
        return out
    if HAVE_NUMBA:
        dig16 = np.ascontiguousarray(dig, dtype=np.int16)
        if q == 2:
            return _ranks_f2(dig16, T1, T2, out)
        return _ranks_odd(dig16, T1, T2, np.int64(q), inverse_table(q), out)
    M = (dig[:, T1].astype(np.int64) - dig[:, T2]) % q
    return rank_batch(M, q)
