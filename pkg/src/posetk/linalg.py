"""Batched exact rank computation over prime fields.

The orbit-counting oracle reduces to ranks of many small matrices over
F_q.  Matrices arrive in batches shaped (B, r, c); F_2 goes through a
bit-packed elimination (one uint64 word per row), odd primes through
delayed-reduction integer elimination that only reduces mod p where a
pivot decision needs it.
"""
from __future__ import annotations

from typing import List, Sequence

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def require_prime(q: int) -> None:
    if not is_prime(q):
        raise ValueError(
            f"q={q} is not prime; only prime fields are supported"
        )


def inverse_table(p: int) -> np.ndarray:
    """Multiplicative inverses mod p as a lookup array; slot 0 is unused."""
    inv = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)
    return inv


def pack_rows(mats: np.ndarray) -> np.ndarray:
    """Pack 0/1 matrices (B, r, c) into one uint64 bitmask per row."""
    B, r, c = mats.shape
    if c > 63:
        raise ValueError(f"packed elimination supports at most 63 columns, got {c}")
    W = np.zeros((B, r), dtype=np.uint64)
    for j in range(c):
        W |= mats[:, :, j].astype(np.uint64) << np.uint64(j)
    return W


def rank_batch_packed(W: np.ndarray, c: int) -> np.ndarray:
    """Ranks over F_2 of bit-packed row batches (B, r), c columns used."""
    W = W.copy()
    B, r = W.shape
    rank = np.zeros(B, dtype=np.int64)
    if r == 0 or c == 0:
        return rank
    used = np.zeros((B, r), dtype=bool)
    bsel = np.arange(B)
    for j in range(c):
        colbit = (W >> np.uint64(j)) & np.uint64(1)
        cand = colbit.astype(bool) & ~used
        has = cand.any(axis=1)
        piv = np.argmax(cand, axis=1)
        prow = W[bsel, piv]
        elim = colbit.astype(bool)
        elim[bsel, piv] = False
        elim &= has[:, None]
        W ^= np.where(elim, prow[:, None], np.uint64(0))
        used[bsel, piv] |= has
        rank += has
    return rank


def _rank_batch_odd(mats: np.ndarray, p: int) -> np.ndarray:
    B, r, c = mats.shape
    rank = np.zeros(B, dtype=np.int64)
    if r == 0 or c == 0:
        return rank
    # entries stay unreduced between pivots; bound the growth by dtype
    bound = (p - 1) + c * p * (p - 1)
    dtype = np.int16 if bound <= np.iinfo(np.int16).max else np.int64
    W = mats.astype(dtype)
    inv = inverse_table(p).astype(dtype)
    used = np.zeros((B, r), dtype=bool)
    bsel = np.arange(B)
    for j in range(c):
        col = W[:, :, j] % p
        cand = (col != 0) & ~used
        has = cand.any(axis=1)
        piv = np.argmax(cand, axis=1)
        prow = W[bsel, piv, :] % p
        pivinv = inv[np.where(has, prow[:, j], 1)]
        prow_n = (prow * pivinv[:, None]) % p
        W[bsel, piv, :] = np.where(has[:, None], prow_n, W[bsel, piv, :])
        fac = col.copy()
        fac[bsel, piv] = 0
        fac[~has, :] = 0
        if j + 1 < c:
            W[:, :, j + 1:] += fac[:, :, None] * (p - prow_n[:, None, j + 1:])
        used[bsel, piv] |= has
        rank += has
    return rank


def rank_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a batch of matrices (B, r, c), entries in [0, p)."""
    require_prime(p)
    if mats.ndim != 3:
        raise ValueError(f"expected a (B, r, c) batch, got shape {mats.shape}")
    if p == 2:
        B, r, c = mats.shape
        if r == 0 or c == 0:
            return np.zeros(B, dtype=np.int64)
        return rank_batch_packed(pack_rows(mats % 2), c)
    return _rank_batch_odd(mats % p, p)


def rank_ref(rows: Sequence[Sequence[int]], p: int) -> int:
    """Plain Gaussian elimination mod p, the reference for the batch kernels."""
    require_prime(p)
    M: List[List[int]] = [[int(v) % p for v in row] for row in rows]
    if not M or not M[0]:
        return 0
    ncols = len(M[0])
    rank = 0
    for j in range(ncols):
        pivot = next((i for i in range(rank, len(M)) if M[i][j] % p), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = pow(M[rank][j], p - 2, p)
        M[rank] = [(v * inv) % p for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][j] % p:
                f = M[i][j]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
        if rank == len(M):
            break
    return rank
