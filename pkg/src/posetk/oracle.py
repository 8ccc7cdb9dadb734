"""Exact conjugacy class counts for pattern groups via Burnside sums.

The group U_P(q) is all unitriangular matrices supported on the order
relation of P.  Conjugacy classes are counted as co-adjoint orbits: for
g = 1 + X the fixed space of the dual action has codimension equal to
rank(XY - YX) as an operator on the pattern algebra, because
(Ad_g - 1)(Y) = (XY - YX) g^{-1} and right multiplication by g^{-1} is
invertible.  Summing q^{-rank} over the group and dividing by |U_P|
gives k(P) with no matrix inversions in the hot loop.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .kernels import HAVE_NUMBA, ranks_from_digits, system_fiber_burnside
from .linalg import rank_batch, require_prime
from .poset import Poset, antichains_in, canonical_key, lb, maximal, sorted_rel

DEFAULT_BUDGET = 1 << 26
BATCH = 1 << 15


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured element budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration needs {required} group elements, budget is {budget}"
        )
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class PosetSystem:
    """A poset with a marked maximal element and an antichain below it."""

    poset: Poset
    m: int
    antichain: FrozenSet[int]

    def __post_init__(self) -> None:
        if not isinstance(self.antichain, frozenset):
            object.__setattr__(self, "antichain", frozenset(self.antichain))
        if self.m not in maximal(self.poset):
            raise ValueError(f"{self.m} is not a maximal element")
        below = lb(self.poset, self.m)
        for a in self.antichain:
            if a not in below:
                raise ValueError(f"antichain element {a} is not below m={self.m}")
        for a, b in itertools.combinations(sorted(self.antichain), 2):
            if self.poset.comparable(a, b):
                raise ValueError(f"{a} and {b} are comparable, not an antichain")


@dataclass(frozen=True)
class GroupElement:
    """Element of U_P(q), stored as entries over the sorted cell order."""

    poset: Poset
    q: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        cells = sorted_rel(self.poset)
        if len(self.entries) != len(cells):
            raise ValueError(
                f"expected {len(cells)} entries for this poset, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(v % self.q for v in self.entries))

    def matrix(self) -> np.ndarray:
        n = self.poset.n
        M = np.eye(n, dtype=np.int64)
        for (i, j), v in zip(sorted_rel(self.poset), self.entries):
            M[i - 1, j - 1] = v
        return M


@dataclass(frozen=True)
class OrbitCount:
    poset_key: bytes
    q: int
    count: int
    method: str


def identity(P: Poset, q: int) -> GroupElement:
    return GroupElement(P, q, (0,) * len(sorted_rel(P)))


def generator(P: Poset, q: int, i: int, j: int, alpha: int) -> GroupElement:
    """The elementary element 1 + alpha e_{i,j}; requires i < j in P."""
    cells = sorted_rel(P)
    if (i, j) not in cells:
        raise ValueError(f"({i},{j}) is not a relation of the poset")
    entries = [alpha if c == (i, j) else 0 for c in cells]
    return GroupElement(P, q, tuple(entries))


def from_matrix(P: Poset, q: int, M: np.ndarray) -> GroupElement:
    cells = sorted_rel(P)
    M = np.asarray(M) % q
    n = P.n
    if M.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix")
    support = {(i, j) for i, j in cells}
    for i in range(n):
        for j in range(n):
            if i == j:
                if M[i, j] % q != 1:
                    raise ValueError("diagonal must be all ones")
            elif (i + 1, j + 1) not in support and M[i, j] % q != 0:
                raise ValueError(f"entry ({i + 1},{j + 1}) outside the pattern")
    return GroupElement(P, q, tuple(int(M[i - 1, j - 1]) for i, j in cells))


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.poset != h.poset or g.q != h.q:
        raise ValueError("elements live in different groups")
    return from_matrix(g.poset, g.q, (g.matrix() @ h.matrix()) % g.q)


def inv(g: GroupElement) -> GroupElement:
    # (1 + X)^{-1} = sum of (-X)^s, nilpotent so the sum is finite
    n = g.poset.n
    X = g.matrix() - np.eye(n, dtype=np.int64)
    acc = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for _ in range(n):
        term = (term @ (-X)) % g.q
        acc = (acc + term) % g.q
    return from_matrix(g.poset, g.q, acc)


def lower_cells(P: Poset) -> Tuple[Tuple[int, int], ...]:
    """Cells of the dual-space quotient: matrix positions (j, i) for i < j in P."""
    return tuple((j, i) for i, j in sorted_rel(P))


def coadjoint_act(g: GroupElement, L: np.ndarray) -> np.ndarray:
    """Dual action on the lower quotient: project g L g^{-1} onto the cells."""
    q = g.q
    n = g.poset.n
    L = np.asarray(L) % q
    if L.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix")
    out = (g.matrix() @ L @ inv(g).matrix()) % q
    keep = np.zeros((n, n), dtype=bool)
    for (r, c) in lower_cells(g.poset):
        keep[r - 1, c - 1] = True
    return np.where(keep, out, 0)


# ---------------------------------------------------------------------------
# Burnside count over the full group

def _digits(start: int, stop: int, q: int, r: int) -> np.ndarray:
    """Entry vectors for enumeration indices [start, stop), shape (B, r).

    Enumeration is lexicographic over the sorted cell order: cell 0 is
    the most significant digit.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    pows = q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // pows[None, :]) % q).astype(np.int16)


def _ad_index_tables(P: Poset) -> Tuple[np.ndarray, np.ndarray]:
    """Gather tables turning entry vectors into commutator matrices.

    For output cell (i,j) and input cell (k,l), the operator
    Y -> XY - YX has coefficient X_{ik} [j=l] - X_{lj} [i=k]; the two
    terms are never active together.  Sentinel r points at a padded zero.
    """
    cells = sorted_rel(P)
    r = len(cells)
    pos = {c: idx for idx, c in enumerate(cells)}
    T1 = np.full((r, r), r, dtype=np.int64)
    T2 = np.full((r, r), r, dtype=np.int64)
    for a, (i, j) in enumerate(cells):
        for b, (k, l) in enumerate(cells):
            if j == l and (i, k) in pos:
                T1[a, b] = pos[(i, k)]
            if i == k and (l, j) in pos:
                T2[a, b] = pos[(l, j)]
    return T1, T2


def _rank_histogram_range(
    P: Poset, q: int, start: int, stop: int, tables: Tuple[np.ndarray, np.ndarray]
) -> np.ndarray:
    cells = sorted_rel(P)
    r = len(cells)
    T1, T2 = tables
    hist = np.zeros(r + 1, dtype=np.int64)
    for lo in range(start, stop, BATCH):
        hi = min(lo + BATCH, stop)
        dig = _digits(lo, hi, q, r)
        pad = np.concatenate([dig, np.zeros((hi - lo, 1), dtype=np.int16)], axis=1)
        ranks = ranks_from_digits(pad, T1, T2, q)
        hist += np.bincount(ranks, minlength=r + 1)
    return hist


def count_k(
    P: Poset,
    q: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> int:
    """Number of conjugacy classes of U_P(q), by the Burnside rank sum."""
    require_prime(q)
    r = len(P.rel)
    size = q**r
    if size > budget:
        raise BudgetExceeded(required=size, budget=budget)
    if r == 0:
        return 1
    tables = _ad_index_tables(P)
    if threads > 1:
        step = max(BATCH, -(-size // (threads * 4)))
        spans = [(lo, min(lo + step, size)) for lo in range(0, size, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hists = pool.map(
                lambda span: _rank_histogram_range(P, q, span[0], span[1], tables),
                spans,
            )
            hist = sum(hists)
    else:
        hist = _rank_histogram_range(P, q, 0, size, tables)
    total = sum(int(hist[s]) * q ** (r - s) for s in range(r + 1))
    assert total % size == 0, "Burnside sum not divisible by the group order"
    return total // size


def orbit_count(P: Poset, q: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> OrbitCount:
    return OrbitCount(canonical_key(P), q, count_k(P, q, budget, threads), "burnside")


# ---------------------------------------------------------------------------
# Fiber orbit counts for poset systems

def _group_batch(P: Poset, q: int, dig: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Matrices g and g^{-1} for a batch of entry vectors."""
    cells = sorted_rel(P)
    n = P.n
    B = dig.shape[0]
    G = np.zeros((B, n, n), dtype=np.int64)
    G[:, np.arange(n), np.arange(n)] = 1
    for idx, (i, j) in enumerate(cells):
        G[:, i - 1, j - 1] = dig[:, idx]
    X = G - np.eye(n, dtype=np.int64)[None, :, :]
    term = np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n)).copy()
    Ginv = term.copy()
    for _ in range(n - 1):
        term = np.matmul(term, -X) % q
        Ginv = (Ginv + term) % q
    return G, Ginv


def count_k_system(
    S: PosetSystem,
    q: int,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Orbit count of the stabilizer of the antichain pattern on its fiber.

    Direct realization: filter the whole group to the stabilizer of the
    row-m indicator, then run Burnside over the stabilizer, counting
    fixed points of each element on the affine fiber by linear algebra.
    """
    require_prime(q)
    P, m, A = S.poset, S.m, S.antichain
    cells = sorted_rel(P)
    r = len(cells)
    size = q**r
    if size > budget:
        raise BudgetExceeded(required=size, budget=budget)
    n = P.n
    low = lower_cells(P)
    below = sorted(lb(P, m))
    target = np.array([1 if x in A else 0 for x in below], dtype=np.int64)
    free_idx = [idx for idx, (row, col) in enumerate(low) if row != m]
    d = len(free_idx)

    # L0: the indicator of A on row m
    L0 = np.zeros((n, n), dtype=np.int64)
    for a in A:
        L0[m - 1, a - 1] = 1

    # output-cell gather coordinates for the conjugation operator
    out_rows = np.array([row - 1 for row, col in low], dtype=np.int64)
    out_cols = np.array([col - 1 for row, col in low], dtype=np.int64)
    in_rows = np.array([low[idx][0] - 1 for idx in free_idx], dtype=np.int64)
    in_cols = np.array([low[idx][1] - 1 for idx in free_idx], dtype=np.int64)
    ident = np.zeros((r, d), dtype=np.int64)
    for colpos, idx in enumerate(free_idx):
        ident[idx, colpos] = 1

    cells_ij = [(i - 1, j - 1) for i, j in cells]
    a_idx = [a - 1 for a in sorted(A)]
    cols = np.array([x - 1 for x in below], dtype=np.int64)

    if HAVE_NUMBA and r > 0:
        by_col: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        for idx, (i, j) in enumerate(cells_ij):
            by_col[j].append((i, idx))
        col_ptr = np.zeros(n + 1, dtype=np.int64)
        col_row = np.zeros(r, dtype=np.int64)
        col_idx = np.zeros(r, dtype=np.int64)
        pos = 0
        for j in range(n):
            col_ptr[j] = pos
            for i, idx in by_col[j]:
                col_row[pos] = i
                col_idx[pos] = idx
                pos += 1
        col_ptr[n] = pos
        ucells = np.array([[i for i, _ in cells_ij], [j for _, j in cells_ij]], dtype=np.int64)
        ocells = np.array([[row - 1 for row, _ in low], [col - 1 for _, col in low]], dtype=np.int64)
        a_set = set(A)
        l0_flags = np.array(
            [1 if (row == m and col in a_set) else 0 for row, col in low], dtype=np.int64
        )
        stab_size, fixed_total = system_fiber_burnside(
            size,
            n,
            q,
            col_ptr,
            col_row,
            col_idx,
            ucells,
            ocells,
            np.array(a_idx, dtype=np.int64),
            cols,
            target,
            m - 1,
            np.array([low[idx][0] - 1 for idx in free_idx], dtype=np.int64),
            np.array([low[idx][1] - 1 for idx in free_idx], dtype=np.int64),
            np.array(free_idx, dtype=np.int64),
            l0_flags,
        )
        assert stab_size > 0
        assert fixed_total % stab_size == 0, "fiber Burnside sum not divisible"
        return fixed_total // stab_size

    stab_size = 0
    fixed_total = 0
    for lo in range(0, size, BATCH):
        hi = min(lo + BATCH, size)
        dig = _digits(lo, hi, q, r)
        if below:
            # filter on the needed rows of g^{-1} before building full matrices
            X = np.zeros((hi - lo, n, n), dtype=np.int64)
            for idx, (i, j) in enumerate(cells_ij):
                X[:, i, j] = dig[:, idx]
            term = np.zeros((hi - lo, n), dtype=np.int64)
            term[:, a_idx] = 1
            rowsum = term.copy()
            for _ in range(n - 1):
                term = np.matmul(term[:, None, :], -X)[:, 0, :] % q
                rowsum = (rowsum + term) % q
            keep = (rowsum[:, cols] == target[None, :]).all(axis=1)
        else:
            keep = np.ones(hi - lo, dtype=bool)
        if not keep.any():
            continue
        G, Ginv = _group_batch(P, q, dig[keep])
        B = G.shape[0]
        stab_size += B

        # columns of (K_g - 1) on the free cells: conjugate each basis cell
        if d:
            A1 = G[:, out_rows[:, None], in_rows[None, :]]
            A2 = Ginv[:, in_cols[None, :], out_cols[:, None]]
            Amat = (A1 * A2 - ident[None, :, :]) % q
        else:
            Amat = np.zeros((B, r, 0), dtype=np.int64)
        KL0 = np.matmul(np.matmul(G, L0[None, :, :]), Ginv) % q
        b = (L0[None, out_rows, out_cols] - KL0[:, out_rows, out_cols]) % q
        aug = np.concatenate([Amat, b[:, :, None]], axis=2)
        rk = rank_batch(Amat, q)
        rk_aug = rank_batch(aug, q)
        consistent = rk == rk_aug
        counts = np.where(consistent, q ** (d - rk), 0)
        fixed_total += int(counts.sum())

    assert stab_size > 0
    assert fixed_total % stab_size == 0, "fiber Burnside sum not divisible"
    return fixed_total // stab_size


def system_orbit_count(S: PosetSystem, q: int, budget: int = DEFAULT_BUDGET) -> OrbitCount:
    return OrbitCount(canonical_key(S.poset), q, count_k_system(S, q, budget), "fiber")
