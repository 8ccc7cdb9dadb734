"""Exhaustive small-poset enumeration, labeled and up to isomorphism."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterator, List, Tuple

from .poset import Pair, Poset, canonical_key


def closed_pair_sets(n: int) -> Iterator[Tuple[Pair, ...]]:
    """All transitively closed sets of ascending pairs on labels 1..n.

    These are exactly the posets whose labeling is a linear extension,
    so every isomorphism class on n elements appears at least once.
    Emitted in ascending bitmask order over the sorted pair list.
    """
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    index = {p: b for b, p in enumerate(pairs)}
    triples = []
    for i, j, k in combinations(range(1, n + 1), 3):
        triples.append((1 << index[(i, j)], 1 << index[(j, k)], 1 << index[(i, k)]))
    for mask in range(1 << len(pairs)):
        ok = True
        for bi, bj, bk in triples:
            if mask & bi and mask & bj and not mask & bk:
                ok = False
                break
        if ok:
            yield tuple(p for b, p in enumerate(pairs) if mask >> b & 1)


def all_posets(n: int) -> List[Poset]:
    """Every naturally labeled poset on n elements."""
    return [Poset(n, frozenset(rel)) for rel in closed_pair_sets(n)]


def nonisomorphic_posets(n: int) -> List[Poset]:
    """One representative per isomorphism class on n elements.

    The representative is the first naturally labeled copy in
    enumeration order; output is sorted by canonical key.
    """
    reps: Dict[bytes, Poset] = {}
    for P in all_posets(n):
        reps.setdefault(canonical_key(P), P)
    return [reps[k] for k in sorted(reps)]


def sweep_posets(max_elements: int) -> List[Poset]:
    """Representatives of every class with 1..max_elements elements."""
    out: List[Poset] = []
    for n in range(1, max_elements + 1):
        out.extend(nonisomorphic_posets(n))
    return out
