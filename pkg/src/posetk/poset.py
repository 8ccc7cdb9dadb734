"""Finite posets on labels 1..n with label order a linear extension.

Relations are stored as the full strict order relation (transitively
closed), not just the Hasse diagram.  Every operation that returns a
Poset preserves the labeling invariant i < j whenever i precedes j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Poset:
    """A finite poset: `n` elements labeled 1..n, `rel` the strict order."""

    n: int
    rel: FrozenSet[Pair]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("poset size must be nonnegative")
        if not isinstance(self.rel, frozenset):
            object.__setattr__(self, "rel", frozenset(self.rel))
        above: List[set] = [set() for _ in range(self.n + 1)]
        for i, j in self.rel:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"bad relation ({i},{j}) for n={self.n}")
            above[i].add(j)
        for i, j in self.rel:
            if not above[j] <= above[i]:
                raise ValueError(f"relation not transitively closed above ({i},{j})")

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, rel={sorted(self.rel)})"

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.rel

    def comparable(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.rel or (j, i) in self.rel


def transitive_closure(pairs: Iterable[Pair], n: int) -> Poset:
    """Build a Poset from generating pairs, closing transitively.

    Each pair (i, j) asserts i < j in labels as well as in the order;
    pairs violating that are rejected rather than silently reoriented.
    """
    pairs = list(pairs)
    for i, j in pairs:
        if not (1 <= i < j <= n):
            raise ValueError(f"generator ({i},{j}) is not an ascending pair within 1..{n}")
    above: List[set] = [set() for _ in range(n + 1)]
    for i, j in pairs:
        above[i].add(j)
    # Floyd-Warshall style closure; labels are already a topological order.
    for k in range(n, 0, -1):
        for i in range(1, n + 1):
            if k in above[i]:
                above[i] |= above[k]
    rel = frozenset((i, j) for i in range(1, n + 1) for j in above[i])
    return Poset(n, rel)


def chain(n: int) -> Poset:
    return Poset(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def antichain(n: int) -> Poset:
    return Poset(n, frozenset())


def dual(P: Poset) -> Poset:
    """Opposite order, relabeled i -> n+1-i to keep labels a linear extension."""
    n = P.n
    return Poset(n, frozenset((n + 1 - j, n + 1 - i) for i, j in P.rel))


def disjoint_union(P: Poset, Q: Poset) -> Poset:
    shift = P.n
    rel = set(P.rel)
    rel.update((i + shift, j + shift) for i, j in Q.rel)
    return Poset(P.n + Q.n, frozenset(rel))


def lex_sum(P: Poset, Q: Poset) -> Poset:
    """Ordinal sum: every element of P below every element of Q."""
    shift = P.n
    rel = set(P.rel)
    rel.update((i + shift, j + shift) for i, j in Q.rel)
    rel.update((i, j + shift) for i in range(1, P.n + 1) for j in range(1, Q.n + 1))
    return Poset(P.n + Q.n, frozenset(rel))


def induced(P: Poset, keep: Iterable[int]) -> Poset:
    """Induced subposet on `keep`, labels compacted preserving order."""
    keep = sorted(set(keep))
    for x in keep:
        if not (1 <= x <= P.n):
            raise ValueError(f"element {x} not in poset")
    newlabel = {x: i + 1 for i, x in enumerate(keep)}
    rel = frozenset((newlabel[i], newlabel[j]) for i, j in P.rel if i in newlabel and j in newlabel)
    return Poset(len(keep), rel)


def remove(P: Poset, x: int) -> Poset:
    return induced(P, (y for y in range(1, P.n + 1) if y != x))


@lru_cache(maxsize=None)
def _lb_map(P: Poset) -> Tuple[FrozenSet[int], ...]:
    below: List[set] = [set() for _ in range(P.n + 1)]
    for i, j in P.rel:
        below[j].add(i)
    return tuple(frozenset(s) for s in below)


@lru_cache(maxsize=None)
def _ub_map(P: Poset) -> Tuple[FrozenSet[int], ...]:
    above: List[set] = [set() for _ in range(P.n + 1)]
    for i, j in P.rel:
        above[i].add(j)
    return tuple(frozenset(s) for s in above)


def lb(P: Poset, x: int) -> FrozenSet[int]:
    """Strict lower bounds {y : y < x}."""
    return _lb_map(P)[x]


def ub(P: Poset, x: int) -> FrozenSet[int]:
    """Strict upper bounds {y : y > x}."""
    return _ub_map(P)[x]


def maximal(P: Poset) -> Tuple[int, ...]:
    um = _ub_map(P)
    return tuple(x for x in range(1, P.n + 1) if not um[x])


def minimal(P: Poset) -> Tuple[int, ...]:
    lm = _lb_map(P)
    return tuple(x for x in range(1, P.n + 1) if not lm[x])


@lru_cache(maxsize=None)
def covers(P: Poset) -> FrozenSet[Pair]:
    """Hasse diagram: pairs (i, j) with i < j and nothing strictly between."""
    out = set()
    for i, j in P.rel:
        if not (ub(P, i) & lb(P, j)):
            out.add((i, j))
    return frozenset(out)


@lru_cache(maxsize=None)
def components(P: Poset) -> Tuple[Tuple[int, ...], ...]:
    """Connected components of the comparability graph, as sorted label tuples."""
    adj: List[set] = [set() for _ in range(P.n + 1)]
    for i, j in P.rel:
        adj[i].add(j)
        adj[j].add(i)
    seen = set()
    comps = []
    for start in range(1, P.n + 1):
        if start in seen:
            continue
        stack = [start]
        comp = []
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            comp.append(x)
            stack.extend(adj[x] - seen)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def is_antichain(P: Poset, S: Iterable[int]) -> bool:
    S = list(S)
    return all(not P.comparable(a, b) for a, b in itertools.combinations(S, 2))


def antichains_in(P: Poset, S: Iterable[int]) -> List[FrozenSet[int]]:
    """All antichains contained in S, in size-lexicographic order.

    The empty antichain comes first, then singletons ascending, then
    pairs in lexicographic order, and so on.
    """
    S = sorted(set(S))
    out: List[Tuple[int, ...]] = []

    def grow(prefix: Tuple[int, ...], rest: Sequence[int]) -> None:
        out.append(prefix)
        for idx, x in enumerate(rest):
            if all(not P.comparable(x, y) for y in prefix):
                grow(prefix + (x,), rest[idx + 1:])

    grow((), S)
    out.sort(key=lambda t: (len(t), t))
    return [frozenset(t) for t in out]


def is_y_free_below(P: Poset, m: int) -> bool:
    """No induced 4-element poset with two incomparable elements under a
    2-chain inside {x : x <= m}.

    Any element c < m with an incomparable pair below it closes such a
    copy using m itself as the top, so checking that is sufficient.
    """
    for c in lb(P, m):
        bs = sorted(lb(P, c))
        for a, b in itertools.combinations(bs, 2):
            if not P.comparable(a, b):
                return False
    return True


def _lb_sets_chain(P: Poset) -> bool:
    sets = sorted((_lb_map(P)[x] for x in range(1, P.n + 1)), key=lambda s: (len(s), sorted(s)))
    return all(a <= b for a, b in zip(sets, sets[1:]))


def _two_two_free(P: Poset) -> bool:
    rel = sorted(P.rel)
    for (a, b), (c, d) in itertools.combinations(rel, 2):
        if len({a, b, c, d}) < 4:
            continue
        if not (P.comparable(a, c) or P.comparable(a, d)
                or P.comparable(b, c) or P.comparable(b, d)):
            return False
    return True


def is_interval(P: Poset) -> bool:
    """Whether P is an interval order.

    Computed two ways (no induced pair of disjoint 2-chains; lower-bound
    sets totally ordered by inclusion) which must agree.
    """
    a = _two_two_free(P)
    b = _lb_sets_chain(P)
    assert a == b, "interval order characterizations disagree"
    return a


def sorted_rel(P: Poset) -> Tuple[Pair, ...]:
    """The relation as a lexicographically sorted tuple (fixed cell order)."""
    return tuple(sorted(P.rel))


# ---------------------------------------------------------------------------
# Canonical form

def _series_cuts(P: Poset) -> List[int]:
    # k is a cut when every element <= k lies below every element > k.
    # With labels a linear extension, any series cut is such a prefix.
    n = P.n
    crossing = [0] * (n + 1)
    for i, j in P.rel:
        crossing[i] += 1
        crossing[j] -= 1
    cuts = []
    running = 0
    for k in range(1, n):
        running += crossing[k]
        if running == k * (n - k):
            cuts.append(k)
    return cuts


def _refine(P: Poset, colors: Dict[int, int]) -> Dict[int, int]:
    lbm, ubm = _lb_map(P), _ub_map(P)
    while True:
        sig = {
            x: (
                colors[x],
                tuple(sorted(colors[y] for y in lbm[x])),
                tuple(sorted(colors[y] for y in ubm[x])),
            )
            for x in colors
        }
        ranks = {s: r for r, s in enumerate(sorted(set(sig.values())))}
        new = {x: ranks[sig[x]] for x in colors}
        if new == colors:
            return colors
        colors = new


def _encode_discrete(P: Poset, colors: Dict[int, int]) -> bytes:
    pos = {x: colors[x] for x in colors}
    pairs = sorted((pos[i], pos[j]) for i, j in P.rel)
    return repr((P.n, pairs)).encode()


def _prime_key(P: Poset) -> bytes:
    def search(colors: Dict[int, int]) -> bytes:
        colors = _refine(P, colors)
        cells: Dict[int, List[int]] = {}
        for x, c in colors.items():
            cells.setdefault(c, []).append(x)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            return _encode_discrete(P, colors)
        best = None
        for x in sorted(target):
            branched = {y: 2 * colors[y] + (0 if y == x else 1) for y in colors}
            code = search(branched)
            if best is None or code < best:
                best = code
        return best

    return search({x: 0 for x in range(1, P.n + 1)})


@lru_cache(maxsize=None)
def canonical_key(P: Poset) -> bytes:
    """Isomorphism-invariant key: equal keys iff isomorphic posets.

    Disconnected posets hash as the multiset of component keys, ordinal
    sums as the sequence of part keys, and the remaining primes go
    through color refinement with individualization on ties.
    """
    if P.n == 0:
        return b"E"
    comps = components(P)
    if len(comps) > 1:
        inner = b",".join(sorted(canonical_key(induced(P, c)) for c in comps))
        return b"P(" + inner + b")"
    cuts = _series_cuts(P)
    if cuts:
        bounds = [0] + cuts + [P.n]
        parts = [range(lo + 1, hi + 1) for lo, hi in zip(bounds, bounds[1:])]
        inner = b",".join(canonical_key(induced(P, part)) for part in parts)
        return b"S(" + inner + b")"
    return b"C(" + _prime_key(P) + b")"


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return P.n == Q.n and canonical_key(P) == canonical_key(Q)


# ---------------------------------------------------------------------------
# Text format

def parse_poset(text: str) -> Poset:
    """Read the line format: first data line n, then one 'i j' pair per line.

    Blank lines and '#' comments are skipped.  Pairs are closure
    generators, so the file may list covers only.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ValueError("line 1: empty poset description")
    first_no, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ValueError(
            f"line {first_no}: first data line must be the element count, got {first!r}"
        )
    pairs = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'i j' pair, got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {line!r}")
        if not (1 <= i < j <= n):
            raise ValueError(
                f"line {lineno}: pair ({i},{j}) is not ascending within 1..{n}"
            )
        pairs.append((i, j))
    return transitive_closure(pairs, n)


def format_poset(P: Poset) -> str:
    lines = [str(P.n)]
    lines.extend(f"{i} {j}" for i, j in sorted(covers(P)))
    return "\n".join(lines) + "\n"
