"""Reduction engine: class-count polynomials via poset system reductions.

Computes k(P) in the t = q - 1 basis by expanding over antichains below
a maximal element, shrinking each system with the relation-dropping D
step and antichain pruning, and recursing on the smaller poset.  Systems
that refuse to reduce under every maximal element of the poset and its
dual are handed to a numeric interpolation fallback whose results are
labelled separately and never promoted to proven.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .linalg import is_prime
from .oracle import DEFAULT_BUDGET, BudgetExceeded, PosetSystem, count_k_system
from .polyt import ONE, InterpolationError, PolyT, interpolate
from .poset import (
    Poset,
    antichains_in,
    canonical_key,
    components,
    dual,
    induced,
    is_interval,
    is_y_free_below,
    lb,
    maximal,
    remove,
    transitive_closure,
    ub,
)

# bump when the reduction or fallback semantics change; cached results
# from other versions are ignored
ENGINE_VERSION = 1


@dataclass(frozen=True)
class Failure:
    """A system the reduction loop could not finish; holds its fixed point."""

    stuck: PosetSystem


def apply_D(S: PosetSystem) -> Poset:
    """Drop the relations (a, x) where a is the unique antichain member below x.

    Only x strictly between a and m qualify.  The remainder is asserted
    to still be transitively closed and is rebuilt through the closure
    as a guard.
    """
    P, m, A = S.poset, S.m, S.antichain
    removals = set()
    for x in range(1, P.n + 1):
        if x == m or (x, m) not in P.rel:
            continue
        hits = A & lb(P, x)
        if len(hits) == 1:
            (a,) = hits
            removals.add((a, x))
    if not removals:
        return P
    kept = [p for p in sorted(P.rel) if p not in removals]
    Q = transitive_closure(kept, P.n)
    assert set(Q.rel) == set(kept), "relation removal broke transitive closure"
    return Q


def prune_antichain(S: PosetSystem) -> PosetSystem:
    """Drop antichain members dominated by another (larger up-set, smaller down-set).

    Scans dominators in ascending label order, so mutual domination
    keeps the lower label.  Runs to a fixed point.
    """
    P = S.poset
    alive = sorted(S.antichain)
    changed = True
    while changed:
        changed = False
        for a in list(alive):
            if a not in alive:
                continue
            for b in list(alive):
                if b == a or a not in alive:
                    continue
                if ub(P, a) >= ub(P, b) and lb(P, a) <= lb(P, b):
                    alive.remove(b)
                    changed = True
    return PosetSystem(P, S.m, frozenset(alive))


def reduce_system(S: PosetSystem) -> Union[Poset, Failure]:
    """Run D and pruning to a fixed point, then try to drop m.

    Returns the reduced poset (the fixed point minus m) when no
    antichain member has anything strictly between it and m; otherwise
    returns Failure carrying the fixed point.
    """
    cap = len(S.poset.rel) + len(S.antichain) + 1
    cur = S
    passes = 0
    while True:
        Q = apply_D(cur)
        nxt = prune_antichain(PosetSystem(Q, cur.m, cur.antichain))
        if set(Q.rel) == set(cur.poset.rel) and nxt.antichain == cur.antichain:
            break
        cur = nxt
        passes += 1
        if passes > cap:
            raise RuntimeError("reduction loop failed to terminate within its pass cap")
    P, m, A = cur.poset, cur.m, cur.antichain
    for a in A:
        for x in ub(P, a):
            if x != m and (x, m) in P.rel:
                return Failure(cur)
    return remove(P, m)


_STATUS_RANK = {"proven": 0, "interpolated": 1, "unresolved": 2}


def _combine_status(statuses: Iterable[str]) -> str:
    return max(statuses, key=_STATUS_RANK.__getitem__, default="proven")


@dataclass(frozen=True)
class KResult:
    """Outcome of a class-count computation.

    poly is None exactly when status is unresolved; residual lists the
    systems that could not be handled.
    """

    status: str
    poly: Optional[PolyT]
    residual: Tuple[PosetSystem, ...]
    trace: dict


def _node(
    key: bytes,
    m: Optional[int] = None,
    antichain: Optional[List[int]] = None,
    rule: Optional[str] = None,
    children: Sequence[dict] = (),
    **extra,
) -> dict:
    d = {
        "poset_key": key.hex(),
        "m": m,
        "antichain": antichain,
        "rule": rule,
        "children": list(children),
    }
    d.update(extra)
    return d


def _stamp(result: KResult, A: Iterable[int]) -> dict:
    t = dict(result.trace)
    t["antichain"] = sorted(A)
    return t


def _next_prime(q: int) -> int:
    q += 1
    while not is_prime(q):
        q += 1
    return q


class Engine:
    """Shared memo tables, budget, and thread policy for k computations."""

    def __init__(self, budget: int = DEFAULT_BUDGET, threads: int = 1):
        self.budget = budget
        self.threads = threads
        self.proven: Dict[bytes, PolyT] = {}
        self.interpolated: Dict[bytes, PolyT] = {}
        self._lock = threading.Lock()
        self._oracle_lock = threading.Lock()

    # memo helpers

    def _memo_get(self, key: bytes, dkey: bytes) -> Optional[Tuple[str, PolyT]]:
        with self._lock:
            for k in (key, dkey):
                if k in self.proven:
                    return "proven", self.proven[k]
            for k in (key, dkey):
                if k in self.interpolated:
                    return "interpolated", self.interpolated[k]
        return None

    def _memo_put(self, key: bytes, status: str, poly: PolyT) -> None:
        with self._lock:
            if status == "proven":
                self.proven.setdefault(key, poly)
            elif status == "interpolated":
                self.interpolated.setdefault(key, poly)

    def compute_k(self, P: Poset) -> KResult:
        return self._compute(P, 0)

    def _compute(self, P: Poset, depth: int) -> KResult:
        key = canonical_key(P)
        if not P.rel:
            self._memo_put(key, "proven", ONE)
            return KResult("proven", ONE, (), _node(key, rule="memo", status="proven"))
        hit = self._memo_get(key, canonical_key(dual(P)))
        if hit is not None:
            status, poly = hit
            return KResult(status, poly, (), _node(key, rule="memo", status=status))

        comps = components(P)
        if len(comps) > 1:
            parts = self._map(
                lambda c: self._compute(induced(P, c), depth + 1), comps, depth
            )
            status = _combine_status(r.status for r in parts)
            poly: Optional[PolyT] = ONE
            for r in parts:
                poly = poly * r.poly if (poly is not None and r.poly is not None) else None
            residual = tuple(s for r in parts for s in r.residual)
            trace = _node(
                key,
                rule="component",
                children=[r.trace for r in parts],
                status=status,
            )
            if poly is not None:
                self._memo_put(key, status, poly)
            return KResult(status, poly, residual, trace)

        return self._expand(P, key, depth)

    def _map(self, fn: Callable, items: Sequence, depth: int) -> List:
        if depth == 0 and self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=min(self.threads, len(items))) as pool:
                return list(pool.map(fn, items))
        return [fn(x) for x in items]

    def _expand(self, P: Poset, key: bytes, depth: int) -> KResult:
        Pd = dual(P)
        attempts: List[Tuple[Poset, int, bool]] = [
            (P, m, False) for m in sorted(maximal(P))
        ] + [(Pd, m, True) for m in sorted(maximal(Pd))]

        best = None
        chosen = None
        for ai, (Q, m, flip) in enumerate(attempts):
            A_list = antichains_in(Q, lb(Q, m))
            outs = [reduce_system(PosetSystem(Q, m, A)) for A in A_list]
            fails = sum(isinstance(o, Failure) for o in outs)
            if fails == 0:
                chosen = (Q, m, flip, A_list, outs)
                break
            if best is None or fails < best[0]:
                best = (fails, ai, A_list, outs)
        if chosen is None:
            fails, ai, A_list, outs = best
            Q, m, flip = attempts[ai]
            chosen = (Q, m, flip, A_list, outs)

        Q, m, flip, A_list, outs = chosen

        def term(pair: Tuple[frozenset, Union[Poset, Failure]]) -> Tuple[frozenset, KResult]:
            A, out = pair
            if isinstance(out, Failure):
                return A, self.fallback_system(out.stuck)
            return A, self._compute(out, depth + 1)

        results = self._map(term, list(zip(A_list, outs)), depth)

        status = _combine_status(r.status for _, r in results)
        total: Optional[PolyT] = PolyT()
        partial = PolyT()
        for A, r in results:
            if r.poly is not None:
                partial = partial + r.poly.scale_tk(1, len(A))
            if total is not None and r.poly is not None:
                total = total + r.poly.scale_tk(1, len(A))
            else:
                total = None
        residual = tuple(s for _, r in results for s in r.residual)
        children = [_stamp(r, A) for A, r in results]
        inner = _node(
            canonical_key(Q), m=m, rule="D+remove_max", children=children, status=status
        )
        if total is None:
            inner["partial_poly"] = str(partial)
        trace = _node(key, rule="dual", children=[inner], status=status) if flip else inner
        if total is not None:
            self._memo_put(key, status, total)
        return KResult(status, total, residual, trace)

    def fallback_system(self, S: PosetSystem, degree_bound: Optional[int] = None) -> KResult:
        """Sample the system count at primes and fit a polynomial in t.

        The fit is validated on held-out primes; success is labelled
        interpolated, anything else unresolved with the system recorded.
        """
        P = S.poset
        r = len(P.rel)
        bound = r if degree_bound is None else degree_bound
        needed = bound + 2
        samples: List[Tuple[int, int]] = []
        q = 2
        budget_stop = None
        while len(samples) < needed:
            if q**r > self.budget:
                budget_stop = q
                break
            try:
                with self._oracle_lock:
                    v = count_k_system(S, q, budget=self.budget)
            except BudgetExceeded:
                budget_stop = q
                break
            samples.append((q, v))
            q = _next_prime(q)

        skey = canonical_key(P)
        base = dict(
            m=S.m,
            antichain=sorted(S.antichain),
            rule="fallback",
            samples=[[a, b] for a, b in samples],
        )
        if len(samples) < needed:
            node = _node(
                skey,
                status="unresolved",
                reason=f"budget stops sampling at q={budget_stop}, "
                f"{len(samples)} of {needed} samples",
                **base,
            )
            return KResult("unresolved", None, (S,), node)
        try:
            poly = interpolate(samples, bound)
        except InterpolationError as e:
            diagnostics = {
                "residuals": [[a, b, c] for a, b, c in e.residuals],
                "even_samples": [[a, b] for a, b in samples if a == 2],
            }
            odd = [(a, b) for a, b in samples if a != 2]
            diagnostics["odd_fit"] = None
            diagnostics["odd_residuals"] = []
            if len(odd) >= 2:
                try:
                    odd_poly = interpolate(odd, len(odd) - 2)
                    diagnostics["odd_fit"] = str(odd_poly)
                except InterpolationError as oe:
                    diagnostics["odd_residuals"] = [[a, b, c] for a, b, c in oe.residuals]
            node = _node(
                skey,
                status="unresolved",
                reason="samples do not fit one integer polynomial",
                diagnostics=diagnostics,
                **base,
            )
            return KResult("unresolved", None, (S,), node)
        node = _node(
            skey,
            status="interpolated",
            fit_points=[[a, b] for a, b in samples[: bound + 1]],
            holdouts=[[a, b] for a, b in samples[bound + 1 :]],
            **base,
        )
        return KResult("interpolated", poly, (), node)


def compute_k(
    P: Poset,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    engine: Optional[Engine] = None,
) -> KResult:
    """Class-count polynomial of U_P in the t = q - 1 basis."""
    eng = engine if engine is not None else Engine(budget=budget, threads=threads)
    return eng.compute_k(P)


def fallback_system(
    S: PosetSystem,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    degree_bound: Optional[int] = None,
) -> KResult:
    """One-off numeric fallback for a single system."""
    return Engine(budget=budget, threads=threads).fallback_system(S, degree_bound)


def reducibility_guarantees(P: Poset) -> dict:
    """Report which structural criterion, if any, rules out fallback.

    y_free: no element with an incomparable pair below it also has
    something above it.  interval_unique_max: no induced 2+2 and a
    single maximal element.
    """
    y_free = all(is_y_free_below(P, m) for m in maximal(P))
    interval_um = is_interval(P) and len(maximal(P)) == 1
    theorem = "y_free" if y_free else ("interval_unique_max" if interval_um else None)
    return {
        "y_free": y_free,
        "interval_unique_max": interval_um,
        "guaranteed": y_free or interval_um,
        "theorem": theorem,
    }


def trace_has_fallback(trace: dict) -> bool:
    """True when any node in the trace used the numeric fallback."""
    if trace.get("rule") == "fallback":
        return True
    return any(trace_has_fallback(c) for c in trace.get("children", ()))


def count_fallbacks(trace: dict) -> int:
    """Number of trace nodes that used the numeric fallback.

    Memo hits hide repeats, so this counts distinct systems.
    """
    own = 1 if trace.get("rule") == "fallback" else 0
    return own + sum(count_fallbacks(c) for c in trace.get("children", ()))
