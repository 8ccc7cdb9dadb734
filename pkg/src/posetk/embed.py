"""Embedding certificates: constructive poset-into-chain embeddings.

A strong step records a system (Q, m, {a}) whose D-reduction minus m is
the previous poset; the class count of the previous poset then equals
the system count, which is how counts transfer up a sequence.  Weak
certificates may also flip to the dual poset and may package runs of
strong steps as composite steps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import apply_D
from .oracle import DEFAULT_BUDGET, PosetSystem, count_k, count_k_system
from .poset import (
    Poset,
    antichain,
    canonical_key,
    chain,
    covers,
    disjoint_union,
    dual,
    induced,
    lb,
    lex_sum,
    maximal,
    remove,
    transitive_closure,
    ub,
)

STEP_RULES = (
    "strong-D",
    "dual",
    "two-chains",
    "add-top",
    "max-el",
    "antichain-to-chain",
    "compose",
)


@dataclass(frozen=True)
class EmbeddingStep:
    """One link in an embedding sequence.

    strong-D steps carry the system on `after`; dual steps carry
    nothing; composite rules carry their parameters and expanded
    substeps.
    """

    rule: str
    before: Poset
    after: Poset
    system: Optional[PosetSystem] = None
    params: Tuple[int, ...] = ()
    substeps: Tuple["EmbeddingStep", ...] = ()

    def atomic_count(self) -> Tuple[int, int]:
        """(strong-D steps, dual steps) counted through composites."""
        if self.rule == "strong-D":
            return 1, 0
        if self.rule == "dual":
            return 0, 1
        s = d = 0
        for sub in self.substeps:
            a, b = sub.atomic_count()
            s, d = s + a, d + b
        return s, d


@dataclass(frozen=True)
class EmbeddingCertificate:
    """An ordered embedding sequence from source to target."""

    source: Poset
    target: Poset
    kind: str
    steps: Tuple[EmbeddingStep, ...]

    @property
    def length(self) -> int:
        """Number of atomic steps, dual flips included."""
        return sum(sum(s.atomic_count()) for s in self.steps)


def _strong(before: Poset, system: PosetSystem) -> EmbeddingStep:
    if len(system.antichain) != 1:
        raise ValueError("strong steps need a one-element antichain")
    return EmbeddingStep("strong-D", before, system.poset, system=system)


def _dual_step(before: Poset) -> EmbeddingStep:
    return EmbeddingStep("dual", before, dual(before))


# certificate constructors


def max_el_cert(P: Poset, m: int) -> EmbeddingCertificate:
    """Connect maximal m to everything else: P into (P-m) + chain(k+1).

    k = |P| - |lb(m)| - 1.  The construction walks backward from the
    target, peeling one new chain element per step.
    """
    if m not in maximal(P):
        raise ValueError(f"{m} is not maximal")
    X = sorted((x for x in range(1, P.n + 1) if x != m and (x, m) not in P.rel), reverse=True)
    k = len(X)
    assert k == P.n - len(lb(P, m)) - 1
    base = remove(P, m)
    X_rel = [x - 1 if x > m else x for x in X]
    cur = lex_sum(base, chain(k + 1))
    seq = [cur]
    systems = []
    for i, x in enumerate(X_rel, start=1):
        top = base.n + k + 2 - i
        S = PosetSystem(cur, top, frozenset({x}))
        systems.append(S)
        cur = remove(apply_D(S), top)
        seq.append(cur)
    assert canonical_key(cur) == canonical_key(P), "backward walk did not recover the poset"
    steps = tuple(
        _strong(seq[i + 1], systems[i]) for i in reversed(range(k))
    )
    return EmbeddingCertificate(P, seq[0], "strong", steps)


def two_chains_cert(a: int, b: int) -> EmbeddingCertificate:
    """chain(a) disjoint chain(b) into chain(2a+b), one step per unit of a."""
    if a < 0 or b < 0:
        raise ValueError("chain lengths must be nonnegative")
    if a == 0:
        C = chain(b)
        return EmbeddingCertificate(C, C, "strong", ())
    inner = two_chains_cert(a - 1, b + 1)
    lifted = lift_cert(inner, below=chain(1))
    first_after = lex_sum(chain(1), disjoint_union(chain(a - 1), chain(b + 1)))
    S = PosetSystem(first_after, a + b + 1, frozenset({1}))
    first = _strong(disjoint_union(chain(a), chain(b)), S)
    return EmbeddingCertificate(
        first.before, lifted.target, "strong", (first,) + lifted.steps
    )


def antichain_to_chain_cert(n: int) -> EmbeddingCertificate:
    """antichain(n) into chain(2n-1) in n-1 steps, merging one point at a time."""
    if n < 1:
        raise ValueError("need at least one element")
    steps: List[EmbeddingStep] = []
    source = antichain(n)
    cur = source
    for j in range(1, n):
        merge = two_chains_cert(1, 2 * j - 1)
        rest = n - j - 1
        lifted = lift_cert(merge, disjoint=antichain(rest)) if rest else merge
        steps.extend(lifted.steps)
        cur = lifted.target
    return EmbeddingCertificate(source, cur, "strong", tuple(steps))


def _flat_steps(cert: EmbeddingCertificate) -> List[EmbeddingStep]:
    out: List[EmbeddingStep] = []
    for s in cert.steps:
        if s.rule in ("strong-D", "dual"):
            out.append(s)
        else:
            out.extend(s.substeps)
    return out


def _add_top_blocks(inner: EmbeddingCertificate, R: Poset) -> List[EmbeddingStep]:
    """Realize inner = P into Q as P+R into Q+R+chain(k), two steps per inner step."""
    blocks: List[EmbeddingStep] = []
    for j, st in enumerate(_flat_steps(inner), start=1):
        if st.rule != "strong-D":
            raise ValueError("inner certificate must be strong")
        Rj = lex_sum(R, chain(j - 1))
        Pj = st.after
        inner_sys = st.system
        top_poset = lex_sum(Pj, lex_sum(Rj, chain(1)))
        top = top_poset.n
        S2 = PosetSystem(top_poset, top, frozenset({inner_sys.m}))
        mid = remove(apply_D(S2), top)
        S1 = PosetSystem(mid, inner_sys.m, inner_sys.antichain)
        before1 = lex_sum(st.before, Rj)
        assert canonical_key(remove(apply_D(S1), inner_sys.m)) == canonical_key(before1)
        blocks.append(_strong(before1, S1))
        blocks.append(_strong(mid, S2))
    return blocks


def add_top_cert(inner: EmbeddingCertificate, R: Poset) -> EmbeddingCertificate:
    """Lift inner = P into Q to P+R into Q+R+chain(k), doubling the length."""
    if inner.kind != "strong":
        raise ValueError("inner certificate must be strong")
    k = inner.length
    if k == 0:
        src = lex_sum(inner.source, R)
        return EmbeddingCertificate(src, src, "strong", ())
    blocks = _add_top_blocks(inner, R)
    return EmbeddingCertificate(
        lex_sum(inner.source, R), blocks[-1].after, "strong", tuple(blocks)
    )


def lift_cert(
    cert: EmbeddingCertificate,
    below: Optional[Poset] = None,
    disjoint: Optional[Poset] = None,
) -> EmbeddingCertificate:
    """Context lift: R + P into R + Q and W disjoint P into W disjoint Q.

    Both lifts keep the length; below-context R goes under everything,
    disjoint context W rides along unchanged.
    """

    def embed_poset(Q: Poset) -> Poset:
        out = Q if disjoint is None else disjoint_union(Q, disjoint)
        return out if below is None else lex_sum(below, out)

    shift = below.n if below is not None else 0

    def lift_step(s: EmbeddingStep) -> EmbeddingStep:
        if s.rule == "strong-D":
            S = s.system
            lifted = PosetSystem(
                embed_poset(S.poset),
                S.m + shift,
                frozenset(a + shift for a in S.antichain),
            )
            return _strong(embed_poset(s.before), lifted)
        if s.rule == "dual":
            raise ValueError("only strong certificates lift")
        return EmbeddingStep(
            s.rule,
            embed_poset(s.before),
            embed_poset(s.after),
            params=s.params,
            substeps=tuple(lift_step(x) for x in s.substeps),
        )

    return EmbeddingCertificate(
        embed_poset(cert.source),
        embed_poset(cert.target),
        cert.kind,
        tuple(lift_step(s) for s in cert.steps),
    )


def _comparable_to_all(P: Poset, x: int) -> bool:
    return len(lb(P, x)) + len(ub(P, x)) == P.n - 1


def chain_univ_cert(P: Poset) -> EmbeddingCertificate:
    """Strong embedding of any poset into chain(|P|^2 - 2|rel(P)|)."""
    F = [x for x in range(1, P.n + 1) if not _comparable_to_all(P, x)]
    if not F:
        return EmbeddingCertificate(P, P, "strong", ())
    candidates = [x for x in F if not any((x, y) in P.rel for y in F)]
    m = min(candidates)
    U = ub(P, m)
    keep = [x for x in range(1, P.n + 1) if x not in U]
    P0 = induced(P, keep)
    m0 = m - sum(1 for u in U if u < m)
    stage = add_top_cert(max_el_cert(P0, m0), chain(len(U)))
    rest = chain_univ_cert(stage.target)
    steps = stage.steps + rest.steps
    return EmbeddingCertificate(P, rest.target, "strong", steps)


# the 13-element diamond fixture and its efficient chain embedding

_MIDDLE_MINIMA = {5: (1, 4), 6: (1, 2), 7: (2, 3), 8: (1, 3), 9: (2, 4), 10: (3, 4)}
_MAX_MIDDLES = {11: (5, 7, 8, 9), 12: (5, 6, 7, 10), 13: (6, 8, 9, 10)}


def p_diamond() -> Poset:
    """13-element poset with a parity-dependent class count."""
    pairs = []
    for mid, mins in _MIDDLE_MINIMA.items():
        pairs.extend((lo, mid) for lo in mins)
    for top, mids in _MAX_MIDDLES.items():
        pairs.extend((mid, top) for mid in mids)
    return transitive_closure(pairs, 13)


def _attach_step(P: Poset, M: int, x: int) -> Tuple[Poset, EmbeddingStep]:
    """Add relation (x, M) at the cost of one new element over M's chain."""
    uppers = ub(P, M)
    top = max(uppers) if uppers else M
    t = P.n + 1
    pairs = list(P.rel) + [(x, M)] + [(y, t) for y in sorted(lb(P, top) | {top})]
    after = transitive_closure(pairs, P.n + 1)
    S = PosetSystem(after, t, frozenset({x}))
    assert canonical_key(remove(apply_D(S), t)) == canonical_key(P)
    return after, _strong(P, S)


def _composite(rule: str, flat: EmbeddingCertificate, params: Tuple[int, ...]) -> EmbeddingStep:
    return EmbeddingStep(
        rule,
        flat.source,
        flat.target,
        params=params,
        substeps=tuple(_flat_steps(flat)),
    )


def p_diamond_c59_cert() -> EmbeddingCertificate:
    """Weak certificate taking the diamond fixture into chain(59)."""
    P = p_diamond()
    steps: List[EmbeddingStep] = []
    cur = P

    # make each maximal element comparable to all six middle elements
    for M in (11, 12, 13):
        for x in sorted(set(_MIDDLE_MINIMA) - set(_MAX_MIDDLES[M])):
            cur, st = _attach_step(cur, M, x)
            steps.append(st)

    steps.append(_dual_step(cur))
    cur = dual(cur)

    # same treatment for the old minima, now on top of the dual
    n1 = cur.n
    for old_min in (1, 2, 3, 4):
        mu = n1 + 1 - old_min
        missing = [
            mid for mid, mins in _MIDDLE_MINIMA.items() if old_min not in mins
        ]
        for x in sorted(n1 + 1 - mid for mid in missing):
            cur, st = _attach_step(cur, mu, x)
            steps.append(st)

    triple3 = disjoint_union(disjoint_union(chain(3), chain(3)), chain(3))
    quad4 = disjoint_union(
        disjoint_union(chain(4), chain(4)), disjoint_union(chain(4), chain(4))
    )
    p_prime = lex_sum(triple3, lex_sum(antichain(6), quad4))
    assert canonical_key(cur) == canonical_key(p_prime), "attach stages missed P-prime"

    # merge the four top chains pairwise into one
    R3 = lex_sum(triple3, antichain(6))
    steps.append(
        _composite(
            "two-chains",
            lift_cert(two_chains_cert(4, 4), below=R3, disjoint=disjoint_union(chain(4), chain(4))),
            (4, 4),
        )
    )
    steps.append(
        _composite(
            "two-chains", lift_cert(two_chains_cert(4, 12), below=R3, disjoint=chain(4)), (4, 12)
        )
    )
    steps.append(_composite("two-chains", lift_cert(two_chains_cert(4, 20), below=R3), (4, 20)))

    steps.append(_dual_step(lex_sum(R3, chain(28))))

    # now the three 3-chains are on top; merge them too
    R4 = lex_sum(chain(28), antichain(6))
    steps.append(
        _composite(
            "two-chains", lift_cert(two_chains_cert(3, 3), below=R4, disjoint=chain(3)), (3, 3)
        )
    )
    steps.append(_composite("two-chains", lift_cert(two_chains_cert(3, 9), below=R4), (3, 9)))

    # collapse the middle antichain, then absorb the bottom chain
    inner = lift_cert(antichain_to_chain_cert(6), below=chain(28))
    final = add_top_cert(inner, chain(15))
    steps.append(_composite("add-top", final, (inner.length, 15)))

    cert = EmbeddingCertificate(P, final.target, "weak", tuple(steps))
    assert cert.target.rel == chain(59).rel
    return cert


# verification


@dataclass
class VerifyResult:
    ok: bool
    failures: List[Tuple[str, str]] = field(default_factory=list)
    steps_checked: int = 0
    numeric_checked: int = 0
    numeric_skipped: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _check_atomic(
    step: EmbeddingStep,
    path: str,
    res: VerifyResult,
    numeric: bool,
    qs: Sequence[int],
    budget: int,
) -> None:
    if step.rule == "dual":
        if canonical_key(step.after) != canonical_key(dual(step.before)):
            res.failures.append((path, "dual step: after is not the dual of before"))
        elif numeric:
            for q in qs:
                if q ** len(step.before.rel) <= budget:
                    if count_k(step.before, q, budget=budget) != count_k(
                        step.after, q, budget=budget
                    ):
                        res.failures.append((path, f"dual step changes the count at q={q}"))
                    res.numeric_checked += 1
                else:
                    res.numeric_skipped += 1
        res.steps_checked += 1
        return
    if step.rule != "strong-D":
        res.failures.append((path, f"unexpected atomic rule {step.rule}"))
        return
    S = step.system
    if S is None or len(S.antichain) != 1:
        res.failures.append((path, "strong step must carry a one-element system"))
        return
    if S.poset.rel != step.after.rel or S.poset.n != step.after.n:
        res.failures.append((path, "system poset differs from the step's after poset"))
        return
    reduced = remove(apply_D(S), S.m)
    if canonical_key(reduced) != canonical_key(step.before):
        res.failures.append((path, "D-reduction minus m does not give the before poset"))
        return
    res.steps_checked += 1
    if numeric:
        for q in qs:
            if q ** len(step.after.rel) <= budget and q ** len(step.before.rel) <= budget:
                if count_k(step.before, q, budget=budget) != count_k_system(
                    S, q, budget=budget
                ):
                    res.failures.append(
                        (path, f"system count differs from the count before, q={q}")
                    )
                res.numeric_checked += 1
            else:
                res.numeric_skipped += 1


def verify(
    cert: EmbeddingCertificate,
    numeric: bool = False,
    qs: Sequence[int] = (2, 3),
    budget: int = DEFAULT_BUDGET,
) -> VerifyResult:
    """Check a certificate; steps chain by isomorphism and each step justifies itself.

    Numeric mode additionally samples counts at the given primes where
    the enumeration fits the budget.
    """
    res = VerifyResult(ok=True)
    if cert.kind == "strong":
        for i, s in enumerate(cert.steps):
            if s.rule != "strong-D":
                res.failures.append((f"step {i}", "strong certificate with a non-strong step"))

    def walk(steps: Sequence[EmbeddingStep], prefix: str, src: Poset, dst: Poset) -> None:
        prev = src
        for i, s in enumerate(steps):
            path = f"{prefix}{i}"
            if canonical_key(s.before) != canonical_key(prev):
                res.failures.append((path, "step does not continue the previous poset"))
            if s.rule in ("strong-D", "dual"):
                _check_atomic(s, path, res, numeric, qs, budget)
            else:
                if s.rule not in STEP_RULES:
                    res.failures.append((path, f"unknown rule {s.rule}"))
                walk(s.substeps, path + ".", s.before, s.after)
            prev = s.after
        if canonical_key(prev) != canonical_key(dst):
            res.failures.append((prefix + "end", "sequence does not reach the target"))

    walk(cert.steps, "step ", cert.source, cert.target)
    res.ok = not res.failures
    return res


# JSON round trip


def poset_to_json(P: Poset) -> dict:
    return {"n": P.n, "covers": [list(c) for c in sorted(covers(P))]}


def poset_from_json(obj: dict) -> Poset:
    return transitive_closure([tuple(c) for c in obj["covers"]], obj["n"])


def _step_to_json(s: EmbeddingStep) -> dict:
    d = {
        "rule": s.rule,
        "before": poset_to_json(s.before),
        "after": poset_to_json(s.after),
    }
    if s.system is not None:
        d["m"] = s.system.m
        d["a"] = sorted(s.system.antichain)
    if s.params:
        d["params"] = list(s.params)
    if s.substeps:
        d["substeps"] = [_step_to_json(x) for x in s.substeps]
    return d


def _step_from_json(obj: dict) -> EmbeddingStep:
    before = poset_from_json(obj["before"])
    after = poset_from_json(obj["after"])
    system = None
    if "m" in obj:
        system = PosetSystem(after, obj["m"], frozenset(obj["a"]))
    return EmbeddingStep(
        obj["rule"],
        before,
        after,
        system=system,
        params=tuple(obj.get("params", ())),
        substeps=tuple(_step_from_json(x) for x in obj.get("substeps", ())),
    )


def cert_to_json(cert: EmbeddingCertificate) -> dict:
    return {
        "kind": cert.kind,
        "length": cert.length,
        "source": poset_to_json(cert.source),
        "target": poset_to_json(cert.target),
        "steps": [_step_to_json(s) for s in cert.steps],
    }


def cert_from_json(obj: dict) -> EmbeddingCertificate:
    return EmbeddingCertificate(
        poset_from_json(obj["source"]),
        poset_from_json(obj["target"]),
        obj["kind"],
        tuple(_step_from_json(s) for s in obj["steps"]),
    )
